#pragma once

#include <array>
#include <utility>

#include "ngoncert/mesh.hpp"
#include "ngoncert/sparse.hpp"

namespace ngoncert {

/// Per-element interval data derived purely from theta = 2*pi/n. Gradients are
/// dimensionless (the 1/h factor cancels against the element area in every
/// stiffness-type pairing, so those blocks do not depend on h).
struct ElementBlocks {
  int n = 0, m = 0;
  ThetaTrig trig;
  Interval h;       // 1/m
  Interval area;    // A_h = h^2 sin(theta) / 2
  Interval cot;     // cos/sin of theta

  // local basis gradients per orientation class (0 = up, 1 = down), indexed by
  // the triangle vertex slot
  std::array<std::array<std::array<Interval, 2>, 3>, 2> grad;
  // grad-dot-grad pairing integrals (h-free): K[class][a][b]
  std::array<std::array<std::array<Interval, 3>, 3>, 2> K;
  // mass integrals: area/12 * (1 + delta)
  std::array<std::array<Interval, 3>, 3> M;
  // global-frame partial pairings per slice and class:
  // pair[slice][class][2*alpha+beta][a][b] = integral of d_alpha psi_a d_beta psi_b
  std::vector<std::array<std::array<std::array<std::array<Interval, 3>, 3>, 4>, 2>> pair;
};

ElementBlocks element_blocks(const ThetaTrig& trig, int n, int m);

/// Reference gradients of Prop-style slice triangle basis functions,
/// enclosures of (-1, -tan(theta/2)), (1, -cos/sin), (0, 1/sin).
std::array<std::array<Interval, 2>, 3> element_gradients(const ThetaTrig& trig);

/// Lower/upper bounds on the spectrum of a P1 mass matrix via the element
/// eigenvalue and vertex multiplicity argument.
struct MassBounds {
  double lam_min_lo = 0.0;
  double lam_max_hi = 0.0;
};

/// Interior stiffness/mass system of the full polygon with Dirichlet
/// conditions imposed by restriction to interior nodes.
struct AssembledSystem {
  int n = 0, m = 0;
  int dof = 0;
  Interval h, area_h;
  SparseIntervalMatrix K0, M0;
  MassBounds mass_bounds; // multiplicities: min(n,6) and max(n,6)
};

AssembledSystem assemble_system(const SymmetricMesh& mesh, const ThetaTrig& trig);

/// Quotient system on one slice (symmetric subspace): nodes (r,c), 0<=c<r,
/// with the ray identification (r,r) == (r,0); energies are per-slice (the
/// symmetric-subspace forms divided by n), eigenvalues match the full system.
struct SliceSystem {
  int n = 0, m = 0;
  int dof = 0;
  Interval h, area_h;
  SparseIntervalMatrix K, M;
  MassBounds mass_bounds; // multiplicities: 1 (apex) and 6
};

SliceSystem assemble_slice_system(int n, int m, const ThetaTrig& trig);

/// Partial stiffness blocks on the two triangles adjacent to the moving
/// vertex: Kxx over T+ u T-; Kyy is the signed difference (T+ minus T-);
/// Kxy_pm the symmetrized mixed pairings on T+/-.
struct PartialBlocks {
  SparseIntervalMatrix Kxx, Kyy, Kxy_plus, Kxy_minus;
};

PartialBlocks assemble_partials(const SymmetricMesh& mesh, const ElementBlocks& blocks);

/// Streaming quadratic forms over the triangles of slice j (interior-indexed
/// point vectors; boundary values are zero).
/// pairing: integral over T_j of d_alpha x * d_beta y.
Interval slice_pairing(const SymmetricMesh& mesh, const ElementBlocks& blocks, int j,
                       int alpha, int beta, std::span<const double> x,
                       std::span<const double> y);
/// integral over T_j of grad x . grad y.
Interval slice_dirichlet(const SymmetricMesh& mesh, const ElementBlocks& blocks, int j,
                         std::span<const double> x, std::span<const double> y);
/// integral over T_j of x y.
Interval slice_mass(const SymmetricMesh& mesh, const ElementBlocks& blocks, int j,
                    std::span<const double> x, std::span<const double> y);

/// Right-hand sides of the two material-derivative systems for the interval
/// eigenpair (u1, lam1); u1 interior-indexed.
std::pair<IntervalVector, IntervalVector> assemble_rhs_material(
    const AssembledSystem& sys, const PartialBlocks& blocks, const IntervalVector& u1,
    const Interval& lam1);

} // namespace ngoncert
