#pragma once

#include <array>
#include <optional>

#include "ngoncert/sparse.hpp"

namespace ngoncert {

/// Morley matrices on the triangle (0,0), (1,0), (a,b), refined into m^2
/// congruent triangles. Degrees of freedom: one value per lattice vertex,
/// then one flux value per edge (the normal derivative at the edge midpoint
/// in the fixed global edge frame: tangent from lower to higher vertex index,
/// normal the +90 degree rotation of it).
struct MorleySystem {
  Interval a, b;
  int m = 0;
  int n_vertices = 0, n_edges = 0;
  SparseIntervalMatrix Kxx; // v^T Kxx v = |u|^2_{H2} piecewise
  SparseIntervalMatrix Mxx; // v^T Mxx v = ||grad u||^2_{L2} piecewise
  std::vector<std::array<int, 2>> edges; // vertex pairs, lower index first
  std::array<int, 3> corner_vertices{};  // lattice corners of T

  int dof() const { return n_vertices + n_edges; }
};

MorleySystem morley_assemble(const Interval& a, const Interval& b, int m,
                             bool flip_normals = false);

/// Corner rows/columns removed (the three vertex values pinned to zero).
struct ReducedMorley {
  SparseIntervalMatrix Kxx0, Mxx0;
  std::vector<int> keep; // original dof index per reduced row
};
ReducedMorley reduce_corners(const MorleySystem& sys);

/// Certified upper bound for the P1 interpolation constant C(T): floating
/// smallest generalized eigenvalue rho, then positive definiteness of
/// Kxx0 - (rho - eps) Mxx0 certifies C(T) <= sqrt(m^2/(m^2-1)) / sqrt(rho - eps).
struct MorleyCertification {
  bool certified = false;
  double rho_float = 0.0;
  Interval bound; // valid only when certified
};

MorleyCertification certify_interp_constant(const Interval& a, const Interval& b, int m,
                                            double eps = 1e-6);

/// Slice triangle of the regular n-gon: (a, b) = (cos theta, sin theta).
MorleyCertification certify_interp_constant_ngon(int n, int m, double eps = 1e-6);

} // namespace ngoncert
