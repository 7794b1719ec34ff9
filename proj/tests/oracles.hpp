#pragma once

// Independent floating-point reference implementations used only by tests:
// coordinate-based FEM assembly (libm trig, no intervals), dense extended
// precision eigensolves, and a from-scratch Hessian-eigenvalue pipeline.

#include <Eigen/Dense>

#include "ngoncert/mesh.hpp"

namespace oracle {

using LD = long double;
using MatLD = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using VecLD = Eigen::Matrix<LD, Eigen::Dynamic, 1>;

struct DenseSystem {
  MatLD K, M;                    // interior-node stiffness/mass
  MatLD Kxx, Kyy, Kxyp, Kxym;    // partial blocks on T+ / T-
};

/// Assemble from floating vertex coordinates (cos/sin of 2*pi*j/n).
DenseSystem assemble_dense(const ngoncert::SymmetricMesh& mesh);

/// All generalized eigenpairs of (K, M), ascending.
void dense_geneig(const MatLD& K, const MatLD& M, VecLD& values, MatLD& vectors);

/// Solve the bordered system [[A, b], [b^T, 0]] (U, p) = (f, 0), returning U.
VecLD kkt_solve(const MatLD& A, const VecLD& b, const VecLD& f);

/// Integral over slice j of d_alpha(u) d_beta(v), coordinate-based.
LD slice_pairing(const ngoncert::SymmetricMesh& mesh, int j, int alpha, int beta,
                 const VecLD& u, const VecLD& v);
LD slice_mass(const ngoncert::SymmetricMesh& mesh, int j, const VecLD& u, const VecLD& v);

/// Complete interval-free reimplementation of the discrete Hessian-eigenvalue
/// pipeline (eigs, material derivatives, mu formulas).
struct FloatPipeline {
  LD lam1 = 0, lam2 = 0;
  VecLD u1, U1, U2;
  std::vector<LD> alpha, beta, gamma;
  std::vector<LD> mu; // 2n values, mu[2k], mu[2k+1]
};

FloatPipeline float_pipeline(int n, int m);

} // namespace oracle
