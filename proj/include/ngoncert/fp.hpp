#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ngoncert {

using SpMat = Eigen::SparseMatrix<double>;

/// Approximate generalized eigenpairs, no rigor claimed: inverse subspace
/// iteration with Rayleigh-Ritz on (K, M), both symmetric positive definite.
struct FpEigsResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-normalized columns
  int iterations = 0;
  double max_residual = 0.0; // ||K x - lambda M x||_2 over requested pairs
  bool converged = false;
};

FpEigsResult fp_eigs(const SpMat& K, const SpMat& M, int k, double tol = 1e-12,
                     int maxit = 600);

/// Conjugate gradient with zero initial vector.
struct CgResult {
  Eigen::VectorXd x;
  double rel_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

CgResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                  const Eigen::VectorXd& b, double tol = 1e-12, int maxit = 100000);
CgResult cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol = 1e-12,
                  int maxit = 100000);

} // namespace ngoncert
