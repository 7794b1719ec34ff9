#include "ngoncert/fp.hpp"

#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace ngoncert {

FpEigsResult fp_eigs(const SpMat& K, const SpMat& M, int k, double tol, int maxit) {
  const int n = static_cast<int>(K.rows());
  if (k < 1 || k > n) throw std::invalid_argument("fp_eigs: bad k");
  FpEigsResult out;

  if (n == 1) {
    out.values = Eigen::VectorXd::Constant(1, K.coeff(0, 0) / M.coeff(0, 0));
    out.vectors = Eigen::MatrixXd::Constant(1, 1, 1.0 / std::sqrt(M.coeff(0, 0)));
    out.converged = true;
    return out;
  }

  Eigen::SimplicialLDLT<SpMat> solver(K);
  if (solver.info() != Eigen::Success) throw std::runtime_error("fp_eigs: factorization failed");

  int b = std::min(n, k + 3);
  Eigen::MatrixXd X(n, b);
  // deterministic pseudo-random start
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < n; ++i) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      X(i, j) = (static_cast<double>(state >> 11) / 9007199254740992.0) - 0.5;
    }

  Eigen::VectorXd lam(b);
  double resid = 0.0;
  int it = 0;
  for (; it < maxit; ++it) {
    Eigen::MatrixXd Y = solver.solve(M * X);
    Eigen::MatrixXd KY = K * Y, MY = M * Y;
    Eigen::MatrixXd G = Y.transpose() * KY;
    Eigen::MatrixXd B = Y.transpose() * MY;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()),
                                                                 0.5 * (B + B.transpose()));
    if (es.info() != Eigen::Success) throw std::runtime_error("fp_eigs: Ritz solve failed");
    X = Y * es.eigenvectors();
    lam = es.eigenvalues();
    for (int j = 0; j < b; ++j) {
      double nm = std::sqrt(X.col(j).transpose() * (M * X.col(j)));
      X.col(j) /= nm;
    }
    resid = 0.0;
    for (int j = 0; j < k; ++j) {
      double r = (K * X.col(j) - lam(j) * (M * X.col(j))).norm();
      resid = std::max(resid, r / std::max(1.0, lam(j)));
    }
    if (resid < tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = it;
  out.max_residual = resid;
  out.values = lam.head(k);
  out.vectors = X.leftCols(k);
  if (!out.converged) {
    throw std::runtime_error("fp_eigs: no convergence after " + std::to_string(it) +
                             " iterations, residual " + std::to_string(resid));
  }
  return out;
}

CgResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                  const Eigen::VectorXd& b, double tol, int maxit) {
  CgResult out;
  const double bnorm = b.norm();
  out.x = Eigen::VectorXd::Zero(b.size());
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  double rs = r.squaredNorm();
  for (int it = 0; it < maxit; ++it) {
    Eigen::VectorXd Ap = apply(p);
    double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break; // breakdown: report residual achieved so far
    double alpha = rs / pAp;
    out.x += alpha * p;
    r -= alpha * Ap;
    double rs_new = r.squaredNorm();
    out.iterations = it + 1;
    if (std::sqrt(rs_new) <= tol * bnorm) {
      out.converged = true;
      rs = rs_new;
      break;
    }
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  out.rel_residual = std::sqrt(rs) / bnorm;
  return out;
}

CgResult cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol, int maxit) {
  return cg_solve([&](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); }, b, tol,
                  maxit);
}

} // namespace ngoncert
