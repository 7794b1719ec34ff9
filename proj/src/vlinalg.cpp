#include "ngoncert/vlinalg.hpp"

#include <Eigen/Dense>

namespace ngoncert {

double iv_norm2_lower(const IntervalVector& v) {
  double s = 0.0;
  for (const Interval& x : v) {
    double m = x.mig();
    s = rnd::add_down(s, rnd::mul_down(m, m));
  }
  return rnd::sqrt_down(s);
}

EigenEnclosure residual_enclosure(const SparseIntervalMatrix& K, const SparseIntervalMatrix& M,
                                  const std::vector<double>& x, double lam,
                                  const MassBounds& mb) {
  if (K.dim() != M.dim() || static_cast<int>(x.size()) != K.dim())
    throw std::invalid_argument("residual_enclosure: dimension mismatch");
  bool nonzero = false;
  for (double v : x) nonzero = nonzero || v != 0.0;
  if (!nonzero) throw std::invalid_argument("residual_enclosure: zero candidate");

  EigenEnclosure enc;
  enc.x_mid = x;

  IntervalVector kx = K.matvec(std::span<const double>(x));
  IntervalVector mx = M.matvec(std::span<const double>(x));
  IntervalVector r(K.dim());
  Interval lam_i(lam);
  for (int i = 0; i < K.dim(); ++i) r[i] = kx[i] - lam_i * mx[i];

  enc.r_norm = iv_norm2_upper(r);
  // r^T M^-1 r <= |r|^2 / lambda_min(M)
  enc.rmr_upper = rnd::div_up(rnd::mul_up(enc.r_norm, enc.r_norm), mb.lam_min_lo);
  {
    Interval s;
    for (int i = 0; i < K.dim(); ++i) s += Interval(x[i]) * mx[i];
    enc.xMx = s;
  }
  if (!(enc.xMx.lo() > 0.0))
    throw CertificationFailure("residual_enclosure: x^T M x not certified positive");

  double rho = rnd::sqrt_up(rnd::div_up(enc.rmr_upper, enc.xMx.lo()));
  enc.value = Interval(rnd::sub_down(lam, rho), rnd::add_up(lam, rho));
  return enc;
}

double eigvec_error_bound(const EigenEnclosure& enc, double a, const MassBounds&) {
  if (!(a > 0.0)) throw std::invalid_argument("eigvec_error_bound: a > 0 required");
  double first = rnd::div_up(enc.rmr_upper, rnd::mul_down(a, a));
  // deviation of |x|_M from 1
  double nlo = rnd::sqrt_down(enc.xMx.lo()), nhi = rnd::sqrt_up(enc.xMx.hi());
  double dev = std::max(std::fabs(nlo - 1.0), std::fabs(nhi - 1.0));
  double term1 = rnd::mul_up(dev, dev);
  // (1 - sqrt(x^T M x - rmr/a^2))^2, maximized over the enclosure
  double arg_lo = rnd::sub_down(enc.xMx.lo(), first);
  if (arg_lo < 0.0)
    throw CertificationFailure("eigvec_error_bound: residual too large for the gap");
  double s_lo = rnd::sqrt_down(arg_lo);
  double s_hi = rnd::sqrt_up(enc.xMx.hi());
  double d2 = std::max(std::fabs(1.0 - s_lo), std::fabs(1.0 - s_hi));
  double term2 = rnd::mul_up(d2, d2);
  return rnd::sqrt_up(rnd::add_up(first, std::max(term1, term2)));
}

void certify_vector(EigenEnclosure& enc, double a, const MassBounds& mb) {
  enc.err_m = eigvec_error_bound(enc, a, mb);
  enc.err_2 = rnd::div_up(enc.err_m, rnd::sqrt_down(mb.lam_min_lo));
  // e^T K e = e.r + lam e^T M e + (lam - lam*) e^T M x*
  double rho = std::max(rnd::sub_up(enc.value.hi(), enc.value.mid()),
                        rnd::sub_up(enc.value.mid(), enc.value.lo()));
  double lam_hi = std::max(std::fabs(enc.value.lo()), std::fabs(enc.value.hi()));
  double t = rnd::add_up(
      rnd::mul_up(enc.err_2, enc.r_norm),
      rnd::add_up(rnd::mul_up(lam_hi, rnd::mul_up(enc.err_m, enc.err_m)),
                  rnd::mul_up(rho, enc.err_m)));
  enc.err_k = rnd::sqrt_up(t);
  enc.vector = iv_inflated(enc.x_mid, enc.err_2);
  enc.simple = true;
}

namespace {

using DVec = Eigen::VectorXd;
using DMat = Eigen::MatrixXd;

struct IMat {
  int n = 0;
  std::vector<Interval> a;
  Interval& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Interval& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

} // namespace

KrawczykResult krawczyk_eigenpair(const SparseIntervalMatrix& K, const SparseIntervalMatrix& M,
                                  const std::vector<double>& x, double lam, int max_dim) {
  const int n = K.dim();
  KrawczykResult out;
  if (n > max_dim)
    throw CertificationFailure("krawczyk_eigenpair: dimension above dense budget");

  int v = 0;
  for (int i = 1; i < n; ++i)
    if (std::fabs(x[i]) > std::fabs(x[v])) v = i;

  // Float Jacobian with column v replaced by -M x, and its inverse.
  DMat R = DMat(K.midpoint()) - lam * DMat(M.midpoint());
  DVec mx_f = DMat(M.midpoint()) * Eigen::Map<const DVec>(x.data(), n);
  R.col(v) = -mx_f;
  Eigen::PartialPivLU<DMat> lu(R);
  DMat Rinv = lu.inverse();
  if (!Rinv.allFinite()) throw CertificationFailure("krawczyk_eigenpair: singular Jacobian");

  Interval lam_i(lam);
  // Interval residual r0 = (K - lam M) x and column -[M] x.
  IntervalVector kx = K.matvec(std::span<const double>(x));
  IntervalVector mx = M.matvec(std::span<const double>(x));
  IntervalVector r0(n), mcol(n);
  for (int i = 0; i < n; ++i) {
    r0[i] = kx[i] - lam_i * mx[i];
    mcol[i] = -mx[i];
  }

  // Z = -Rinv r0
  IntervalVector Z(n);
  for (int i = 0; i < n; ++i) {
    Interval s;
    for (int k = 0; k < n; ++k) s += Interval(Rinv(i, k)) * r0[k];
    Z[i] = -s;
  }

  // E = I - Rinv J, built column-by-column from the sparse columns of J.
  IMat E;
  E.n = n;
  E.a.assign(static_cast<std::size_t>(n) * n, Interval(0.0));
  for (int i = 0; i < n; ++i) E.at(i, i) = Interval(1.0);
  auto subtract_col = [&](int j, int k, const Interval& Jkj) {
    // E(:,j) -= Rinv(:,k) * Jkj
    if (Jkj.lo() == 0.0 && Jkj.hi() == 0.0) return;
    for (int i = 0; i < n; ++i) E.at(i, j) -= Interval(Rinv(i, k)) * Jkj;
  };
  for (int j = 0; j < n; ++j) {
    if (j == v) {
      for (int k = 0; k < n; ++k) subtract_col(j, k, mcol[k]);
      continue;
    }
    // column j of K - lam M equals row j by symmetry
    for (int p = K.rowptr()[j]; p < K.rowptr()[j + 1]; ++p)
      subtract_col(j, K.colidx()[p], K.values()[p]);
    for (int p = M.rowptr()[j]; p < M.rowptr()[j + 1]; ++p)
      subtract_col(j, M.colidx()[p], -(lam_i * M.values()[p]));
  }

  // Verification sweep with epsilon inflation (at most 20 sweeps).
  IntervalVector X = Z;
  const int mmax = 20;
  for (int sweep = 0; sweep < mmax; ++sweep) {
    out.sweeps = sweep + 1;
    IntervalVector Xi(n);
    for (int i = 0; i < n; ++i) Xi[i] = X[i].inflated(0.1 * X[i].mag() + 1e-300);
    // Y = Z + E Xi + Rinv (M Xi0) Xi[v], Xi0 = Xi with slot v zeroed
    IntervalVector Xi0 = Xi;
    Xi0[v] = Interval(0.0);
    IntervalVector MX = M.matvec(Xi0);
    IntervalVector Y(n);
    for (int i = 0; i < n; ++i) {
      Interval s = Z[i];
      for (int k = 0; k < n; ++k) s += E.at(i, k) * Xi[k];
      Interval t;
      for (int k = 0; k < n; ++k) t += Interval(Rinv(i, k)) * MX[k];
      Y[i] = s + t * Xi[v];
    }
    bool inside = true;
    for (int i = 0; i < n; ++i) inside = inside && Xi[i].interior_contains(Y[i]);
    if (inside) {
      out.verified = true;
      out.value = Interval(lam) + Y[v];
      out.vector.resize(n);
      for (int i = 0; i < n; ++i) out.vector[i] = (i == v) ? Interval(x[v]) : Interval(x[i]) + Y[i];
      return out;
    }
    X = Y;
  }
  return out; // not verified
}

SaddleSolution saddle_enclosure(const AssembledSystem& sys, const Interval& lam1,
                                const Interval& lam2, const IntervalVector& f,
                                double f_extra_2norm, const std::vector<double>& u1_mid,
                                double u1_err_m, const std::vector<double>& U_float,
                                double gamma0) {
  const int d = sys.dof;
  if (static_cast<int>(f.size()) != d || static_cast<int>(U_float.size()) != d)
    throw std::invalid_argument("saddle_enclosure: dimension mismatch");
  Interval gap = lam2 - lam1;
  if (!(gap.lo() > 0.0))
    throw CertificationFailure("saddle_enclosure: eigenvalue gap not certified positive");

  SaddleSolution out;
  out.u_mid = U_float;

  // constraint vector b = gamma M0 u1 for the exact normalized eigenvector u1
  IntervalVector mu1 = sys.M0.matvec(std::span<const double>(u1_mid));
  double mu1_hi = iv_norm2_upper(mu1);
  out.gamma = gamma0 / mu1_hi;
  out.w = gap.mid() / (out.gamma * out.gamma);

  // ||M0 u1||_2 for the true u1: |M0 e|_2 <= sqrt(lam_max(M)) |e|_M
  double m_shift = rnd::mul_up(rnd::sqrt_up(sys.mass_bounds.lam_max_hi), u1_err_m);
  double mu1_lo = std::max(0.0, rnd::sub_down(iv_norm2_lower(mu1), m_shift));
  double mu1_up = rnd::add_up(mu1_hi, m_shift);
  if (!(mu1_lo > 0.0)) throw CertificationFailure("saddle_enclosure: ||M0 u1|| not positive");

  // residual rows: r1 = (K0 - lam1 M0) U - f, r2 = gamma (M0 u1)^T U
  IntervalVector kU = sys.K0.matvec(std::span<const double>(U_float));
  IntervalVector mU = sys.M0.matvec(std::span<const double>(U_float));
  double r1sq = 0.0;
  for (int i = 0; i < d; ++i) {
    Interval ri = kU[i] - lam1 * mU[i] - f[i];
    double m = ri.mag();
    r1sq = rnd::add_up(r1sq, rnd::mul_up(m, m));
  }
  Interval bU;
  for (int i = 0; i < d; ++i) bU += mu1[i] * Interval(U_float[i]);
  // exact-b correction: |(M0 e)^T U| <= |e|_M sqrt(lam_max) |U|_2
  double Unorm = 0.0;
  for (double uv : U_float) Unorm = rnd::add_up(Unorm, rnd::mul_up(uv, uv));
  Unorm = rnd::sqrt_up(Unorm);
  double bU_corr = rnd::mul_up(m_shift, Unorm);
  double r2 = rnd::mul_up(std::fabs(out.gamma), rnd::add_up(bU.mag(), bU_corr));
  double rho = rnd::add_up(rnd::sqrt_up(rnd::add_up(r1sq, rnd::mul_up(r2, r2))), f_extra_2norm);
  out.residual_norm = rho;

  // ||A(w)^{-1}||_2 <= 1 / (min(gap, gamma^2 w) lambda_min(M0))
  double g2w = rnd::mul_down(rnd::mul_down(out.gamma, out.gamma), out.w);
  double ming = std::min(gap.lo(), g2w);
  double ainv = rnd::div_up(1.0, rnd::mul_down(ming, sys.mass_bounds.lam_min_lo));
  // ||A(w)||_2 / ||b||^2 <= ||K0 - lam1 M0||_inf / (gamma^2 ||M0 u1||^2) + w
  double a_inf = SparseIntervalMatrix::shifted(sys.K0, lam1, sys.M0).inf_norm_upper();
  double b_sq = rnd::mul_down(rnd::mul_down(out.gamma, out.gamma), rnd::mul_down(mu1_lo, mu1_lo));
  double aob = rnd::add_up(rnd::div_up(a_inf, b_sq), out.w);
  double maxinv = std::max(ainv, aob);

  Interval c5 = Interval(2.0) / (sqrt(Interval(5.0)) - Interval(1.0));
  out.err_2 = rnd::mul_up(c5.hi(), rnd::mul_up(maxinv, rho));
  out.err_aw = rnd::mul_up(c5.hi(), rnd::mul_up(rnd::sqrt_up(maxinv), rho));
  // e^T K0 e <= e^T A(w) e + lam1 e^T M0 e, e^T M0 e <= e^T A(w) e / ming
  double lam1_hi = std::max(std::fabs(lam1.lo()), std::fabs(lam1.hi()));
  double aw_sq = rnd::mul_up(out.err_aw, out.err_aw);
  out.err_k = rnd::sqrt_up(
      rnd::add_up(aw_sq, rnd::mul_up(lam1_hi, rnd::div_up(aw_sq, ming))));
  out.err_m = rnd::div_up(out.err_aw, rnd::sqrt_down(ming));

  out.solution = iv_inflated(out.u_mid, out.err_2);
  return out;
}

} // namespace ngoncert
