#pragma once

#include <optional>
#include <vector>

#include "ngoncert/assembly.hpp"
#include "ngoncert/sparse.hpp"

namespace ngoncert {

/// Thrown when a rigorous bound cannot be established (never means "disproved").
struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Certified enclosure of a generalized eigenvalue from the residual bound:
/// value = [lam - rho, lam + rho] with rho^2 >= r^T M^-1 r / x^T M x.
struct EigenEnclosure {
  Interval value;
  std::optional<IntervalVector> vector; // entrywise box around x_mid when certified
  bool simple = false;
  enum class Method { residual, krawczyk } method = Method::residual;

  std::vector<double> x_mid;
  double r_norm = 0.0;     // upper bound for ||K x - lam M x||_2
  double rmr_upper = 0.0;  // upper bound for r^T M^-1 r
  Interval xMx;            // enclosure of x^T M x
  // distance of x_mid to the M-normalized true eigenvector, when certified
  double err_m = std::numeric_limits<double>::infinity();
  double err_2 = std::numeric_limits<double>::infinity();
  double err_k = std::numeric_limits<double>::infinity();
};

EigenEnclosure residual_enclosure(const SparseIntervalMatrix& K, const SparseIntervalMatrix& M,
                                  const std::vector<double>& x, double lam,
                                  const MassBounds& mb);

/// M-norm distance bound between x_mid and the M-normalized eigenvector whose
/// eigenvalue is the only one in [lam - a, lam + a] (Mayer-type bound).
/// Throws CertificationFailure when the inner square root does not exist.
double eigvec_error_bound(const EigenEnclosure& enc, double a, const MassBounds& mb);

/// Fill err_m/err_2/err_k and the entrywise box of `enc`, given the
/// separation radius `a` (the window [lam-a, lam+a] must isolate the target
/// simple eigenvalue).
void certify_vector(EigenEnclosure& enc, double a, const MassBounds& mb);

/// Verified eigenpair enclosure for (K, M) around the approximate pair,
/// normalizing by freezing the largest-magnitude component. Dense
/// approximate-inverse iteration with epsilon inflation, at most 20 sweeps.
struct KrawczykResult {
  bool verified = false;
  Interval value;
  IntervalVector vector; // component v is exact (width zero)
  int sweeps = 0;
};

KrawczykResult krawczyk_eigenpair(const SparseIntervalMatrix& K, const SparseIntervalMatrix& M,
                                  const std::vector<double>& x, double lam, int max_dim = 1500);

/// Enclosure of the exact solution of the saddle-point system
/// [[K0 - lam1 M0, b], [b^T, 0]] (U, 0) = (f, 0), b = gamma M0 u1, from a
/// floating candidate and the certified residual. Error measured in the
/// 2-norm and in the energy norms needed downstream.
struct SaddleSolution {
  std::vector<double> u_mid;
  IntervalVector solution;   // u_mid +- err_2 per coordinate
  double residual_norm = 0.0; // upper bound for || H(U,0) - (f,0) ||_2
  double err_2 = 0.0;
  double err_aw = 0.0; // A(w)-energy norm of the error
  double err_k = 0.0;  // K0-energy norm of the error
  double err_m = 0.0;  // M0 norm of the error
  double gamma = 0.0, w = 0.0;
};

/// `f` is evaluated at the representative eigenvector; `f_extra_2norm` bounds
/// the 2-norm shift of the data when the representative is replaced by the
/// true eigenvector. `u1_mid`/`u1_err_m` describe the certified first
/// eigenpair used for the constraint vector b.
SaddleSolution saddle_enclosure(const AssembledSystem& sys, const Interval& lam1,
                                const Interval& lam2, const IntervalVector& f,
                                double f_extra_2norm, const std::vector<double>& u1_mid,
                                double u1_err_m, const std::vector<double>& U_float,
                                double gamma0);

/// Lower bound helpers used by the saddle analysis.
double iv_norm2_lower(const IntervalVector& v);

} // namespace ngoncert
