#pragma once

#include <optional>
#include <span>

#include "ngoncert/constants.hpp"
#include "ngoncert/interval.hpp"

namespace ngoncert {

/// P1 interpolation constant of a triangle from the closed-form shape bound
/// (0.493 prefactor), normalized by the median edge: returns C(T)/h.
/// Inputs are the three side lengths.
Interval interp_constant_formula(const Interval& e0, const Interval& e1, const Interval& e2);

/// Certified interpolation constant for the slice triangle of the regular
/// n-gon: a freshly certified bound when available, else the tabulated one.
Interval interp_constant_table(int n, const std::optional<Interval>& certified = std::nullopt);

/// Bound for |lambda_k - lambda_{k,h}| given the discrete value:
/// lam_kh^3 C1^2 h^2 / (1 + C1^2 h^2 lam_kh^2).
Interval eig_error(const Interval& lam_kh, const Interval& C1, const Interval& h);

/// Continuous enclosure from one-sided convergence: [lam_h.lo - err, lam_h.hi].
Interval continuous_enclosure(const Interval& lam_h, const Interval& err);

/// Upper bounds for the eigenfunction errors ||grad(u1 - u1h)|| and
/// ||u1 - u1h||, assembled from the projection/normalization chain with a
/// two-pass bootstrap through the error relation.
struct EigfunErrors {
  Interval grad, l2;
};
EigfunErrors eigfun_errors(const Interval& lam1h, const Interval& lam2h,
                           const Interval& lam1_err, const Interval& C1, const Interval& h);

/// Norm of the H1 extension operator of the regular n-gon: 4 for n = 5,
/// sqrt(4 + 24 cos^2(2 pi / n)) for n >= 6.
Interval extension_constant(int n, const ThetaTrig& trig);

/// Explicit bound for the piecewise-H2 norm of the singular ray solution:
/// `half` bounds the half-polygon norm, `full` = sqrt(2) * half the full one.
/// `dr2` is the trace-chain bound for the squared ray norm of the radial
/// derivative of u1, reused by the energy chains.
struct D2Bound {
  Interval dr2;
  Interval half, full;
};
D2Bound d2_singular_bound(const Interval& lam1, const Interval& lam2, const Interval& Cn);

/// C(q) = sum |q_i| * C1 * sqrt(2) * (half-polygon D2 bound). Requires the
/// coefficient sum to straddle zero.
Interval c_of_q(std::span<const Interval> q, const Interval& C1, const Interval& d2_half);

/// Everything the error machinery consumes, fixed per pipeline run.
struct PipelineConstants {
  int n = 0;
  ThetaTrig trig;
  Interval h;
  Interval C1, Cn;
  Interval lam1h, lam2h;       // certified discrete enclosures
  Interval lam1_err, lam2_err; // discretization error bounds
  Interval lam1, lam2;         // continuous enclosures
  Interval gradu_err, l2u_err; // eigenfunction errors
  Interval dr_norm;            // || d_r u1 ||_{L2(S0)} upper bound
  Interval d2_half;            // half-polygon D2 bound
  Interval poly_area;          // |P_n| = n sin(theta) / 2
};

PipelineConstants pipeline_constants(int n, const Interval& lam1h, const Interval& lam2h,
                                     const Interval& h, const Interval& C1);

/// Data of one right-hand side in the singular-problem machinery.
struct ProblemData {
  Interval freg_norm; // ||f_reg||_{L2} upper bound
  Interval sum_abs_q; // sum of |ray coefficients| (zero when parity cancels)
  Interval f_err;     // ||f - f_h||_{H^-1} upper bound
  // computed norms of the certified discrete solution, when available
  std::optional<Interval> grad_uh;
  std::optional<Interval> uh_l2;
};

/// Chained norm bounds of the continuous solution, its projection V, the
/// renormalized Vtilde and the discrete solution, plus the three error blocks.
struct ProblemNorms {
  Interval cq;       // C(q)
  Interval interp;   // ||grad(U - V)||
  Interval uv_l2;    // ||U - V||
  Interval normerr0; // ||V - Vt||_{L2}
  Interval normerr;  // ||grad(V - Vt)||
  Interval disc;     // ||grad(Vt - U_h)||
  Interval U, gradU, V, gradV, Vt, gradVt, gradUh;
};

ProblemNorms problem_norms(const ProblemData& data, const PipelineConstants& pc);

/// |a(U^a, U^b) - a_h(U_h^a, U_h^b)| from the three blocks
/// (interpolation + normalization + discrete).
Interval pairing_error(const ProblemNorms& a, const ProblemNorms& b,
                       const PipelineConstants& pc);

/// Gradient/L2 error of one singular problem (three-block sums).
struct SingularErrors {
  Interval grad, l2;
};
SingularErrors singular_solution_error(const ProblemData& data, const PipelineConstants& pc);

/// Coefficient magnitudes of the auxiliary right-hand sides attached to the
/// Hessian entries A_k / B_k / C_k.
struct WCoeffs {
  Interval max_c;  // plain gradient-pairing coefficient
  Interval max_d;  // rotation-mixed coefficient
  Interval max_op; // max_j || c_j I + d_j R_j ||_2 = max_j max |c_j +- d_j|
  Interval sum_q;  // ray coefficients; zero for B/C (parity cancellation)
};
WCoeffs w_coeffs(char which, int k, const PipelineConstants& pc);

/// Problem data of the W right-hand side for entry `which` in {'A','B','C'}.
ProblemData w_problem_data(char which, int k, const PipelineConstants& pc);

/// Data of the two material-derivative problems; `compat_defect` bounds the
/// discrete compatibility defect |(f_h, u_{1,h})| absorbed into f_err.
ProblemData material_problem_data(int which, const PipelineConstants& pc,
                                  const Interval& compat_defect);

/// Per-k error bounds for the Hessian entries and eigenvalues. `t0x_err` and
/// `t0y_err` bound the errors of the squared-gradient integrals over T_0;
/// mu_widen is a Weyl bound on the 2x2 symmetric block perturbation, valid
/// for both eigenvalues of pair k.
struct SpectrumErrors {
  std::vector<Interval> A, B, C;
  std::vector<Interval> alpha, beta, gamma;
  std::vector<double> mu_widen;
};
SpectrumErrors spectrum_errors(const PipelineConstants& pc, const ProblemNorms& u1n,
                               const ProblemNorms& u2n, const Interval& t0x_err,
                               const Interval& t0y_err,
                               const std::vector<ProblemNorms>* wA = nullptr,
                               const std::vector<ProblemNorms>* wB = nullptr,
                               const std::vector<ProblemNorms>* wC = nullptr);

/// Upper bound carried as an interval: keep the smaller upper end.
inline Interval ub_min(const Interval& a, const Interval& b) {
  return a.hi() <= b.hi() ? a : b;
}

} // namespace ngoncert
