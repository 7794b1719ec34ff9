#include "ngoncert/apriori.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace ngoncert {

namespace {

const Interval kHalf(0.5);
const Interval kOne(1.0);
const Interval kTwo(2.0);

Interval sqrt2() { return sqrt(Interval(2.0)); }

} // namespace

Interval interp_constant_formula(const Interval& e0, const Interval& e1, const Interval& e2) {
  // order by midpoint: s <= L <= g
  std::array<Interval, 3> e = {e0, e1, e2};
  std::sort(e.begin(), e.end(),
            [](const Interval& a, const Interval& b) { return a.mid() < b.mid(); });
  const Interval &s = e[0], &L = e[1], &g = e[2];
  if (!(s.lo() > 0.0)) throw std::domain_error("interp_constant_formula: degenerate triangle");
  Interval alpha = s / L;
  // angle tau between the smallest and middle edges (law of cosines)
  Interval cos_tau = (sq(s) + sq(L) - sq(g)) / (kTwo * s * L);
  Interval cos2tau = kTwo * sq(cos_tau) - kOne;
  Interval a2 = sq(alpha);
  Interval w = sqrt(max(sq(a2) + kTwo * a2 * cos2tau + kOne, Interval(0.0)));
  Interval denom = kTwo * (kOne + a2 - w);
  if (!(denom.lo() > 0.0))
    throw std::domain_error("interp_constant_formula: degenerate triangle");
  // C(T)/h with h the median edge: the leading factor 0.493 * L cancels /L
  return Interval::from_decimal("0.493") * (kOne + a2 + w) / sqrt(denom);
}

Interval interp_constant_table(int n, const std::optional<Interval>& certified) {
  if (certified) return *certified;
  static const std::map<int, const char*> table = {{5, "0.3697"}, {6, "0.3200"}, {7, "0.3146"},
                                                   {8, "0.3107"}, {9, "0.3104"}, {10, "0.3128"}};
  auto it = table.find(n);
  if (it == table.end())
    throw std::domain_error("interp_constant_table: no certified constant for this n");
  Interval v = Interval::from_decimal(it->second);
  return Interval(0.0, v.hi());
}

Interval eig_error(const Interval& lam_kh, const Interval& C1, const Interval& h) {
  if (!(lam_kh.lo() > 0.0)) throw std::domain_error("eig_error: lambda must be positive");
  Interval c2h2 = sq(C1) * sq(h);
  Interval bound = lam_kh * sq(lam_kh) * sq(C1) * sq(h) / (kOne + c2h2 * sq(lam_kh));
  return Interval(0.0, bound.hi());
}

Interval continuous_enclosure(const Interval& lam_h, const Interval& err) {
  return Interval(rnd::sub_down(lam_h.lo(), err.hi()), lam_h.hi());
}

EigfunErrors eigfun_errors(const Interval& lam1h, const Interval& lam2h,
                           const Interval& lam1_err, const Interval& C1, const Interval& h) {
  Interval gap = lam2h - lam1h;
  if (!(gap.lo() > 0.0)) throw std::domain_error("eigfun_errors: gap not positive");
  Interval lam1 = continuous_enclosure(lam1h, lam1_err);

  Interval e_p_grad = C1 * lam1 * h;       // ||grad(u1 - p_h)||
  Interval e_p_l2 = sq(C1) * lam1 * sq(h); // ||u1 - p_h||

  Interval p_bar_grad = (sqrt(lam2h) / gap) * (lam1_err + lam1h * e_p_l2);
  Interval p_bar_l2 = p_bar_grad / sqrt(lam2h);
  Interval alpha_dev = sq(p_bar_l2) + e_p_l2 * (kTwo + e_p_l2);

  Interval grad = e_p_grad + alpha_dev * sqrt(lam1h) + p_bar_grad;
  Interval l2 = e_p_l2 + alpha_dev + p_bar_l2;

  // bootstrap through ||grad d||^2 = (lam1h - lam1) + lam1 ||d||^2, two passes
  for (int pass = 0; pass < 2; ++pass) {
    Interval g2 = lam1_err + lam1 * sq(l2);
    grad = ub_min(grad, sqrt(Interval(0.0, g2.hi())));
  }
  return {Interval(0.0, grad.hi()), Interval(0.0, l2.hi())};
}

Interval extension_constant(int n, const ThetaTrig& trig) {
  if (n < 5) throw std::domain_error("extension_constant: n >= 5 required");
  if (n == 5) return Interval(4.0);
  return sqrt(Interval(4.0) + Interval(24.0) * sq(trig.cos_t));
}

D2Bound d2_singular_bound(const Interval& lam1, const Interval& lam2, const Interval& Cn) {
  Interval gap = lam2 - lam1;
  if (!(gap.lo() > 0.0)) throw std::domain_error("d2_singular_bound: gap not positive");
  D2Bound out;
  // trace chain: ||d_r u1||^2_{L2(S0)} <= ||grad u1|| (||grad u1|| + 2 ||D2 u1||)
  Interval sl = sqrt(lam1);
  out.dr2 = Interval(0.0, (sl * (sl + kTwo * lam1)).hi());

  Interval grad_bound = (lam2 / gap) * sqrt(out.dr2); // ||grad Ubar||
  Interval C = Interval(0.0, sq(grad_bound).hi());
  Interval Usq = Interval(0.0, (lam2 / sq(gap) * out.dr2).hi());
  Interval c0 = Interval(0.0, (lam1 / Interval(4.0)).hi());
  Interval A = (sq(Cn) * kHalf) * sqrt((sq(lam1) + lam1) * kHalf);
  Interval B = sq(lam1) * Usq + sq(c0) * kHalf + C;
  Interval Y = (A + sqrt(sq(A) + Interval(4.0) * B)) * kHalf;
  Interval X2 = sq(Y) - C;
  out.half = sqrt(Interval(0.0, std::max(X2.hi(), 0.0)));
  out.full = sqrt2() * out.half;
  return out;
}

Interval c_of_q(std::span<const Interval> q, const Interval& C1, const Interval& d2_half) {
  Interval sum, sum_abs;
  for (const Interval& qi : q) {
    sum += qi;
    sum_abs += abs(qi);
  }
  if (!sum.contains_zero()) throw std::domain_error("c_of_q: coefficients must sum to zero");
  return sum_abs * C1 * sqrt2() * d2_half;
}

PipelineConstants pipeline_constants(int n, const Interval& lam1h, const Interval& lam2h,
                                     const Interval& h, const Interval& C1) {
  PipelineConstants pc;
  pc.n = n;
  pc.trig = enclose_theta(n);
  pc.h = h;
  pc.C1 = C1;
  pc.lam1h = lam1h;
  pc.lam2h = lam2h;
  pc.lam1_err = eig_error(lam1h, C1, h);
  pc.lam2_err = eig_error(lam2h, C1, h);
  pc.lam1 = continuous_enclosure(lam1h, pc.lam1_err);
  pc.lam2 = continuous_enclosure(lam2h, pc.lam2_err);
  pc.Cn = extension_constant(n, pc.trig);
  D2Bound d2 = d2_singular_bound(pc.lam1, pc.lam2, pc.Cn);
  pc.dr_norm = sqrt(d2.dr2);
  pc.d2_half = d2.half;
  auto ef = eigfun_errors(lam1h, lam2h, pc.lam1_err, C1, h);
  pc.gradu_err = ef.grad;
  pc.l2u_err = ef.l2;
  pc.poly_area = kHalf * Interval(static_cast<double>(n)) * pc.trig.sin_t;
  return pc;
}

ProblemNorms problem_norms(const ProblemData& data, const PipelineConstants& pc) {
  Interval gap = pc.lam2 - pc.lam1;
  Interval gap_h = pc.lam2h - pc.lam1h;
  if (!(gap.lo() > 0.0) || !(gap_h.lo() > 0.0))
    throw std::domain_error("problem_norms: gap not positive");

  ProblemNorms N;
  N.cq = data.sum_abs_q * pc.C1 * sqrt2() * pc.d2_half;

  // energy chain for the continuous solution
  N.gradU = (pc.lam2 / gap) * (data.freg_norm / sqrt(pc.lam2) + data.sum_abs_q * pc.dr_norm);
  N.U = N.gradU / sqrt(pc.lam2);

  Interval lamU_freg = pc.lam1 * N.U + data.freg_norm;
  N.interp = pc.C1 * pc.h * lamU_freg + N.cq * pc.h;
  N.uv_l2 = pc.C1 * pc.h * N.interp;

  // projection norms: triangle chain and direct Poincare chain, keep smaller
  Interval v_direct = lamU_freg / pc.lam1 + data.sum_abs_q * pc.dr_norm / sqrt(pc.lam1);
  N.V = ub_min(N.U + N.uv_l2, v_direct);
  Interval gv_direct = lamU_freg / sqrt(pc.lam1) + data.sum_abs_q * pc.dr_norm;
  N.gradV = ub_min(N.gradU + N.interp, gv_direct);

  N.normerr0 = N.uv_l2 + N.V * pc.l2u_err;
  N.normerr = sqrt(pc.lam1h) * N.normerr0;
  N.Vt = N.V + N.normerr0;
  N.gradVt = N.gradV + N.normerr;

  N.disc = (sqrt(pc.lam2h) / gap_h) *
           (pc.lam1_err * N.U + pc.lam1h * N.uv_l2 + sqrt(kOne + pc.lam2h) * data.f_err);
  N.gradUh = N.gradVt + N.disc;

  // refinements through computed discrete norms
  if (data.grad_uh) {
    N.gradUh = ub_min(N.gradUh, *data.grad_uh);
    N.gradVt = ub_min(N.gradVt, *data.grad_uh + N.disc);
    N.gradV = ub_min(N.gradV, N.gradVt + N.normerr);
    N.gradU = ub_min(N.gradU, N.gradV + N.interp);
  }
  if (data.uh_l2) {
    Interval vt = *data.uh_l2 + N.disc / sqrt(pc.lam2h);
    N.Vt = ub_min(N.Vt, vt);
    N.V = ub_min(N.V, vt + N.normerr0);
    N.U = ub_min(N.U, N.V + N.uv_l2);
  }
  return N;
}

Interval pairing_error(const ProblemNorms& a, const ProblemNorms& b,
                       const PipelineConstants& pc) {
  Interval T1 = a.interp * b.interp;
  Interval T2 = a.gradV * b.normerr + b.gradVt * a.normerr + pc.lam1_err * a.Vt * b.Vt +
                pc.lam1 * (b.Vt * a.normerr0 + a.V * b.normerr0);
  Interval T3 = a.gradVt * b.disc + b.gradUh * a.disc;
  Interval total = T1 + T2 + T3;
  return Interval(0.0, total.hi());
}

SingularErrors singular_solution_error(const ProblemData& data, const PipelineConstants& pc) {
  ProblemNorms N = problem_norms(data, pc);
  Interval grad = N.interp + N.normerr + N.disc;
  Interval l2 = pc.C1 * pc.h * N.interp + N.normerr0 + N.disc / sqrt(pc.lam2h);
  return {Interval(0.0, grad.hi()), Interval(0.0, l2.hi())};
}

WCoeffs w_coeffs(char which, int k, const PipelineConstants& pc) {
  const int n = pc.n;
  auto cs = trig_multiples(pc.trig, n);
  auto cos_of = [&](long idx) { return cs[static_cast<int>(((idx % n) + n) % n)][0]; };
  auto sin_of = [&](long idx) { return cs[static_cast<int>(((idx % n) + n) % n)][1]; };
  Interval cot = pc.trig.cos_t / pc.trig.sin_t;
  Interval one_minus_ck = kOne - cos_of(k);

  WCoeffs w;
  Interval sum_q_abs;
  for (int j = 0; j < n; ++j) {
    Interval c, d, q;
    Interval dc = cos_of(static_cast<long>(j + 1) * k) - cos_of(static_cast<long>(j) * k);
    Interval ds = sin_of(static_cast<long>(j + 1) * k) - sin_of(static_cast<long>(j) * k);
    switch (which) {
      case 'A':
        c = cos_of(static_cast<long>(j + 1) * k) + cos_of(static_cast<long>(j) * k);
        d = dc / pc.trig.sin_t;
        q = -(cot * kTwo) * cos_of(static_cast<long>(j) * k) * one_minus_ck;
        break;
      case 'B':
        c = cot * dc;
        d = dc / pc.trig.sin_t;
        q = Interval(0.0); // even ray data cancels against the odd solution
        break;
      case 'C':
        c = cot * ds;
        d = ds / pc.trig.sin_t;
        q = Interval(0.0); // odd ray data cancels against the even solution
        break;
      default:
        throw std::invalid_argument("w_coeffs: which in {A,B,C}");
    }
    w.max_c = max(w.max_c, abs(c));
    w.max_d = max(w.max_d, abs(d));
    w.max_op = max(w.max_op, max(abs(c + d), abs(c - d)));
    sum_q_abs += abs(q);
  }
  w.sum_q = Interval(0.0, sum_q_abs.hi());
  return w;
}

ProblemData w_problem_data(char which, int k, const PipelineConstants& pc) {
  WCoeffs w = w_coeffs(which, k, pc);
  ProblemData d;
  d.freg_norm = Interval(0.0, (pc.lam1 * w.max_c + sqrt2() * pc.lam1 * w.max_d).hi());
  d.sum_abs_q = w.sum_q;
  d.f_err = Interval(0.0, (w.max_op * pc.gradu_err).hi());
  return d;
}

ProblemData material_problem_data(int which, const PipelineConstants& pc,
                                  const Interval& compat_defect) {
  Interval cot = pc.trig.cos_t / pc.trig.sin_t;
  Interval inv_sin = kOne / pc.trig.sin_t;
  ProblemData d;
  if (which == 1) {
    d.freg_norm =
        Interval(0.0, (kTwo * pc.lam1 * inv_sin + kTwo * pc.lam1 / Interval(static_cast<double>(pc.n))).hi());
    // rays S+, S-, S0 carry -cot, -cot, +2 cot
    d.sum_abs_q = Interval(0.0, (Interval(4.0) * cot).hi());
    // data operator norm: eigenvalues of [[2, g], [g, 0]] are 1 +- sqrt(1+g^2)
    Interval opn = kOne + sqrt(kOne + sq(cot));
    d.f_err = Interval(
        0.0,
        (opn * pc.gradu_err +
         (kTwo / Interval(static_cast<double>(pc.n))) * (pc.lam1_err + pc.lam1h * pc.l2u_err) +
         compat_defect)
            .hi());
  } else if (which == 2) {
    d.freg_norm = Interval(0.0, (kTwo * pc.lam1 * inv_sin).hi());
    d.sum_abs_q = Interval(2.0);
    // eigenvalues of [[0, 1], [1, 2g]] are g +- sqrt(1+g^2)
    Interval opn = abs(cot) + sqrt(kOne + sq(cot));
    d.f_err = Interval(0.0, (opn * pc.gradu_err + compat_defect).hi());
  } else {
    throw std::invalid_argument("material_problem_data: which in {1,2}");
  }
  return d;
}

SpectrumErrors spectrum_errors(const PipelineConstants& pc, const ProblemNorms& u1n,
                               const ProblemNorms& u2n, const Interval& t0x_err,
                               const Interval& t0y_err, const std::vector<ProblemNorms>* wA,
                               const std::vector<ProblemNorms>* wB,
                               const std::vector<ProblemNorms>* wC) {
  const int n = pc.n;
  auto cs = trig_multiples(pc.trig, n);
  SpectrumErrors out;
  out.A.assign(n, Interval(0.0));
  out.B.assign(n, Interval(0.0));
  out.C.assign(n, Interval(0.0));
  out.alpha.assign(n, Interval(0.0));
  out.beta.assign(n, Interval(0.0));
  out.gamma.assign(n, Interval(0.0));
  out.mu_widen.assign(n, 0.0);

  Interval two_area = kTwo * pc.poly_area;
  for (int k = 1; k < n; ++k) {
    ProblemNorms nA = wA ? (*wA)[k] : problem_norms(w_problem_data('A', k, pc), pc);
    ProblemNorms nB = wB ? (*wB)[k] : problem_norms(w_problem_data('B', k, pc), pc);
    ProblemNorms nC = wC ? (*wC)[k] : problem_norms(w_problem_data('C', k, pc), pc);
    out.A[k] = pairing_error(u1n, nA, pc);
    out.B[k] = pairing_error(u2n, nB, pc);
    out.C[k] = pairing_error(u1n, nC, pc);

    Interval coef =
        kTwo * Interval(static_cast<double>(n)) * (kOne - cs[k % n][0]) / pc.trig.sin_t;
    coef = Interval(0.0, coef.hi());
    out.alpha[k] = coef * t0x_err + two_area * out.A[k];
    out.beta[k] = coef * t0y_err + two_area * out.B[k];
    out.gamma[k] = two_area * out.C[k];
    // Weyl bound for the 2x2 symmetric block [[alpha, gamma], [gamma, beta]]
    out.mu_widen[k] =
        rnd::add_up(std::max(out.alpha[k].hi(), out.beta[k].hi()), out.gamma[k].hi());
  }
  return out;
}

} // namespace ngoncert
