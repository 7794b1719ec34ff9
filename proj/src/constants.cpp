#include "ngoncert/constants.hpp"

#include <algorithm>
#include <cmath>

namespace ngoncert {

namespace {

// ---------------------------------------------------------------------------
// Minimal double-double kernel. Only used here, to evaluate the trig series at
// near-exact arguments; every result is converted back to an Interval with a
// generous accumulated-error allowance, so the kernel itself only needs to be
// accurate, not certified op-by-op.
// ---------------------------------------------------------------------------

struct DD {
  double hi, lo;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  double c = s.lo + t.hi;
  DD v = quick_two_sum(s.hi, c);
  double w = t.lo + v.lo;
  return quick_two_sum(v.hi, w);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }
inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  double e = p.lo + (a.hi * b.lo + a.lo * b.hi);
  return quick_two_sum(p.hi, e);
}

inline DD dd_div_int(DD a, int n) {
  double q1 = a.hi / n;
  double r = std::fma(-q1, n, a.hi); // exact remainder
  double q2 = (r + a.lo) / n;
  return quick_two_sum(q1, q2);
}

inline DD dd_mul_pow2(DD a, double p) { return {a.hi * p, a.lo * p}; }

inline double dd_value(DD a) { return a.hi + a.lo; }

// pi as double-double; |pi - (hi+lo)| < 1e-32.
const DD kPiDD = {0x1.921fb54442d18p+1, 0x1.1a62633145c07p-53};
constexpr double kPiDDErr = 1e-32;

// Conservative absolute slack covering all double-double rounding inside one
// series evaluation (few dozen ops on quantities of magnitude <= 1.3, each
// with relative error below 2^-99) plus coefficient construction.
constexpr double kSeriesSlack = 1e-25;

constexpr int kTrigTerms = 13;

struct TrigCoeffs {
  DD inv_fact_odd[kTrigTerms];  // 1/(2k+1)!
  DD inv_fact_even[kTrigTerms]; // 1/(2k)!
};

const TrigCoeffs& trig_coeffs() {
  static const TrigCoeffs c = [] {
    TrigCoeffs t;
    DD fact = {1.0, 0.0};
    int m = 0;
    auto bump_to = [&](int target) {
      while (m < target) {
        ++m;
        fact = dd_mul(fact, DD{static_cast<double>(m), 0.0});
      }
    };
    for (int k = 0; k < kTrigTerms; ++k) {
      bump_to(2 * k);
      DD f_even = fact;
      bump_to(2 * k + 1);
      DD f_odd = fact;
      // 1/f via one Newton step from the double quotient
      auto dd_inv = [](DD f) {
        double q1 = 1.0 / f.hi;
        DD r = dd_sub(DD{1.0, 0.0}, dd_mul(DD{q1, 0.0}, f));
        double q2 = dd_value(r) / f.hi;
        return quick_two_sum(q1, q2);
      };
      t.inv_fact_even[k] = dd_inv(f_even);
      t.inv_fact_odd[k] = dd_inv(f_odd);
    }
    return t;
  }();
  return c;
}

// Truncation bound covering both series for |y| <= 0.79: the first omitted
// term is y^(2K)/(2K)! for cos and y^(2K+1)/(2K+1)! for sin (K = kTrigTerms);
// a factor 2 majorizes the alternating tail.
double trig_tail_bound(double ymag) {
  double t = 1.0;
  for (int i = 0; i < 2 * kTrigTerms; ++i) t = rnd::mul_up(t, ymag);
  double fact = 1.0;
  for (int i = 2; i <= 2 * kTrigTerms; ++i) fact *= i;
  return rnd::mul_up(2.0 * (1.0 + ymag), rnd::div_up(t, fact));
}

// Double-double value plus an absolute error bound against the exact real.
struct DDE {
  DD v;
  double err;
};

Interval to_interval(const DDE& x) {
  DD s = two_sum(x.v.hi, x.v.lo); // renormalize: exact value = s.hi + s.lo
  double lo = rnd::add_down(s.hi, rnd::sub_down(s.lo, x.err));
  double hi = rnd::add_up(s.hi, rnd::add_up(s.lo, x.err));
  return Interval(lo, hi);
}

// sin at the point hi+lo of y, |y| <= 0.79; arg_err bounds the distance
// between y and the intended exact argument.
DDE sin_dd(DD y, double arg_err) {
  const TrigCoeffs& c = trig_coeffs();
  DD s = dd_mul(y, y);
  DD p = {0.0, 0.0};
  for (int k = kTrigTerms - 1; k >= 0; --k) {
    p = dd_mul(p, s);
    DD term = c.inv_fact_odd[k];
    if (k % 2 == 1) term = dd_neg(term);
    p = dd_add(p, term);
  }
  DD r = dd_mul(y, p);
  return {r, kSeriesSlack + trig_tail_bound(std::fabs(dd_value(y)) + arg_err) + arg_err};
}

DDE cos_dd(DD y, double arg_err) {
  const TrigCoeffs& c = trig_coeffs();
  DD s = dd_mul(y, y);
  DD p = {0.0, 0.0};
  for (int k = kTrigTerms - 1; k >= 0; --k) {
    p = dd_mul(p, s);
    DD term = c.inv_fact_even[k];
    if (k % 2 == 1) term = dd_neg(term);
    p = dd_add(p, term);
  }
  return {p, kSeriesSlack + trig_tail_bound(std::fabs(dd_value(y)) + arg_err) + arg_err};
}

// sin/cos at an angle in (0, 2*pi/3], given as DD; reduction
// sin(x) = cos(pi/2 - x), cos(x) = sin(pi/2 - x) when x > ~pi/4.
void sincos_angle(DD x, double arg_err, DDE& s, DDE& c) {
  if (dd_value(x) <= 0.785) {
    s = sin_dd(x, arg_err);
    c = cos_dd(x, arg_err);
  } else {
    DD half_pi = dd_mul_pow2(kPiDD, 0.5);
    DD y = dd_sub(half_pi, x);
    double err = arg_err + kPiDDErr + 1e-30;
    s = cos_dd(y, err);
    c = sin_dd(y, err);
  }
}

// Quotient a/b in double-double with propagated error bounds.
DDE dde_div(const DDE& a, const DDE& b) {
  double q1 = a.v.hi / b.v.hi;
  DD r = dd_sub(a.v, dd_mul(DD{q1, 0.0}, b.v));
  double q2 = dd_value(r) / b.v.hi;
  DD q = quick_two_sum(q1, q2);
  double bm = std::fabs(dd_value(b.v)) - b.err;
  if (bm <= 0.0) throw std::domain_error("dde_div: divisor may vanish");
  double qm = std::fabs(dd_value(q)) + 1.0;
  double err = (a.err + qm * b.err) / bm * 1.001 + 1e-28 * qm;
  return {q, err};
}

} // namespace

Interval pi_interval() {
  double lo = kPiDD.hi; // kPiDD.hi < pi (lo part positive)
  return Interval(lo, rnd::next_up(lo));
}

ThetaTrig enclose_theta(int n) {
  if (n < 3) throw std::invalid_argument("enclose_theta: n >= 3 required");
  ThetaTrig t;
  t.n = n;
  DD two_pi = dd_mul_pow2(kPiDD, 2.0);
  DD theta = dd_div_int(two_pi, n);
  double theta_err = 2 * kPiDDErr + 1e-30;
  t.theta = to_interval({theta, theta_err});

  DDE s, c;
  sincos_angle(theta, theta_err, s, c);
  t.sin_t = to_interval(s);
  t.cos_t = to_interval(c);
  if (!t.cos_t.contains_zero()) t.tan_t = to_interval(dde_div(s, c));

  DD half = dd_mul_pow2(theta, 0.5);
  DDE sh, ch;
  sincos_angle(half, theta_err, sh, ch);
  t.tan_half_t = to_interval(dde_div(sh, ch));
  return t;
}

namespace {

// cos and sin of 2*pi*num/den, num in [0, den), by quadrant reduction to a
// series argument in [-0.79, 0.79].
std::array<Interval, 2> cos_sin_frac(int num, int den) {
  if (num == 0) return {Interval(1.0), Interval(0.0)};
  DD two_pi = dd_mul_pow2(kPiDD, 2.0);
  DD p = two_prod(two_pi.hi, static_cast<double>(num));
  DD alpha = dd_div_int(quick_two_sum(p.hi, two_pi.lo * num + p.lo), den);
  double arg_err = 4 * kPiDDErr * num + 1e-29;
  int q = static_cast<int>(std::floor(dd_value(alpha) / (kPiDD.hi / 2)));
  q = std::clamp(q, 0, 3);
  DD quarter = dd_mul_pow2(kPiDD, 0.5);
  DD y = alpha;
  for (int i = 0; i < q; ++i) y = dd_sub(y, quarter);
  arg_err += q * kPiDDErr + 1e-29;
  DDE sy, cy;
  if (std::fabs(dd_value(y)) <= 0.785) {
    sy = sin_dd(y, arg_err);
    cy = cos_dd(y, arg_err);
  } else {
    DD z = dd_sub(quarter, y);
    sy = cos_dd(z, arg_err + kPiDDErr);
    cy = sin_dd(z, arg_err + kPiDDErr);
  }
  Interval s = to_interval(sy), c = to_interval(cy);
  switch (q) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

} // namespace

std::vector<std::array<Interval, 2>> trig_multiples(const ThetaTrig& t, int count) {
  std::vector<std::array<Interval, 2>> out(count);
  for (int k = 0; k < count; ++k) out[k] = cos_sin_frac(k % t.n, t.n);
  return out;
}

namespace {

constexpr int kBesselTerms = 26;

// Coefficients 1/(k!(k+2)!) as intervals.
const std::vector<Interval>& bessel_coeffs() {
  static const std::vector<Interval> c = [] {
    std::vector<Interval> out;
    Interval fact_k(1.0);   // k!
    Interval fact_k2(2.0);  // (k+2)!
    for (int k = 0; k <= kBesselTerms + 1; ++k) {
      if (k > 0) {
        fact_k = fact_k * Interval(static_cast<double>(k));
        fact_k2 = fact_k2 * Interval(static_cast<double>(k + 2));
      }
      out.push_back(Interval(1.0) / (fact_k * fact_k2));
    }
    return out;
  }();
  return c;
}

} // namespace

Interval bessel_j2(const Interval& x) {
  if (x.mag() > 16.0) throw std::domain_error("bessel_j2: |x| too large");
  const auto& c = bessel_coeffs();
  Interval u = sq(x * Interval(0.5)); // (x/2)^2, |u| <= 64
  Interval p;
  for (int k = kBesselTerms; k >= 0; --k) {
    Interval term = c[k];
    if (k % 2 == 1) term = -term;
    p = p * u + term;
  }
  // Tail: ratio of consecutive terms <= u/((K+2)(K+4)) < 1/2 for |u| <= 64.
  double umax = u.mag();
  double t = c[kBesselTerms + 1].hi();
  for (int i = 0; i <= kBesselTerms; ++i) t = rnd::mul_up(t, umax);
  Interval result = u * p;
  return result.inflated(rnd::mul_up(2.0, rnd::mul_up(t, umax)));
}

Interval bessel_j2_deriv(const Interval& x) {
  if (x.mag() > 16.0) throw std::domain_error("bessel_j2_deriv: |x| too large");
  // d/dx sum (-1)^k (x/2)^(2k+2) c_k = sum (-1)^k (k+1) (x/2)^(2k+1) c_k
  const auto& c = bessel_coeffs();
  Interval u = sq(x * Interval(0.5));
  Interval p;
  for (int k = kBesselTerms; k >= 0; --k) {
    Interval term = c[k] * Interval(static_cast<double>(k + 1));
    if (k % 2 == 1) term = -term;
    p = p * u + term;
  }
  double umax = u.mag();
  double t = rnd::mul_up(c[kBesselTerms + 1].hi(), kBesselTerms + 2.0);
  for (int i = 0; i <= kBesselTerms; ++i) t = rnd::mul_up(t, umax);
  double half_x = (x * Interval(0.5)).mag();
  Interval result = (x * Interval(0.5)) * p;
  return result.inflated(rnd::mul_up(2.0, rnd::mul_up(t, half_x)));
}

Interval bessel_zero_j21() {
  Interval X(5.13, 5.14);
  bool contracted = false;
  for (int it = 0; it < 60; ++it) {
    double m = X.mid();
    Interval fm = bessel_j2(Interval(m));
    Interval d = bessel_j2_deriv(X);
    if (d.contains_zero()) break;
    Interval N = Interval(m) - fm / d;
    if (X.interior_contains(N)) contracted = true;
    auto cap = Interval::intersect(N, X);
    if (!cap) break;
    if (cap->width() >= X.width() * 0.9 && it > 4) { X = *cap; break; }
    X = *cap;
  }
  // Existence: contraction of the interval Newton step, or a sign change.
  if (!contracted) {
    Interval flo = bessel_j2(Interval(X.lo()));
    Interval fhi = bessel_j2(Interval(X.hi()));
    bool sign_change = (flo.lo() > 0.0 && fhi.hi() < 0.0) || (flo.hi() < 0.0 && fhi.lo() > 0.0);
    if (!sign_change) throw std::runtime_error("bessel_zero_j21: existence not verified");
  }
  if (X.width() > 1e-12) throw std::runtime_error("bessel_zero_j21: enclosure too wide");
  return X;
}

Interval disk_lambda4() { return sq(bessel_zero_j21()); }

} // namespace ngoncert
