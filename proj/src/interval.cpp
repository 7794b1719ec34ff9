#include "ngoncert/interval.hpp"

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace ngoncert {
namespace rnd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Magnitude guards: outside these ranges the error-free transforms may not be
// exact (overflow of the error term, or subnormal products), so we nudge
// unconditionally.
constexpr double kBigGuard = 0x1p+996;
constexpr double kTinyGuard = 0x1p-1000;
} // namespace

double next_up(double x) {
  if (std::isnan(x) || x == kInf) return x;
  if (x == 0.0) return DBL_TRUE_MIN;
  auto u = std::bit_cast<std::uint64_t>(x);
  u = (x > 0.0) ? u + 1 : u - 1;
  return std::bit_cast<double>(u);
}

double next_down(double x) {
  if (std::isnan(x) || x == -kInf) return x;
  if (x == 0.0) return -DBL_TRUE_MIN;
  auto u = std::bit_cast<std::uint64_t>(x);
  u = (x > 0.0) ? u - 1 : u + 1;
  return std::bit_cast<double>(u);
}

namespace {

// Exact error of the rounded sum (Knuth TwoSum), valid when no overflow occurs.
inline double sum_err(double a, double b, double s) {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

inline double dir_add(double a, double b, bool down) {
  double s = a + b;
  if (std::isnan(s)) throw std::invalid_argument("interval add: NaN");
  if (!std::isfinite(s)) {
    if (s == kInf) return down ? DBL_MAX : kInf;
    return down ? -kInf : -DBL_MAX;
  }
  if (std::fabs(s) >= kBigGuard) return down ? next_down(s) : next_up(s);
  double e = sum_err(a, b, s);
  if (down) return (e < 0.0) ? next_down(s) : s;
  return (e > 0.0) ? next_up(s) : s;
}

inline double dir_mul(double a, double b, bool down) {
  if (a == 0.0 || b == 0.0) return 0.0; // covers 0 * inf as the exact set {0}
  double p = a * b;
  if (std::isnan(p)) throw std::invalid_argument("interval mul: NaN");
  if (!std::isfinite(p)) {
    if (p == kInf) return down ? DBL_MAX : kInf;
    return down ? -kInf : -DBL_MAX;
  }
  double m = std::fabs(p);
  if (m >= kBigGuard || m <= kTinyGuard) return down ? next_down(p) : next_up(p);
  double e = std::fma(a, b, -p);
  if (down) return (e < 0.0) ? next_down(p) : p;
  return (e > 0.0) ? next_up(p) : p;
}

inline double dir_div(double a, double b, bool down) {
  if (b == 0.0) throw std::domain_error("interval div: zero endpoint");
  if (a == 0.0) return 0.0;
  double q = a / b;
  if (std::isnan(q)) throw std::invalid_argument("interval div: NaN");
  if (!std::isfinite(q)) {
    if (q == kInf) return down ? DBL_MAX : kInf;
    return down ? -kInf : -DBL_MAX;
  }
  double m = std::fabs(q);
  if (m >= kBigGuard || m <= kTinyGuard || std::fabs(a) >= kBigGuard ||
      !std::isfinite(b) || std::fabs(b) >= kBigGuard)
    return down ? next_down(q) : next_up(q);
  double r = std::fma(q, b, -a); // q*b - a, exact under the guards
  // sign(a/b - q) = sign(-r * sign(b))
  bool q_high = (b > 0.0) ? (r > 0.0) : (r < 0.0);
  bool q_low = (b > 0.0) ? (r < 0.0) : (r > 0.0);
  if (down) return q_high ? next_down(q) : q;
  return q_low ? next_up(q) : q;
}

} // namespace

double add_down(double a, double b) { return dir_add(a, b, true); }
double add_up(double a, double b) { return dir_add(a, b, false); }
double sub_down(double a, double b) { return dir_add(a, -b, true); }
double sub_up(double a, double b) { return dir_add(a, -b, false); }
double mul_down(double a, double b) { return dir_mul(a, b, true); }
double mul_up(double a, double b) { return dir_mul(a, b, false); }
double div_down(double a, double b) { return dir_div(a, b, true); }
double div_up(double a, double b) { return dir_div(a, b, false); }

double sqrt_down(double x) {
  if (x < 0.0) throw std::domain_error("sqrt_down: negative");
  if (x == 0.0) return 0.0;
  if (!std::isfinite(x)) return DBL_MAX;
  double r = std::sqrt(x);
  double e = std::fma(r, r, -x);
  return (e > 0.0) ? next_down(r) : r;
}

double sqrt_up(double x) {
  if (x < 0.0) throw std::domain_error("sqrt_up: negative");
  if (x == 0.0) return 0.0;
  if (!std::isfinite(x)) return x;
  double r = std::sqrt(x);
  double e = std::fma(r, r, -x);
  return (e < 0.0) ? next_up(r) : r;
}

} // namespace rnd

double Interval::mid() const {
  if (lo_ == hi_) return lo_;
  double m = 0.5 * (lo_ + hi_);
  if (!std::isfinite(m)) m = 0.5 * lo_ + 0.5 * hi_;
  if (!std::isfinite(m)) m = 0.0;
  return std::clamp(m, lo_, hi_);
}

double Interval::rad() const {
  double m = mid();
  return std::max(rnd::sub_up(hi_, m), rnd::sub_up(m, lo_));
}

double Interval::width() const { return rnd::sub_up(hi_, lo_); }

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval Interval::inflated(double delta) const {
  if (delta < 0.0) throw std::invalid_argument("inflated: negative delta");
  return Interval(rnd::sub_down(lo_, delta), rnd::add_up(hi_, delta));
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

std::optional<Interval> Interval::intersect(const Interval& a, const Interval& b) {
  double lo = std::max(a.lo_, b.lo_);
  double hi = std::min(a.hi_, b.hi_);
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

Interval Interval::from_decimal(const std::string& s) {
  double v = std::strtod(s.c_str(), nullptr);
  // strtod is correctly rounded; one ulp each way is enough.
  return Interval(rnd::next_down(v), rnd::next_up(v));
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(rnd::add_down(a.lo(), b.lo()), rnd::add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(rnd::sub_down(a.lo(), b.hi()), rnd::sub_up(a.hi(), b.lo()));
}

Interval operator*(const Interval& a, const Interval& b) {
  double lo = std::min(std::min(rnd::mul_down(a.lo(), b.lo()), rnd::mul_down(a.lo(), b.hi())),
                       std::min(rnd::mul_down(a.hi(), b.lo()), rnd::mul_down(a.hi(), b.hi())));
  double hi = std::max(std::max(rnd::mul_up(a.lo(), b.lo()), rnd::mul_up(a.lo(), b.hi())),
                       std::max(rnd::mul_up(a.hi(), b.lo()), rnd::mul_up(a.hi(), b.hi())));
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval div: divisor contains zero");
  double lo = std::min(std::min(rnd::div_down(a.lo(), b.lo()), rnd::div_down(a.lo(), b.hi())),
                       std::min(rnd::div_down(a.hi(), b.lo()), rnd::div_down(a.hi(), b.hi())));
  double hi = std::max(std::max(rnd::div_up(a.lo(), b.lo()), rnd::div_up(a.lo(), b.hi())),
                       std::max(rnd::div_up(a.hi(), b.lo()), rnd::div_up(a.hi(), b.hi())));
  return Interval(lo, hi);
}

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0) throw std::domain_error("interval sqrt: negative lower endpoint");
  return Interval(rnd::sqrt_down(a.lo()), rnd::sqrt_up(a.hi()));
}

Interval sq(const Interval& a) {
  double l = std::fabs(a.lo()), h = std::fabs(a.hi());
  double lo_m = std::min(l, h), hi_m = std::max(l, h);
  if (a.contains_zero()) lo_m = 0.0;
  return Interval(rnd::mul_down(lo_m, lo_m), rnd::mul_up(hi_m, hi_m));
}

Interval abs(const Interval& a) { return Interval(a.mig(), a.mag()); }

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

double iv_norm2_upper(const IntervalVector& v) {
  double s = 0.0;
  for (const Interval& x : v) {
    double m = x.mag();
    s = rnd::add_up(s, rnd::mul_up(m, m));
  }
  return rnd::sqrt_up(s);
}

Interval iv_dot(const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("iv_dot: size mismatch");
  Interval s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> iv_mid(const IntervalVector& v) {
  std::vector<double> m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m[i] = v[i].mid();
  return m;
}

double iv_rad_norm2_upper(const IntervalVector& v) {
  double s = 0.0;
  for (const Interval& x : v) {
    double r = x.rad();
    s = rnd::add_up(s, rnd::mul_up(r, r));
  }
  return rnd::sqrt_up(s);
}

IntervalVector iv_inflated(const std::vector<double>& mid, double delta) {
  IntervalVector out(mid.size());
  for (std::size_t i = 0; i < mid.size(); ++i) out[i] = Interval(mid[i]).inflated(delta);
  return out;
}

namespace {

// Decrement/increment a positive decimal mantissa string of fixed length.
std::string mantissa_step(std::string digits, int& exp10, bool decrement) {
  int n = static_cast<int>(digits.size());
  if (decrement) {
    int i = n - 1;
    while (i >= 0 && digits[i] == '0') digits[i--] = '9';
    if (i < 0) return digits; // all zeros; caller handles
    digits[i] -= 1;
    if (digits[0] == '0') { // 1.000e+k -> 9.999e+(k-1)
      digits = std::string(n, '9');
      exp10 -= 1;
    }
  } else {
    int i = n - 1;
    while (i >= 0 && digits[i] == '9') digits[i--] = '0';
    if (i < 0) { // 9.99e+k -> 1.00e+(k+1)
      digits = "1" + std::string(n - 1, '0');
      exp10 += 1;
    } else {
      digits[i] += 1;
    }
  }
  return digits;
}

std::string assemble_sci(bool neg, const std::string& digits, int exp10) {
  std::string s = neg ? "-" : "";
  s += digits.substr(0, 1);
  if (digits.size() > 1) s += "." + digits.substr(1);
  char buf[16];
  std::snprintf(buf, sizeof buf, "e%+03d", exp10);
  return s + buf;
}

} // namespace

std::string decimal_directed(double v, int sig, bool down) {
  if (sig < 1) sig = 1;
  if (sig > 17) sig = 17;
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", sig - 1, v);
  std::string s(buf);
  double parsed = std::strtod(s.c_str(), nullptr);
  bool ok = down ? (parsed <= v) : (parsed >= v);
  if (ok) return s;

  // Move one decimal ulp outward.
  bool neg = s[0] == '-';
  std::string body = neg ? s.substr(1) : s;
  auto epos = body.find('e');
  std::string mant = body.substr(0, epos);
  int exp10 = std::atoi(body.c_str() + epos + 1);
  mant.erase(std::remove(mant.begin(), mant.end(), '.'), mant.end());
  bool shrink_magnitude = (down && !neg) || (!down && neg);
  mant = mantissa_step(mant, exp10, shrink_magnitude);
  std::string out = assemble_sci(neg, mant, exp10);
  parsed = std::strtod(out.c_str(), nullptr);
  if (down ? (parsed > v) : (parsed < v))
    throw std::logic_error("decimal_directed: rounding adjustment failed");
  return out;
}

std::string decimal_fixed_directed(double v, int decimals, bool down) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  double parsed = std::strtod(s.c_str(), nullptr);
  bool ok = down ? (parsed <= v) : (parsed >= v);
  if (ok) return s;
  double step = std::pow(10.0, -decimals);
  // One decimal step outward; verify by re-parsing.
  for (int tries = 0; tries < 3; ++tries) {
    double cand = down ? parsed - step : parsed + step;
    std::snprintf(buf, sizeof buf, "%.*f", decimals, cand);
    s = buf;
    parsed = std::strtod(s.c_str(), nullptr);
    if (down ? (parsed <= v) : (parsed >= v)) return s;
  }
  throw std::logic_error("decimal_fixed_directed: rounding adjustment failed");
}

std::string to_string(const Interval& v, int sig) {
  return "[" + decimal_directed(v.lo(), sig, true) + ", " +
         decimal_directed(v.hi(), sig, false) + "]";
}

std::string to_string_fixed(const Interval& v, int decimals, int width) {
  std::string lo = decimal_fixed_directed(v.lo(), decimals, true);
  std::string hi = decimal_fixed_directed(v.hi(), decimals, false);
  auto pad = [&](std::string s) {
    while (static_cast<int>(s.size()) < width) s = " " + s;
    return s;
  };
  return "[" + pad(lo) + "," + pad(hi) + "]";
}

} // namespace ngoncert
