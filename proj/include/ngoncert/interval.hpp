#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngoncert {

// Directed rounding of the basic operations. The platform stays in
// round-to-nearest; directed results are recovered from exact error terms
// (TwoSum / TwoProdFMA) and a one-ulp nudge where the error is nonzero.
namespace rnd {

double next_up(double x);
double next_down(double x);

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double x);
double sqrt_up(double x);

} // namespace rnd

/// Closed floating-point interval [lo, hi] with containment semantics:
/// every operation returns an interval containing the exact real result set.
/// Endpoints are finite except when an operation overflows, in which case the
/// affected endpoint widens to +-infinity and downstream certification is
/// expected to fail closed.
class Interval {
public:
  Interval() : lo_(0.0), hi_(0.0) {}
  explicit Interval(double x) : lo_(x), hi_(x) { check(); }
  Interval(double lo, double hi) : lo_(lo), hi_(hi) { check(); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Midpoint, clamped into the interval.
  double mid() const;
  /// Upper bound for the radius.
  double rad() const;
  /// Upper bound for the width hi-lo.
  double width() const;
  /// sup |x| over the interval.
  double mag() const;
  /// inf |x| over the interval (0 if the interval contains 0).
  double mig() const;

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  /// Strict interior containment (used by verification fixed points).
  bool interior_contains(const Interval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }
  bool is_point() const { return lo_ == hi_; }
  bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }
  bool strictly_positive() const { return lo_ > 0.0; }

  /// Widen by an absolute amount delta >= 0 on both sides.
  Interval inflated(double delta) const;

  static Interval hull(const Interval& a, const Interval& b);
  static std::optional<Interval> intersect(const Interval& a, const Interval& b);
  /// Interval guaranteed to contain the decimal literal given as string.
  static Interval from_decimal(const std::string& s);

  Interval operator-() const { return Interval(-hi_, -lo_); }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

private:
  void check() const {
    if (std::isnan(lo_) || std::isnan(hi_) || !(lo_ <= hi_))
      throw std::invalid_argument("Interval: invalid endpoints");
  }
  double lo_, hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

/// Enclosure of sqrt over the interval; requires lo >= 0.
Interval sqrt(const Interval& a);
/// Enclosure of x^2, tight around 0.
Interval sq(const Interval& a);
/// Enclosure of |x|.
Interval abs(const Interval& a);
/// Hull of max/min taken pointwise over the two sets.
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

using IntervalVector = std::vector<Interval>;

/// Upper bound of sup { ||x||_2 : x in v }, all roundings upward.
double iv_norm2_upper(const IntervalVector& v);
/// Enclosure of the dot product.
Interval iv_dot(const IntervalVector& a, const IntervalVector& b);
std::vector<double> iv_mid(const IntervalVector& v);
/// Upper bound of the 2-norm of the radius vector.
double iv_rad_norm2_upper(const IntervalVector& v);
/// Box v[i] + [-delta, delta].
IntervalVector iv_inflated(const std::vector<double>& mid, double delta);

/// Outward-rounded decimal rendering: the printed interval contains the
/// internal one. `sig` significant digits, scientific-style endpoints.
std::string to_string(const Interval& v, int sig = 6);
/// Fixed-point variant with `decimals` digits after the point, outward rounded
/// (layout used by the certification report table).
std::string to_string_fixed(const Interval& v, int decimals = 4, int width = 10);

/// Decimal string for a single bound, rounded toward -inf (down=true) or +inf.
std::string decimal_directed(double v, int sig, bool down);
std::string decimal_fixed_directed(double v, int decimals, bool down);

} // namespace ngoncert
