#include "doctest.h"

#include <cmath>
#include <random>

#include "ngoncert/constants.hpp"
#include "ngoncert/interval.hpp"

using namespace ngoncert;

namespace {
double ulp_of(double x) { return rnd::next_up(std::fabs(x)) - std::fabs(x); }
} // namespace

TEST_CASE("basic arithmetic on exact endpoints") {
  Interval a(1.0, 2.0), b(3.0, 4.0);
  Interval s = a + b;
  CHECK(s.lo() == 4.0);
  CHECK(s.hi() == 6.0);

  Interval p = Interval(-1.0, 2.0) * Interval(3.0, 4.0);
  CHECK(p.lo() == -4.0);
  CHECK(p.hi() == 8.0);

  Interval q = Interval(1.0) / Interval(2.0, 4.0);
  CHECK(q.lo() == 0.25);
  CHECK(q.hi() == 0.5);

  CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), std::domain_error);
}

TEST_CASE("sqrt enclosures") {
  Interval r = sqrt(Interval(4.0, 9.0));
  CHECK(r.lo() == 2.0);
  CHECK(r.hi() == 3.0);

  Interval z = sqrt(Interval(0.0));
  CHECK(z.lo() == 0.0);
  CHECK(z.hi() == 0.0);

  Interval s2 = sqrt(Interval(2.0));
  long double ref = sqrtl(2.0L);
  CHECK(s2.lo() <= static_cast<double>(ref));
  CHECK(s2.hi() >= static_cast<double>(ref));
  CHECK(s2.width() <= 2 * ulp_of(s2.mid()));

  CHECK_THROWS_AS(sqrt(Interval(-1.0, 1.0)), std::domain_error);
}

TEST_CASE("containment under random arithmetic") {
  std::mt19937_64 gen(20240517);
  std::uniform_real_distribution<double> val(-50.0, 50.0);
  std::uniform_real_distribution<double> radf(0.0, 1e-6);
  int cases = 0;
  while (cases < 4000) {
    double x = val(gen), y = val(gen);
    Interval X = Interval(x).inflated(radf(gen) * std::fabs(x));
    Interval Y = Interval(y).inflated(radf(gen) * std::fabs(y));
    long double xr = x, yr = y;
    int op = cases % 4;
    if (op == 3 && Y.contains_zero()) continue;
    Interval Z;
    long double zr = 0;
    switch (op) {
      case 0: Z = X + Y; zr = xr + yr; break;
      case 1: Z = X - Y; zr = xr - yr; break;
      case 2: Z = X * Y; zr = xr * yr; break;
      case 3: Z = X / Y; zr = xr / yr; break;
    }
    CHECK(Z.lo() <= static_cast<double>(zr));
    CHECK(Z.hi() >= static_cast<double>(zr));
    ++cases;
  }
}

TEST_CASE("monotone widening under composition") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    double x = val(gen), y = val(gen);
    Interval X(std::min(x, y), std::max(x, y));
    Interval Xw = X.inflated(0.125);
    Interval a = X * X + X;
    Interval aw = Xw * Xw + Xw;
    CHECK(aw.contains(a));
    CHECK(aw.width() >= a.width());
  }
}

TEST_CASE("norm2 upper bound") {
  IntervalVector v{Interval(3.0), Interval(4.0)};
  double n = iv_norm2_upper(v);
  CHECK(n >= 5.0);
  CHECK(n <= 5.0 * (1 + 4e-16));

  CHECK(iv_norm2_upper(IntervalVector{Interval(0.0), Interval(0.0)}) == 0.0);
  CHECK(iv_norm2_upper(IntervalVector{Interval(-1.0, 1.0)}) >= 1.0);
}

TEST_CASE("outward decimal printing") {
  Interval v(0.05472345, 5.37749912);
  std::string s = to_string(v, 6);
  // printed lo <= lo, printed hi >= hi
  double plo = std::strtod(s.c_str() + 1, nullptr);
  auto comma = s.find(',');
  double phi = std::strtod(s.c_str() + comma + 1, nullptr);
  CHECK(plo <= v.lo());
  CHECK(phi >= v.hi());

  std::string f = to_string_fixed(Interval(0.054712, 5.377488), 4);
  CHECK(f.find("0.0547") != std::string::npos);
  CHECK(f.find("5.3775") != std::string::npos);

  // carry cases
  CHECK(decimal_directed(1.0, 3, true) == std::string("1.00e+00"));
  double just_below_one = rnd::next_down(1.0);
  double v2 = std::strtod(decimal_directed(just_below_one, 3, true).c_str(), nullptr);
  CHECK(v2 <= just_below_one);
}

TEST_CASE("theta trig enclosures") {
  // cos(2*pi/6) = 1/2 exactly
  ThetaTrig t6 = enclose_theta(6);
  CHECK(t6.cos_t.contains(0.5));
  CHECK(t6.tan_t.has_value());

  // n=4: theta = pi/2, tangent flagged
  ThetaTrig t4 = enclose_theta(4);
  CHECK_FALSE(t4.tan_t.has_value());
  CHECK_THROWS_AS(t4.tan(), std::domain_error);

  // n=5: tan(theta/2) = tan(pi/5)
  ThetaTrig t5 = enclose_theta(5);
  long double ref = tanl(static_cast<long double>(M_PI) / 5.0L);
  CHECK(t5.tan_half_t.lo() <= static_cast<double>(ref));
  CHECK(t5.tan_half_t.hi() >= static_cast<double>(ref));
  CHECK(t5.tan_half_t.contains(0.72654252800536078));

  for (int n = 3; n <= 64; ++n) {
    ThetaTrig t = enclose_theta(n);
    long double th = 2.0L * 3.14159265358979323846264338327950288L / n;
    CHECK(t.theta.contains(static_cast<double>(th)));
    // the long double oracle itself carries ~1e-19 argument error
    Interval sin_ref = t.sin_t.inflated(1e-17);
    Interval cos_ref = t.cos_t.inflated(1e-17);
    CHECK(sin_ref.contains(static_cast<double>(sinl(th))));
    CHECK(cos_ref.contains(static_cast<double>(cosl(th))));
    // sin^2 + cos^2 contains 1
    Interval one = sq(t.sin_t) + sq(t.cos_t);
    CHECK(one.contains(1.0));
    // width budget: a few ulp of the midpoint
    CHECK(t.theta.width() <= 8 * ulp_of(t.theta.mid()));
    CHECK(t.sin_t.width() <= 8 * ulp_of(t.sin_t.mid()));
    // n=4 has cos(theta)=0: no meaningful ulp scale at a zero midpoint
    CHECK(t.cos_t.width() <= std::max(8 * ulp_of(t.cos_t.mid()), 1e-24));
    if (t.tan_t) CHECK(t.tan_t->width() <= 8 * ulp_of(t.tan_t->mid()));
    CHECK(t.tan_half_t.width() <= 8 * ulp_of(t.tan_half_t.mid()));
  }
}

TEST_CASE("trig multiples recurrence") {
  ThetaTrig t = enclose_theta(5);
  auto m = trig_multiples(t, 10);
  for (int k = 0; k < 10; ++k) {
    long double th = 2.0L * 3.14159265358979323846264338327950288L / 5 * k;
    CHECK(m[k][0].inflated(1e-17).contains(static_cast<double>(cosl(th))));
    CHECK(m[k][1].inflated(1e-17).contains(static_cast<double>(sinl(th))));
  }
}

TEST_CASE("bessel zero of J2") {
  Interval j = bessel_zero_j21();
  CHECK(j.lo() >= 5.1356);
  CHECK(j.hi() <= 5.1357);
  CHECK(j.width() <= 1e-10);

  // J2 straddles zero across the enclosure
  Interval across = bessel_j2(j);
  CHECK(across.contains_zero());

  Interval j2sq = disk_lambda4();
  CHECK(j2sq.lo() >= 26.31);
  CHECK(j2sq.hi() <= 26.38);
  CHECK(j2sq.contains(26.37461642716339)); // j21^2 reference
}

TEST_CASE("pi enclosure") {
  Interval p = pi_interval();
  CHECK(p.contains(static_cast<double>(3.14159265358979323846264338327950288L)));
  CHECK(p.lo() < p.hi());
  CHECK(p.width() <= 2 * ulp_of(3.141592653589793));
}
