#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ngoncert/interval.hpp"

namespace ngoncert {

/// Rigorous enclosures of the trigonometric constants attached to the apex
/// angle theta = 2*pi/n. `tan_t` is absent when the cosine enclosure touches
/// zero (n = 4).
struct ThetaTrig {
  int n = 0;
  Interval theta;
  Interval sin_t;
  Interval cos_t;
  std::optional<Interval> tan_t;
  Interval tan_half_t;

  const Interval& tan() const {
    if (!tan_t) throw std::domain_error("ThetaTrig: tan undefined (cos encloses 0)");
    return *tan_t;
  }
};

/// Enclosure of pi (1 ulp wide).
Interval pi_interval();

/// Trig record for theta = 2*pi/n; requires n >= 3. Field widths are a few
/// ulp of the midpoint.
ThetaTrig enclose_theta(int n);

/// cos(k*theta) and sin(k*theta) for k = 0..count-1, by angle addition from
/// the base enclosures (widths grow linearly in k).
std::vector<std::array<Interval, 2>> trig_multiples(const ThetaTrig& t, int count);

/// Enclosure of the Bessel function J2 on the interval x (|x| <= 16).
Interval bessel_j2(const Interval& x);
/// Enclosure of J2' on the interval x.
Interval bessel_j2_deriv(const Interval& x);

/// Rigorous enclosure of the first positive zero of J2, width <= 1e-12.
Interval bessel_zero_j21();

/// Enclosure of j21^2 (the fourth Dirichlet eigenvalue of the unit disk).
Interval disk_lambda4();

} // namespace ngoncert
