#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/generator.hpp"
#include "qam/weighted_sample.hpp"

namespace qam {

/// Weighted quasi-arithmetic mean: inverse(g, sum of w_i * g(v_i)). Always in
/// [min v, max v]. No stability transform here; the generator is an arbitrary
/// tree, so there is nothing algebraic to exploit (power_mean and the family
/// evaluators handle the overflow-prone shapes).
inline double mean(const Generator& g, const WeightedSample& s) {
  for (const double v : s.values()) {
    if (!g.domain().contains(v)) {
      throw DomainError("sample value " + format_number(v) +
                        " outside the generator domain " + g.domain().str());
    }
  }
  if (s.is_constant()) return s.value(0);

  double acc = 0.0;
  double t_min = Interval::inf();
  double t_max = -Interval::inf();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = g.eval(s.value(i));
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
    acc += s.weight(i) * t;
  }
  if (!std::isfinite(acc) || !std::isfinite(t_min) || !std::isfinite(t_max)) {
    throw OverflowError(
        "generator values overflow during accumulation; evaluate through a "
        "stable family member (power_mean or mean_at) instead");
  }
  // rounding can push the accumulator a hair past the extreme transformed
  // values, which would land outside the range on restricted domains
  acc = std::clamp(acc, t_min, t_max);
  const double m = g.inverse(acc);
  return std::clamp(m, s.min_value(), s.max_value());
}

/// Power mean (beta = 0 meaning the geometric mean), computed in the log
/// domain so |beta * ln v| up to about 1e4 cannot overflow: the accumulator
/// is shifted by the largest beta * ln v before exponentiation.
inline double power_mean(double beta, const WeightedSample& s) {
  for (const double v : s.values()) {
    if (!(v > 0.0)) {
      throw DomainError("power mean needs positive values, got " +
                        format_number(v));
    }
  }
  if (s.is_constant()) return s.value(0);

  if (beta == 0.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc += s.weight(i) * std::log(s.value(i));
    }
    return std::clamp(std::exp(acc), s.min_value(), s.max_value());
  }

  double t_shift = -Interval::inf();
  std::vector<double> t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    t[i] = beta * std::log(s.value(i));
    t_shift = std::max(t_shift, t[i]);
  }
  // expm1/log1p keep the accumulated logarithm accurate to machine epsilon
  // even for tiny |beta|, where log(sum w*exp(x)) alone would lose eps/|beta|
  double acc_m1 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc_m1 += s.weight(i) * std::expm1(t[i] - t_shift);
  }
  const double m = std::exp((t_shift + std::log1p(acc_m1)) / beta);
  return std::clamp(m, s.min_value(), s.max_value());
}

}  // namespace qam
