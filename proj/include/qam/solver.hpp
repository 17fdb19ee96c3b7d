#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/scale_family.hpp"
#include "qam/weighted_sample.hpp"

namespace qam {

/// Inverts beta -> mean_at(fam, beta, s): finds the member whose mean equals
/// `target`. Well-posed because the map is a strictly monotone bijection from
/// the index line onto (min v, max v) for non-constant samples. Bracket
/// doubling from [-1, 1] (capped at |beta| = 1e6), then bisection; derivative
/// methods are off the table since members have no dbeta-derivative in the
/// expression algebra.
inline double solve(const ScaleFamily& fam, const WeightedSample& s,
                    double target, double tol = 1e-9) {
  if (!std::isfinite(target)) throw InputError("target must be finite");
  if (s.is_constant()) {
    throw InputError(
        "constant sample: every member mean equals the value, no unique beta");
  }
  if (!(target > s.min_value() && target < s.max_value())) {
    throw TargetOutOfRangeError(
        "target " + format_number(target) + " is not strictly inside (" +
        format_number(s.min_value()) + ", " + format_number(s.max_value()) +
        "), the open interval a scale maps onto");
  }

  const auto phi = [&](double beta) { return fam.mean_at(beta, s).value; };

  double probe = 1.0;
  double at_plus = phi(probe), at_minus = phi(-probe);
  while (at_plus == at_minus && probe < 64.0) {
    probe *= 8.0;
    at_plus = phi(probe);
    at_minus = phi(-probe);
  }
  if (at_plus == at_minus) {
    throw ConvergenceError(
        "member means do not separate on [-64, 64]; cannot orient the search");
  }
  const bool increasing = at_plus > at_minus;
  const double sgn = increasing ? 1.0 : -1.0;
  const double t = sgn * target;

  constexpr double beta_cap = 1e6;
  const auto near_extreme = [&](bool expanding_right) -> NearExtremeError {
    const bool toward_max = expanding_right == increasing;
    return NearExtremeError(
        std::string("no member with |beta| <= 1e6 reaches the target; it is "
                    "too close to the sample ") +
        (toward_max ? "maximum " + format_number(s.max_value())
                    : "minimum " + format_number(s.min_value())));
  };

  double lo = -1.0, hi = 1.0;
  double h_lo = sgn * phi(lo), h_hi = sgn * phi(hi);
  while (h_hi < t) {
    if (hi >= beta_cap) throw near_extreme(true);
    lo = hi;
    h_lo = h_hi;
    hi = std::min(hi * 2.0, beta_cap);
    h_hi = sgn * phi(hi);
  }
  while (h_lo > t) {
    if (lo <= -beta_cap) throw near_extreme(false);
    hi = lo;
    h_hi = h_lo;
    lo = std::max(lo * 2.0, -beta_cap);
    h_lo = sgn * phi(lo);
  }

  const double residual_budget = tol * std::max(1.0, std::abs(target));
  for (int iter = 0; iter < 500; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double m = phi(mid);
    if (std::abs(m - target) <= residual_budget ||
        hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) {
      return mid;
    }
    if (sgn * m < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisection on beta exceeded 500 iterations");
}

/// Member means over a beta grid, in input order.
inline std::vector<std::pair<double, double>> sweep(
    const ScaleFamily& fam, const WeightedSample& s,
    const std::vector<double>& betas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(betas.size());
  for (const double beta : betas) {
    out.emplace_back(beta, fam.mean_at(beta, s).value);
  }
  return out;
}

}  // namespace qam
