#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/generator.hpp"
#include "qam/mean.hpp"
#include "qam/rng.hpp"
#include "qam/weighted_sample.hpp"

namespace qam {

/// A map of the form x -> f_inverse(a*f(x) + b) on its maximal domain
/// {x in dom f : a*f(x)+b in range f}. These are exactly the maps that
/// commute with the quasi-arithmetic mean generated by f. The identity
/// (a,b) = (1,0) is excluded by construction.
class NeutralMap {
 public:
  static NeutralMap from_coeffs(const Generator& g, double a, double b) {
    if (a == 0.0) throw InputError("coefficient a must be nonzero");
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw InputError("coefficients must be finite, got a = " +
                       format_number(a) + ", b = " + format_number(b));
    }
    if (a == 1.0 && b == 0.0) {
      throw InputError("(a, b) = (1, 0) is the identity, not a neutral map");
    }
    const Interval& r = g.range();
    // y-values with a*y + b back inside the range
    const double e0 = (r.lo() - b) / a;
    const double e1 = (r.hi() - b) / a;
    const Interval pulled(std::min(e0, e1), std::max(e0, e1));
    const auto usable = pulled.intersect(r);
    if (!usable) {
      throw DomainError("a = " + format_number(a) + ", b = " +
                        format_number(b) + " maps the whole range " + r.str() +
                        " outside itself");
    }
    const auto dom = g.preimage(*usable);
    return NeutralMap(g, a, b, *dom);
  }

  double apply(double x) const {
    if (!dom_.contains(x)) {
      throw DomainError("neutral map applied at x = " + format_number(x) +
                        " outside its domain " + dom_.str());
    }
    const double y = a_ * gen_.eval(x) + b_;
    // endpoint-grazing rounding only; anything further out is a real error
    return gen_.inverse(nudge_into(gen_.range(), y));
  }

  double operator()(double x) const { return apply(x); }

  /// Coefficients of this_map after other_map, relative to this map's
  /// generator. The other map may sit on any affine-equivalent generator;
  /// its coefficients are rebased first.
  NeutralMap compose(const NeutralMap& other) const {
    const auto [a2, b2] = other.rebased_coeffs(gen_);
    return from_coeffs(gen_, a_ * a2, a_ * b2 + b_);
  }

  /// The unique neutral map of the same monotonicity whose k-fold
  /// self-composition is this map. Coefficients: p is the sign-preserving
  /// real k-th root of a, and q = b / (1 + p + ... + p^(k-1)), the geometric
  /// sum form of b*(p-1)/(a-1) that stays exact at a = 1.
  NeutralMap kth_root(int k) const {
    if (k < 1) throw InputError("root order must be >= 1");
    if (a_ < 0.0 && k % 2 == 0) {
      throw NoRootError("a = " + format_number(a_) +
                        " is negative: an even-order root of the same "
                        "monotonicity does not exist");
    }
    double p;
    if (k == 1) {
      p = a_;
    } else if (k == 2) {
      p = std::sqrt(a_);
    } else if (k == 3) {
      p = std::cbrt(a_);
    } else if (a_ > 0.0) {
      p = std::pow(a_, 1.0 / k);
    } else {
      p = -std::pow(-a_, 1.0 / k);
    }
    double series = 0.0;
    double pj = 1.0;
    for (int j = 0; j < k; ++j) {
      series += pj;
      pj *= p;
    }
    return from_coeffs(gen_, p, b_ / series);
  }

  /// Iterated cube roots: entry i satisfies entry_i^(3^(i+1)) = this map.
  /// Coefficients march to (1, 0), so the maps approach the identity.
  std::vector<NeutralMap> root_sequence(int depth) const {
    if (depth < 1 || depth > 12) {
      throw InputError("root sequence depth must be in [1, 12], got " +
                       std::to_string(depth));
    }
    std::vector<NeutralMap> out;
    out.reserve(static_cast<std::size_t>(depth));
    NeutralMap current = *this;
    for (int i = 0; i < depth; ++i) {
      current = current.kth_root(3);
      out.push_back(current);
    }
    return out;
  }

  Direction monotonicity() const {
    return a_ > 0.0 ? Direction::increasing : Direction::decreasing;
  }

  /// For a != 1 the map fixes f_inverse(b/(1-a)) when that point exists.
  std::optional<double> fixed_point() const {
    if (a_ == 1.0) return std::nullopt;
    const double y = b_ / (1.0 - a_);
    if (!gen_.range().contains(y)) return std::nullopt;
    const double x = gen_.inverse(y);
    if (!dom_.contains(x)) return std::nullopt;
    return x;
  }

  const Generator& generator() const { return gen_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const Interval& domain() const { return dom_; }

  /// (a', b') such that x -> g_inverse(a'*g(x) + b') is this same map, for an
  /// affine-equivalent generator g.
  std::pair<double, double> rebased_coeffs(const Generator& g) const {
    const auto w = affine_equivalence(g, gen_);
    if (!w) {
      throw InputError(
          "neutral map belongs to a generator that is not affine-equivalent "
          "to the requested one");
    }
    return {a_, (b_ + w->b * (a_ - 1.0)) / w->a};
  }

 private:
  NeutralMap(Generator g, double a, double b, Interval dom)
      : gen_(std::move(g)), a_(a), b_(b), dom_(dom) {}

  Generator gen_;
  double a_;
  double b_;
  Interval dom_;
};

struct NeutralityReport {
  bool neutral = true;
  double worst_residual = 0.0;
  int samples_checked = 0;
};

/// Randomized check of M_g(eta(v), w) = eta(M_g(v, w)) over seeded samples of
/// sizes 2..6 drawn from the common domain. Samples whose image under eta
/// falls outside dom(g) are skipped (they cannot be tested); if too few
/// usable samples exist the domains are effectively incompatible.
inline NeutralityReport is_neutral_for(const NeutralMap& n, const Generator& g,
                                       int trials = 200, double tol = 1e-8,
                                       uint64_t seed = 42) {
  if (trials < 1) throw InputError("trials must be >= 1");
  const auto common = n.domain().intersect(g.domain());
  if (!common) {
    throw DomainError("neutral map domain " + n.domain().str() +
                      " does not meet the generator domain " +
                      g.domain().str());
  }
  const auto [lo, hi] = sampling_window(*common);
  Rng rng(seed);
  NeutralityReport report;
  int attempts = 0;
  const int attempt_budget = 20 * trials;
  while (report.samples_checked < trials) {
    if (++attempts > attempt_budget) {
      if (report.samples_checked == 0) {
        throw DomainError(
            "no usable samples: the image of the common domain window under "
            "the neutral map misses the generator domain");
      }
      break;
    }
    const int size = rng.uniform_int(2, 6);
    std::vector<double> v(static_cast<std::size_t>(size));
    std::vector<double> mapped(static_cast<std::size_t>(size));
    std::vector<double> w(static_cast<std::size_t>(size));
    double total = 0.0;
    bool usable = true;
    for (int i = 0; i < size; ++i) {
      const auto j = static_cast<std::size_t>(i);
      v[j] = rng.uniform(lo, hi);
      mapped[j] = n.apply(v[j]);
      if (!g.domain().contains(mapped[j])) usable = false;
      w[j] = rng.uniform(0.05, 1.0);
      total += w[j];
    }
    if (!usable) continue;
    for (double& x : w) x /= total;

    const WeightedSample s(v, w);
    const double m = mean(g, s);
    const double lhs = mean(g, WeightedSample(mapped, w));
    const double rhs = n.apply(nudge_into(n.domain(), m));
    const double residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    report.worst_residual = std::max(report.worst_residual, residual);
    if (residual > tol) report.neutral = false;
    ++report.samples_checked;
  }
  return report;
}

}  // namespace qam
