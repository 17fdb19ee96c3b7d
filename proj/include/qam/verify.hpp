#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/generator.hpp"
#include "qam/mean.hpp"
#include "qam/neutral.hpp"
#include "qam/rng.hpp"
#include "qam/scale_family.hpp"
#include "qam/solver.hpp"
#include "qam/weighted_sample.hpp"

namespace qam {

/// One checker's outcome. Failures are content, not exceptions, so a whole
/// verification table can be emitted in one run.
struct CheckReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_residual = 0.0;
  bool passed = true;
  std::vector<std::string> notes;
};

namespace detail {

inline double rel_residual(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline void record(CheckReport& report, double residual, double tol) {
  report.worst_residual = std::max(report.worst_residual, residual);
  if (residual > tol) {
    ++report.failures;
    report.passed = false;
  }
}

inline WeightedSample random_sample(Rng& rng, double lo, double hi,
                                    int min_size = 2, int max_size = 6) {
  const int n = rng.uniform_int(min_size, max_size);
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    v[j] = rng.uniform(lo, hi);
    w[j] = rng.uniform(0.05, 1.0);
    total += w[j];
  }
  for (double& x : w) x /= total;
  return WeightedSample(std::move(v), std::move(w));
}

}  // namespace detail

/// Strict internality on random samples: the mean stays inside
/// (min v, max v), and equals the value for constant samples. Every tenth
/// trial uses a constant sample to cover that edge.
inline CheckReport check_internality(const Generator& g, int trials,
                                     uint64_t seed,
                                     const std::string& label = "generator") {
  if (trials < 1) throw InputError("trials must be >= 1");
  CheckReport report;
  report.name = "internality(" + label + ")";
  report.trials = trials;
  const auto [lo, hi] = sampling_window(g.domain());
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    if (trial % 10 == 9) {
      const double x = rng.uniform(lo, hi);
      const WeightedSample s({x, x, x});
      detail::record(report, detail::rel_residual(mean(g, s), x), 1e-12);
      continue;
    }
    const auto s = detail::random_sample(rng, lo, hi);
    if (s.is_constant()) continue;
    const double m = mean(g, s);
    if (!(m > s.min_value() && m < s.max_value())) {
      ++report.failures;
      report.passed = false;
      report.notes.push_back("mean " + format_number(m) + " escaped (" +
                             format_number(s.min_value()) + ", " +
                             format_number(s.max_value()) + ")");
    }
  }
  return report;
}

/// The doubling-invariant family on the positive half line is the power
/// means: members are homogeneous and agree with power_mean pointwise. A
/// generator outside the family must fail homogeneity somewhere, which a
/// small grid search exhibits.
inline CheckReport check_homogeneity_equivalence(int trials, uint64_t seed) {
  if (trials < 1) throw InputError("trials must be >= 1");
  CheckReport report;
  report.name = "homogeneity-equivalence";
  report.trials = trials;
  const auto g = Generator::identity(Interval::positive_half_line());
  const auto fam =
      ScaleFamily::build(g, NeutralMap::from_coeffs(g, 2.0, 0.0)).front();

  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto s = detail::random_sample(rng, 0.1, 10.0);
    for (int beta = -5; beta <= 5; ++beta) {
      const double m = fam.mean_at(static_cast<double>(beta), s).value;
      detail::record(
          report,
          detail::rel_residual(m, power_mean(static_cast<double>(beta), s)),
          1e-9);
      for (const double lam : {0.1, 2.0, 7.0}) {
        std::vector<double> scaled(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) scaled[i] = lam * s.value(i);
        const double m_scaled =
            fam.mean_at(static_cast<double>(beta),
                        WeightedSample(std::move(scaled), s.weights()))
                .value;
        detail::record(report, detail::rel_residual(m_scaled, lam * m), 1e-9);
      }
    }
  }

  // non-member counterpoint: the perturbed identity must break homogeneity
  const auto wavy = Generator::sin_perturb(1.0 / (4.0 * std::numbers::pi));
  double worst_violation = 0.0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const double x = 0.1 + 0.09 * i;
      const double y = 0.1 + 0.09 * j;
      if (x == y) continue;
      const WeightedSample s({x, y});
      const double m = mean(wavy, s);
      for (const double lam : {0.1, 2.0, 7.0}) {
        const double m_scaled = mean(wavy, WeightedSample({lam * x, lam * y}));
        worst_violation = std::max(
            worst_violation, detail::rel_residual(m_scaled, lam * m));
      }
    }
  }
  if (worst_violation <= 1e-3) {
    report.passed = false;
    ++report.failures;
    report.notes.push_back(
        "perturbed generator looked homogeneous (worst deviation " +
        format_number(worst_violation) + "), which contradicts non-membership");
  } else {
    report.notes.push_back("non-member homogeneity deviation " +
                           format_number(worst_violation));
  }
  return report;
}

/// The unit-shift-invariant family on the line is the log-exp means: members
/// are translative and match (1/beta) * ln(sum w * exp(beta v)).
inline CheckReport check_translation_logexp(int trials, uint64_t seed) {
  if (trials < 1) throw InputError("trials must be >= 1");
  CheckReport report;
  report.name = "translation-logexp";
  report.trials = trials;
  const auto g = Generator::identity();
  const auto fam =
      ScaleFamily::build(g, NeutralMap::from_coeffs(g, 1.0, 1.0)).front();

  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto s = detail::random_sample(rng, -5.0, 5.0);
    for (int beta = -5; beta <= 5; ++beta) {
      const double b = static_cast<double>(beta);
      const double m = fam.mean_at(b, s).value;

      double closed;
      if (beta == 0) {
        closed = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          closed += s.weight(i) * s.value(i);
        }
      } else {
        double shift = -Interval::inf();
        for (const double v : s.values()) shift = std::max(shift, b * v);
        double acc_m1 = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          acc_m1 += s.weight(i) * std::expm1(b * s.value(i) - shift);
        }
        closed = (shift + std::log1p(acc_m1)) / b;
      }
      detail::record(report, detail::rel_residual(m, closed), 1e-9);

      for (const double c : {-3.0, 1.0, 10.0}) {
        std::vector<double> moved(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) moved[i] = s.value(i) + c;
        const double m_moved =
            fam.mean_at(b, WeightedSample(std::move(moved), s.weights())).value;
        detail::record(report, detail::rel_residual(m_moved, m + c), 1e-9);
      }
    }
  }
  return report;
}

/// Two-point samples on which the plain arithmetic mean and the mean of a
/// periodically perturbed generator order one way and then the other. Both
/// means still share the unit shift as a neutral map.
struct NoncomparabilityWitness {
  WeightedSample above;   // arithmetic mean larger here
  double margin_above;
  WeightedSample below;   // arithmetic mean smaller here
  double margin_below;
  bool shift_neutral_for_plain;
  bool shift_neutral_for_perturbed;
};

inline NoncomparabilityWitness noncomparability_witness(const Generator& g,
                                                        int grid_size = 21,
                                                        uint64_t seed = 42) {
  if (grid_size < 2) throw InputError("grid size must be >= 2");
  const auto f = Generator::identity();

  double best_above = 0.0, best_below = 0.0;
  std::vector<double> above_v, below_v;
  double above_w = 0.5, below_w = 0.5;
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      const double x = static_cast<double>(i) / (grid_size - 1);
      const double y = static_cast<double>(j) / (grid_size - 1);
      if (x == y) continue;
      for (int wi = 1; wi <= 9; ++wi) {
        const double w = 0.1 * wi;
        const WeightedSample s({x, y}, {w, 1.0 - w});
        const double diff = mean(f, s) - mean(g, s);
        if (diff > best_above) {
          best_above = diff;
          above_v = {x, y};
          above_w = w;
        }
        if (-diff > best_below) {
          best_below = -diff;
          below_v = {x, y};
          below_w = w;
        }
      }
    }
  }
  if (best_above <= 1e-6 || best_below <= 1e-6) {
    throw WitnessNotFoundError(
        "grid search found no two-point samples ordering the two means both "
        "ways (margins " +
        format_number(best_above) + ", " + format_number(best_below) + ")");
  }

  const auto shift_f = NeutralMap::from_coeffs(f, 1.0, 1.0);
  const auto shift_g = NeutralMap::from_coeffs(g, 1.0, 1.0);
  return NoncomparabilityWitness{
      WeightedSample(above_v, {above_w, 1.0 - above_w}),
      best_above,
      WeightedSample(below_v, {below_w, 1.0 - below_w}),
      best_below,
      is_neutral_for(shift_f, f, 200, 1e-8, seed).neutral,
      is_neutral_for(shift_g, g, 200, 1e-8, seed).neutral,
  };
}

/// Surjectivity onto the open sample interval, solver round trips, and
/// pairwise member non-equivalence. trials < 1 passes vacuously with a
/// warning note.
inline CheckReport check_scale_axiom(const ScaleFamily& fam, int trials,
                                     uint64_t seed,
                                     const std::string& label = "family") {
  CheckReport report;
  report.name = "scale-axiom(" + label + ")";
  report.trials = trials;
  if (trials < 1) {
    report.notes.push_back("vacuous pass: no trials requested");
    return report;
  }
  const auto [lo, hi] = sampling_window(fam.domain());
  Rng rng(seed);

  const int rounds = std::max(3, trials / 25);
  for (int round = 0; round < rounds; ++round) {
    const auto s = detail::random_sample(rng, lo, hi, 2, 5);
    if (s.is_constant()) continue;
    const double span = s.max_value() - s.min_value();
    const double t_lo = s.min_value() + 1e-3 * span;
    const double t_hi = s.max_value() - 1e-3 * span;
    for (int i = 0; i < 50; ++i) {
      const double target = t_lo + (t_hi - t_lo) * i / 49.0;
      try {
        const double beta = solve(fam, s, target);
        detail::record(
            report,
            detail::rel_residual(fam.mean_at(beta, s).value, target), 1e-9);
      } catch (const Error& e) {
        ++report.failures;
        report.passed = false;
        report.notes.push_back("target " + format_number(target) +
                               " failed: " + e.what());
      }
    }
  }

  for (int trial = 0; trial < trials; ++trial) {
    const double beta_star = rng.uniform(-20.0, 20.0);
    const auto s = detail::random_sample(rng, lo, hi, 2, 5);
    if (s.is_constant()) continue;
    const double target = fam.mean_at(beta_star, s).value;
    if (!(target > s.min_value() && target < s.max_value())) continue;
    try {
      const double beta = solve(fam, s, target);
      if (std::abs(beta - beta_star) > 1e-6) {
        detail::record(
            report,
            detail::rel_residual(fam.mean_at(beta, s).value, target), 1e-9);
      }
    } catch (const Error& e) {
      ++report.failures;
      report.passed = false;
      report.notes.push_back("round trip at beta = " +
                             format_number(beta_star) + " failed: " + e.what());
    }
  }

  const std::vector<double> grid = {-5.0, -2.5, 0.0, 1.0, 2.5, 5.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      if (affine_equivalence(fam.generator_at(grid[i]),
                             fam.generator_at(grid[j]))
              .has_value()) {
        ++report.failures;
        report.passed = false;
        report.notes.push_back("members at beta " + format_number(grid[i]) +
                               " and " + format_number(grid[j]) +
                               " are affine-equivalent");
      }
    }
  }
  return report;
}

struct SuiteReport {
  std::string suite;
  int trials = 0;
  uint64_t seed = 0;
  std::vector<CheckReport> checks;
  bool all_passed = true;
};

/// Named suites: internality, homogeneity, translation, noncomparability,
/// scale, or all of them in that order. Deterministic given (trials, seed).
inline SuiteReport run_suite(const std::string& suite, int trials = 200,
                             uint64_t seed = 42) {
  if (trials < 1) throw InputError("trials must be >= 1");
  SuiteReport out;
  out.suite = suite;
  out.trials = trials;
  out.seed = seed;
  const bool all = suite == "all";

  if (all || suite == "internality") {
    out.checks.push_back(check_internality(Generator::ln(), trials, seed, "ln"));
    out.checks.push_back(
        check_internality(Generator::power(3.0), trials, seed, "cube"));
    out.checks.push_back(
        check_internality(Generator::exp(), trials, seed, "exp"));
    out.checks.push_back(check_internality(
        Generator::sin_perturb(1.0 / (4.0 * std::numbers::pi)), trials, seed,
        "perturbed"));
  }
  if (all || suite == "homogeneity") {
    out.checks.push_back(check_homogeneity_equivalence(trials, seed));
  }
  if (all || suite == "translation") {
    out.checks.push_back(check_translation_logexp(trials, seed));
  }
  if (all || suite == "noncomparability") {
    CheckReport report;
    report.name = "noncomparability-witness";
    report.trials = 1;
    try {
      const auto w = noncomparability_witness(
          Generator::sin_perturb(1.0 / (4.0 * std::numbers::pi)), 21, seed);
      report.notes.push_back(
          "plain mean larger at values (" + format_number(w.above.value(0)) +
          ", " + format_number(w.above.value(1)) + "), weight " +
          format_number(w.above.weight(0)) + ", margin " +
          format_number(w.margin_above));
      report.notes.push_back(
          "plain mean smaller at values (" + format_number(w.below.value(0)) +
          ", " + format_number(w.below.value(1)) + "), weight " +
          format_number(w.below.weight(0)) + ", margin " +
          format_number(w.margin_below));
      if (!w.shift_neutral_for_plain || !w.shift_neutral_for_perturbed) {
        report.passed = false;
        ++report.failures;
        report.notes.push_back("unit shift unexpectedly not neutral");
      }
    } catch (const WitnessNotFoundError& e) {
      report.passed = false;
      ++report.failures;
      report.notes.push_back(e.what());
    }
    out.checks.push_back(std::move(report));
  }
  if (all || suite == "scale") {
    const auto gp = Generator::identity(Interval::positive_half_line());
    const auto power =
        ScaleFamily::build(gp, NeutralMap::from_coeffs(gp, 2.0, 0.0)).front();
    out.checks.push_back(check_scale_axiom(power, trials, seed, "power"));
    const auto gt = Generator::identity();
    const auto logexp =
        ScaleFamily::build(gt, NeutralMap::from_coeffs(gt, 1.0, 1.0)).front();
    out.checks.push_back(check_scale_axiom(logexp, trials, seed, "logexp"));
  }
  if (out.checks.empty()) {
    throw InputError(
        "unknown suite \"" + suite +
        "\"; expected internality, homogeneity, translation, "
        "noncomparability, scale, or all");
  }
  for (const auto& c : out.checks) out.all_passed = out.all_passed && c.passed;
  return out;
}

}  // namespace qam
