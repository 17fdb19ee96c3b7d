// Acceptance checks for the library. Each check prints one PASS/FAIL line;
// the process exits nonzero if any check fails. All tolerances are fixed
// here on purpose -- loosening them is an API change, not a tuning knob.

#include <qam/csv.hpp>
#include <qam/errors.hpp>
#include <qam/generator.hpp>
#include <qam/mean.hpp>
#include <qam/neutral.hpp>
#include <qam/rng.hpp>
#include <qam/scale_family.hpp>
#include <qam/solver.hpp>
#include <qam/verify.hpp>
#include <qam/weighted_sample.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace {

bool close_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

qam::WeightedSample random_sample(qam::Rng& rng, double lo, double hi) {
  const int n = rng.uniform_int(2, 6);
  std::vector<double> v(n), w(n);
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = rng.uniform(lo, hi);
    w[i] = rng.uniform(0.05, 1.0);
    wsum += w[i];
  }
  for (auto& x : w) x /= wsum;
  return qam::WeightedSample(v, w);
}

// Cube roots of affine self-maps: coefficients match the closed form and
// composing the root three times restores the original map.
bool check_cube_root(std::string& detail) {
  const auto id = qam::Generator::identity();
  qam::Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    double a = rng.uniform(0.01, 10.0);
    if (a == 1.0) a = 1.5;
    const double b = rng.uniform(-10.0, 10.0);
    const auto eta = qam::NeutralMap::from_coeffs(id, a, b);
    const auto root = eta.kth_root(3);
    const double p = std::cbrt(a);
    const double q = b / (p * p + p + 1.0);
    if (!close_rel(root.a(), p, 1e-12) || !close_rel(root.b(), q, 1e-12)) {
      detail = "coefficient mismatch at a=" + qam::format_number(a) +
               " b=" + qam::format_number(b);
      return false;
    }
    const auto cubed = root.compose(root).compose(root);
    if (!close_rel(cubed.a(), a, 1e-12) || !close_rel(cubed.b(), b, 1e-12)) {
      detail = "triple composition drifted at a=" + qam::format_number(a);
      return false;
    }
  }
  const auto spot = qam::NeutralMap::from_coeffs(id, 8.0, 7.0).kth_root(3);
  if (!close_rel(spot.a(), 2.0, 1e-12) || !close_rel(spot.b(), 1.0, 1e-12)) {
    detail = "spot value (8, 7) gave (" + qam::format_number(spot.a()) + ", " +
             qam::format_number(spot.b()) + ")";
    return false;
  }
  return true;
}

// Iterated cube roots of x -> 2x flatten toward the identity, and applying
// the i-th root 3^i times literally reproduces the original map.
bool check_root_sequence(std::string& detail) {
  const auto eta =
      qam::NeutralMap::from_coeffs(qam::Generator::identity(), 2.0, 0.0);
  const auto roots = eta.root_sequence(6);

  std::vector<double> grid;
  for (int i = 0; i <= 90; ++i) grid.push_back(1.0 + 0.1 * i);

  double prev_sup = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    double sup = 0.0;
    for (double x : grid) sup = std::max(sup, std::abs(roots[i].apply(x) - x));
    if (!(sup < prev_sup)) {
      detail = "sup distance to identity not strictly decreasing at depth " +
               std::to_string(i + 1);
      return false;
    }
    prev_sup = sup;
  }
  if (!(prev_sup < 0.1)) {
    detail = "depth-6 root still " + qam::format_number(prev_sup) +
             " away from identity";
    return false;
  }

  long reps = 1;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    reps *= 3;
    for (double x : grid) {
      double y = x;
      for (long r = 0; r < reps; ++r) y = roots[i].apply(y);
      if (!close_rel(y, eta.apply(x), 1e-8)) {
        detail = "3^" + std::to_string(i + 1) +
                 "-fold application mismatch at x=" + qam::format_number(x);
        return false;
      }
    }
  }
  return true;
}

// Three canonical maps stay neutral for every member of their family,
// and so does every map in their root sequences.
bool check_member_invariance(std::string& detail) {
  struct Setup {
    qam::Generator g;
    double a, b;
    const char* label;
  };
  const std::vector<Setup> setups = {
      {qam::Generator::identity(), 2.0, 0.0, "doubling"},
      {qam::Generator::identity(), 1.0, 1.0, "unit shift"},
      {qam::Generator::ln(), 1.0, std::log(2.0), "doubling via ln"},
  };
  for (const auto& setup : setups) {
    const auto eta = qam::NeutralMap::from_coeffs(setup.g, setup.a, setup.b);
    std::vector<qam::NeutralMap> maps = {eta};
    for (const auto& r : eta.root_sequence(4)) maps.push_back(r);
    const auto families = qam::ScaleFamily::build(setup.g, eta);
    for (const auto& fam : families) {
      for (int ib = -5; ib <= 5; ++ib) {
        const auto member = fam.generator_at(static_cast<double>(ib));
        for (std::size_t mi = 0; mi < maps.size(); ++mi) {
          const auto rep = qam::is_neutral_for(maps[mi], member, 200, 1e-8,
                                               42 + static_cast<uint64_t>(ib));
          if (!rep.neutral) {
            detail = std::string(setup.label) + ", member beta=" +
                     std::to_string(ib) + ", map #" + std::to_string(mi) +
                     ": worst residual " +
                     qam::format_number(rep.worst_residual);
            return false;
          }
        }
      }
    }
  }
  return true;
}

// For the power and the log-exp family: every interior target is hit by a
// unique index, recovered indices round-trip, and distinct members are not
// affine rescalings of one another.
bool check_scale_axiom(std::string& detail) {
  struct Setup {
    std::vector<qam::ScaleFamily> families;
    double lo, hi;
    const char* label;
  };
  const auto pos = qam::Generator::identity(qam::Interval::positive_half_line());
  const auto line = qam::Generator::identity();
  std::vector<Setup> setups;
  setups.push_back({qam::ScaleFamily::build(
                        pos, qam::NeutralMap::from_coeffs(pos, 2.0, 0.0)),
                    0.1, 10.0, "power"});
  setups.push_back({qam::ScaleFamily::build(
                        line, qam::NeutralMap::from_coeffs(line, 1.0, 1.0)),
                    -5.0, 5.0, "log-exp"});

  for (const auto& setup : setups) {
    for (const auto& family : setup.families) {
      qam::Rng rng(99);
      for (int rep = 0; rep < 3; ++rep) {
        const auto s = random_sample(rng, setup.lo, setup.hi);
        const double span = s.max_value() - s.min_value();
        const double delta = 1e-3 * span;
        for (int k = 0; k < 50; ++k) {
          const double target = s.min_value() + delta +
                                (span - 2.0 * delta) * (k + 0.5) / 50.0;
          const double beta = qam::solve(family, s, target, 1e-9);
          const double got = family.mean_at(beta, s).value;
          if (!close_rel(got, target, 1e-9)) {
            detail = std::string(setup.label) + ": target " +
                     qam::format_number(target) + " solved to mean " +
                     qam::format_number(got);
            return false;
          }
        }
        for (int k = 0; k < 20; ++k) {
          const double beta_star = rng.uniform(-20.0, 20.0);
          const double m = family.mean_at(beta_star, s).value;
          const double beta_hat = qam::solve(family, s, m, 1e-9);
          const double m_hat = family.mean_at(beta_hat, s).value;
          if (!close_rel(beta_hat, beta_star, 1e-6) &&
              !close_rel(m_hat, m, 1e-9)) {
            detail = std::string(setup.label) + ": beta " +
                     qam::format_number(beta_star) + " came back as " +
                     qam::format_number(beta_hat);
            return false;
          }
        }
      }
      const std::vector<double> grid = {-5.0, -2.5, 0.0, 1.0, 2.5, 5.0};
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
          if (qam::affine_equivalence(family.generator_at(grid[i]),
                                      family.generator_at(grid[j]))) {
            detail = std::string(setup.label) + ": members at " +
                     qam::format_number(grid[i]) + " and " +
                     qam::format_number(grid[j]) + " are affine-equivalent";
            return false;
          }
        }
      }
    }
  }
  return true;
}

// The family generated by doubling on the positive reals is exactly the
// power means: pointwise equal and homogeneous.
bool check_power_family(std::string& detail) {
  const auto pos = qam::Generator::identity(qam::Interval::positive_half_line());
  const auto fams = qam::ScaleFamily::build(
      pos, qam::NeutralMap::from_coeffs(pos, 2.0, 0.0));
  if (fams.size() != 1) {
    detail = "expected a single branch on the positive half-line";
    return false;
  }
  const auto& fam = fams.front();
  qam::Rng rng(7);
  const std::vector<double> lambdas = {0.1, 2.0, 7.0};
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_sample(rng, 0.1, 10.0);
    for (int ib = -5; ib <= 5; ++ib) {
      const double beta = static_cast<double>(ib);
      const double via_family = fam.mean_at(beta, s).value;
      const double direct = qam::power_mean(beta, s);
      if (!close_rel(via_family, direct, 1e-9)) {
        detail = "family/power_mean mismatch at beta=" + std::to_string(ib);
        return false;
      }
      for (double lam : lambdas) {
        std::vector<double> scaled = s.values();
        for (auto& x : scaled) x *= lam;
        const qam::WeightedSample sl(scaled, s.weights());
        if (!close_rel(fam.mean_at(beta, sl).value, lam * via_family, 1e-9)) {
          detail = "homogeneity broke at beta=" + std::to_string(ib) +
                   " lambda=" + qam::format_number(lam);
          return false;
        }
      }
    }
  }
  return true;
}

// The family generated by the unit shift on the real line is exactly the
// log-exp means: translative and equal to (1/b) ln(sum w e^{b v}).
bool check_translation_family(std::string& detail) {
  const auto line = qam::Generator::identity();
  const auto fams = qam::ScaleFamily::build(
      line, qam::NeutralMap::from_coeffs(line, 1.0, 1.0));
  if (fams.size() != 1) {
    detail = "expected a single family on the real line";
    return false;
  }
  const auto& fam = fams.front();
  qam::Rng rng(11);
  const std::vector<double> shifts = {-3.0, 1.0, 10.0};
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_sample(rng, -5.0, 5.0);
    for (int ib = -5; ib <= 5; ++ib) {
      const double beta = static_cast<double>(ib);
      const double got = fam.mean_at(beta, s).value;

      double closed;
      if (beta == 0.0) {
        closed = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
          closed += s.weight(i) * s.value(i);
      } else {
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.size(); ++i)
          shift = std::max(shift, beta * s.value(i));
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
          acc += s.weight(i) * std::expm1(beta * s.value(i) - shift);
        closed = (shift + std::log1p(acc)) / beta;
      }
      if (!close_rel(got, closed, 1e-9)) {
        detail = "log-exp closed form mismatch at beta=" + std::to_string(ib);
        return false;
      }
      for (double c : shifts) {
        std::vector<double> moved = s.values();
        for (auto& x : moved) x += c;
        const qam::WeightedSample sc(moved, s.weights());
        if (!close_rel(fam.mean_at(beta, sc).value, got + c, 1e-9)) {
          detail = "translativity broke at beta=" + std::to_string(ib) +
                   " c=" + qam::format_number(c);
          return false;
        }
      }
    }
  }
  return true;
}

// The periodically perturbed identity yields a mean that orders against the
// arithmetic mean both ways, yet both share the unit shift as a neutral map.
bool check_noncomparability(std::string& detail) {
  const auto g = qam::Generator::sin_perturb(1.0 / (4.0 * std::numbers::pi));
  const auto w = qam::noncomparability_witness(g, 21, 42);
  if (!(w.margin_above > 1e-6) || !(w.margin_below > 1e-6)) {
    detail = "margins " + qam::format_number(w.margin_above) + " / " +
             qam::format_number(w.margin_below);
    return false;
  }
  if (!w.shift_neutral_for_plain || !w.shift_neutral_for_perturbed) {
    detail = "unit shift lost neutrality";
    return false;
  }
  return true;
}

// Extreme exponents on values spanning sixteen decades stay finite and land
// within 1e-3 relative of the dominating extreme.
bool check_extreme_exponents(std::string& detail) {
  const std::vector<double> values = {1e-8, 1e-3, 1.0, 1e3, 1e8};
  const qam::WeightedSample top(values, {0.025, 0.025, 0.025, 0.025, 0.9});
  const qam::WeightedSample bottom(values, {0.9, 0.025, 0.025, 0.025, 0.025});

  const double hi = qam::power_mean(500.0, top);
  if (!std::isfinite(hi)) {
    detail = "beta=500 overflowed";
    return false;
  }
  if (std::abs(hi - 1e8) > 1e-3 * 1e8) {
    detail = "beta=500 gave " + qam::format_number(hi);
    return false;
  }
  const double lo = qam::power_mean(-500.0, bottom);
  if (!std::isfinite(lo)) {
    detail = "beta=-500 overflowed";
    return false;
  }
  if (std::abs(lo - 1e-8) > 1e-3 * 1e-8) {
    detail = "beta=-500 gave " + qam::format_number(lo);
    return false;
  }
  return true;
}

// The three documented failure modes raise their dedicated exception types.
bool check_error_paths(std::string& detail) {
  const auto id = qam::Generator::identity();

  bool threw = false;
  try {
    qam::NeutralMap::from_coeffs(id, -2.0, 0.0).kth_root(2);
  } catch (const qam::NoRootError&) {
    threw = true;
  }
  if (!threw) {
    detail = "even root of a negative coefficient did not raise NoRootError";
    return false;
  }

  threw = false;
  try {
    qam::ScaleFamily::build(id, qam::NeutralMap::from_coeffs(id, -1.0, 0.0));
  } catch (const qam::ExcludedInvolutionError&) {
    threw = true;
  }
  if (!threw) {
    detail = "family build with a=-1 did not raise ExcludedInvolutionError";
    return false;
  }

  threw = false;
  const auto pos = qam::Generator::identity(qam::Interval::positive_half_line());
  const auto fam = qam::ScaleFamily::build(
                       pos, qam::NeutralMap::from_coeffs(pos, 2.0, 0.0))
                       .front();
  const qam::WeightedSample s({1.0, 2.0, 4.0});
  try {
    qam::solve(fam, s, 4.0);
  } catch (const qam::TargetOutOfRangeError&) {
    threw = true;
  }
  if (!threw) {
    detail = "target at max value did not raise TargetOutOfRangeError";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Check {
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Check> checks = {
      {"cube-root coefficients and triple composition", check_cube_root},
      {"root sequence flattens toward the identity", check_root_sequence},
      {"canonical maps neutral for every family member",
       check_member_invariance},
      {"families hit, and round-trip, interior targets", check_scale_axiom},
      {"doubling family equals the power means", check_power_family},
      {"shift family equals the log-exp means", check_translation_family},
      {"perturbed mean not comparable to the arithmetic mean",
       check_noncomparability},
      {"extreme exponents stay finite near the extremes",
       check_extreme_exponents},
      {"failure modes raise their dedicated exceptions", check_error_paths},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = checks[i].fn(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << (i + 1) << "/"
              << checks.size() << "] " << checks[i].name;
    if (!ok && !detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " of " << checks.size() << " checks failed\n";
    return 1;
  }
  std::cout << "all " << checks.size() << " checks passed\n";
  return 0;
}
