#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/generator.hpp"
#include "qam/mean.hpp"
#include "qam/neutral.hpp"
#include "qam/weighted_sample.hpp"

namespace qam {

enum class FamilyCase { scaling, translation };
enum class Branch { positive, negative };
enum class ExtremeLimit { none, at_min, at_max };

/// mean_at result. limit is set (with value pinned to the matching sample
/// extreme) when |beta| exceeds 1e6 and the mean is indistinguishable from
/// the limit at working precision.
struct MeanResult {
  double value;
  ExtremeLimit limit = ExtremeLimit::none;
};

/// One-parameter family of generators, indexed by beta, whose means are
/// exactly the ones that commute with a given neutral map and all its roots.
/// Two shapes exist: a == 1 gives the translation family {exp(beta*f)} with f
/// itself at beta = 0; a != 1 gives, per sign branch of the shifted
/// generator, the scaling family {(+-shifted)^beta} with ln(+-shifted) at
/// beta = 0.
class ScaleFamily {
 public:
  /// One family for the translation shape, one per nonempty sign branch of
  /// the shifted generator otherwise (positive branch first).
  static std::vector<ScaleFamily> build(const Generator& g, const NeutralMap& n) {
    const auto [a, b] = n.rebased_coeffs(g);
    if (a == -1.0) {
      throw ExcludedInvolutionError(
          "a = -1 composes with itself to the identity; such maps are outside "
          "the standing assumptions and generate no family");
    }
    if (a == 1.0) {
      // b != 0 is guaranteed: (1, 0) cannot be a NeutralMap
      return {ScaleFamily(FamilyCase::translation, g, a, b, Branch::positive,
                          g, g.domain())};
    }
    if (a < 0.0) {
      throw NoRootError(
          "a = " + format_number(a) +
          " < 0 admits no even-order roots, so the root-complete family does "
          "not exist");
    }

    const double shift = b / (a - 1.0);
    const Generator shifted =
        shift == 0.0 ? g : Generator::compose(Generator::affine(1.0, shift), g);

    std::vector<ScaleFamily> out;
    if (const auto pos = shifted.preimage(Interval::positive_half_line())) {
      out.push_back(ScaleFamily(FamilyCase::scaling, g, a, b, Branch::positive,
                                shifted, *pos));
    }
    if (const auto neg =
            shifted.preimage(Interval(-Interval::inf(), 0.0))) {
      out.push_back(ScaleFamily(FamilyCase::scaling, g, a, b, Branch::negative,
                                shifted, *neg));
    }
    return out;
  }

  /// The member generator. beta = 0 is the logarithmic member (scaling) or
  /// the original generator (translation); composition automatically narrows
  /// the domain to this family's branch.
  Generator generator_at(double beta) const {
    if (!std::isfinite(beta)) throw InputError("beta must be finite");
    if (case_ == FamilyCase::translation) {
      if (beta == 0.0) return f_;
      return Generator::compose(
          Generator::exp(),
          Generator::compose(Generator::affine(beta, 0.0), f_));
    }
    const Generator inner =
        branch_ == Branch::positive
            ? base_
            : Generator::compose(Generator::negate(), base_);
    if (beta == 0.0) return Generator::compose(Generator::ln(), inner);
    return Generator::compose(Generator::power(beta), inner);
  }

  /// Mean of the member at beta, computed through the log domain so large
  /// |beta| cannot overflow.
  MeanResult mean_at(double beta, const WeightedSample& s) const {
    if (!std::isfinite(beta)) throw InputError("beta must be finite");
    for (const double v : s.values()) {
      if (!dom_.contains(v)) {
        throw DomainError("sample value " + format_number(v) +
                          " outside the branch domain " + dom_.str());
      }
    }
    if (std::abs(beta) > 1e6) {
      const bool toward_max =
          (beta > 0.0) == (inner_direction() == Direction::increasing);
      return {toward_max ? s.max_value() : s.min_value(),
              toward_max ? ExtremeLimit::at_max : ExtremeLimit::at_min};
    }
    if (s.is_constant()) return {s.value(0), ExtremeLimit::none};

    if (case_ == FamilyCase::translation) {
      if (beta == 0.0) return {mean(f_, s), ExtremeLimit::none};
      return {translation_mean(beta, s), ExtremeLimit::none};
    }
    return {scaling_mean(beta, s), ExtremeLimit::none};
  }

  FamilyCase family_case() const { return case_; }
  Branch branch() const { return branch_; }
  const Generator& generator() const { return f_; }
  const Generator& base() const { return base_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const Interval& domain() const { return dom_; }

 private:
  ScaleFamily(FamilyCase c, Generator f, double a, double b, Branch branch,
              Generator base, Interval dom)
      : case_(c),
        f_(std::move(f)),
        a_(a),
        b_(b),
        branch_(branch),
        base_(std::move(base)),
        dom_(dom) {}

  /// Direction of the positive quantity fed to the power/exp member: the
  /// shifted generator (negated on the negative branch), or f itself for the
  /// translation shape. Decides which sample extreme large beta approaches.
  Direction inner_direction() const {
    if (case_ == FamilyCase::translation) return f_.monotonicity();
    const Direction base_dir = base_.monotonicity();
    return branch_ == Branch::positive
               ? base_dir
               : base_dir * Direction::decreasing;
  }

  double translation_mean(double beta, const WeightedSample& s) const {
    std::vector<double> t(s.size());
    double t_min = Interval::inf(), t_max = -Interval::inf();
    for (std::size_t i = 0; i < s.size(); ++i) {
      t[i] = f_.eval(s.value(i));
      if (!std::isfinite(t[i])) {
        throw OverflowError("generator value overflows at sample point " +
                            format_number(s.value(i)));
      }
      t_min = std::min(t_min, t[i]);
      t_max = std::max(t_max, t[i]);
    }
    const double shift = beta > 0.0 ? beta * t_max : beta * t_min;
    // see power_mean: expm1/log1p keep accuracy uniform in beta
    double acc_m1 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc_m1 += s.weight(i) * std::expm1(beta * t[i] - shift);
    }
    const double pulled =
        std::clamp((shift + std::log1p(acc_m1)) / beta, t_min, t_max);
    const double m = f_.inverse(pulled);
    return std::clamp(m, s.min_value(), s.max_value());
  }

  double scaling_mean(double beta, const WeightedSample& s) const {
    const double sign = branch_ == Branch::positive ? 1.0 : -1.0;
    std::vector<double> u(s.size());
    double u_min = Interval::inf(), u_max = -Interval::inf();
    for (std::size_t i = 0; i < s.size(); ++i) {
      u[i] = sign * base_.eval(s.value(i));
      if (!std::isfinite(u[i]) || u[i] <= 0.0) {
        throw OverflowError(
            "shifted generator left the branch at sample point " +
            format_number(s.value(i)));
      }
      u_min = std::min(u_min, u[i]);
      u_max = std::max(u_max, u[i]);
    }
    const double m_u = power_mean(beta, WeightedSample(u, s.weights()));
    const double pulled = sign * std::clamp(m_u, u_min, u_max);
    const double m = base_.inverse(pulled);
    return std::clamp(m, s.min_value(), s.max_value());
  }

  FamilyCase case_;
  Generator f_;
  double a_;
  double b_;
  Branch branch_;
  Generator base_;
  Interval dom_;
};

}  // namespace qam
