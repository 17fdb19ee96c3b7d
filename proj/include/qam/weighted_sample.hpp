#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"

namespace qam {

/// Values with positive weights summing to one. Weight sums within 1e-9 of
/// one are normalized; anything further off is rejected rather than silently
/// rescaled.
class WeightedSample {
 public:
  WeightedSample(std::vector<double> values, std::vector<double> weights)
      : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.empty()) throw InputError("sample needs at least one value");
    if (weights_.size() != values_.size()) {
      throw InputError("sample has " + std::to_string(values_.size()) +
                       " values but " + std::to_string(weights_.size()) +
                       " weights");
    }
    double total = 0.0;
    for (const double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw InputError("weights must be positive and finite, got " +
                         format_number(w));
      }
      total += w;
    }
    for (const double v : values_) {
      if (!std::isfinite(v)) {
        throw InputError("values must be finite, got " + format_number(v));
      }
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw InputError("weights sum to " + format_number(total) +
                       ", expected 1 within 1e-9");
    }
    if (total != 1.0) {
      for (double& w : weights_) w /= total;
    }
    const auto [mn, mx] = std::minmax_element(values_.begin(), values_.end());
    min_ = *mn;
    max_ = *mx;
  }

  /// Uniform weights 1/n.
  explicit WeightedSample(std::vector<double> values)
      : WeightedSample(values,
                       std::vector<double>(values.size(),
                                           1.0 / static_cast<double>(
                                                     std::max<std::size_t>(
                                                         values.size(), 1)))) {}

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  double value(std::size_t i) const { return values_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  double min_value() const { return min_; }
  double max_value() const { return max_; }

  bool is_constant() const {
    return !(max_ - min_ > 1e-12 * std::max(1.0, std::abs(max_)));
  }

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace qam
