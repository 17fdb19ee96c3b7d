#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "qam/errors.hpp"
#include "qam/format.hpp"

namespace qam {

/// Open interval (lo, hi) over the extended reals. Membership is strict;
/// endpoints are never valid arguments.
class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
      throw InputError("interval endpoints must satisfy lo < hi, got (" +
                       format_number(lo) + ", " + format_number(hi) + ")");
    }
  }

  static double inf() { return std::numeric_limits<double>::infinity(); }

  static Interval real_line() { return {-inf(), inf()}; }
  static Interval positive_half_line() { return {0.0, inf()}; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  bool contains(double x) const { return lo_ < x && x < hi_; }

  /// Subinterval test (closure comparison of endpoints).
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  std::optional<Interval> intersect(const Interval& other) const {
    const double lo = std::max(lo_, other.lo_);
    const double hi = std::min(hi_, other.hi_);
    if (!(lo < hi)) return std::nullopt;
    return Interval(lo, hi);
  }

  bool bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }

  std::string str() const {
    return "(" + format_number(lo_) + ", " + format_number(hi_) + ")";
  }

 private:
  double lo_;
  double hi_;
};

/// Closed finite window strictly inside an open interval. Random draws and
/// probe grids use it so endpoint singularities are never touched.
inline std::pair<double, double> sampling_window(const Interval& iv,
                                                 double radius = 10.0) {
  const double lo = iv.lo();
  const double hi = iv.hi();
  const auto margin = [](double e) { return 0.05 * std::max(1.0, std::abs(e)); };
  if (std::isinf(lo) && std::isinf(hi)) return {-radius, radius};
  if (std::isinf(lo)) {
    const double m = margin(hi);
    return {hi - m - 2.0 * radius, hi - m};
  }
  if (std::isinf(hi)) {
    const double m = margin(lo);
    return {lo + m, lo + m + 2.0 * radius};
  }
  const double w = hi - lo;
  return {lo + 0.05 * w, hi - 0.05 * w};
}

/// Pulls a value that mathematically belongs to `iv` but grazed an endpoint
/// through rounding back strictly inside. Values beyond the relative slack
/// are genuine errors and are reported as such.
inline double nudge_into(const Interval& iv, double t, double rel_slack = 1e-9) {
  if (iv.contains(t)) return t;
  if (std::isfinite(iv.lo()) && t <= iv.lo() &&
      iv.lo() - t <= rel_slack * std::max(1.0, std::abs(iv.lo()))) {
    return std::nextafter(iv.lo(), iv.hi());
  }
  if (std::isfinite(iv.hi()) && t >= iv.hi() &&
      t - iv.hi() <= rel_slack * std::max(1.0, std::abs(iv.hi()))) {
    return std::nextafter(iv.hi(), iv.lo());
  }
  throw RangeError("value " + format_number(t) + " lies outside " + iv.str());
}

}  // namespace qam
