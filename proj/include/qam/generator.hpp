#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/interval.hpp"

namespace qam {

enum class Direction { increasing, decreasing };

/// Direction of a composition of monotone maps.
inline Direction operator*(Direction a, Direction b) {
  return a == b ? Direction::increasing : Direction::decreasing;
}

namespace detail {

enum class NodeKind { identity, affine, ln, exp, power, negate, sin_perturb, compose };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double p0 = 0.0;  // affine c1 / power beta / sin_perturb amplitude
  double p1 = 0.0;  // affine c0
  NodePtr outer;    // compose only
  NodePtr inner;    // compose only
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Monotone scalar bisection: finds x with f(x) = y on the open interval
/// `dom`, bracket grown geometrically from an interior seed. Shared
/// 200-iteration budget across growth and bisection.
template <typename F>
double bisect_monotone(F&& f, const Interval& dom, Direction dir, double y,
                       double rel_tol = 1e-12, int max_iter = 200) {
  const double sgn = dir == Direction::increasing ? 1.0 : -1.0;
  const double t = sgn * y;

  double x0;
  if (dom.bounded()) {
    x0 = 0.5 * (dom.lo() + dom.hi());
  } else if (std::isfinite(dom.lo())) {
    x0 = dom.lo() + std::max(1.0, std::abs(dom.lo()));
  } else if (std::isfinite(dom.hi())) {
    x0 = dom.hi() - std::max(1.0, std::abs(dom.hi()));
  } else {
    x0 = 0.0;
  }

  int iter = 0;
  const auto spend = [&]() {
    if (++iter > max_iter) {
      throw ConvergenceError("numeric inverse exceeded " +
                             std::to_string(max_iter) + " iterations");
    }
  };

  double h0 = sgn * f(x0);
  if (h0 == t) return x0;

  double lo = x0, hi = x0, h_lo = h0, h_hi = h0;
  double step = std::max(1.0, std::abs(x0));
  if (h0 < t) {
    // grow right toward dom.hi()
    while (h_hi < t) {
      spend();
      lo = hi;
      h_lo = h_hi;
      hi = std::isinf(dom.hi()) ? hi + step : 0.5 * (hi + dom.hi());
      step *= 2.0;
      h_hi = sgn * f(hi);
    }
  } else {
    while (h_lo > t) {
      spend();
      hi = lo;
      h_hi = h_lo;
      lo = std::isinf(dom.lo()) ? lo - step : 0.5 * (lo + dom.lo());
      step *= 2.0;
      h_lo = sgn * f(lo);
    }
  }

  double mid = 0.5 * (lo + hi);
  while (true) {
    spend();
    mid = 0.5 * (lo + hi);
    const double h = sgn * f(mid);
    if (h == t || hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) return mid;
    if (h < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

}  // namespace detail

/// Expression tree for a continuous, strictly monotone function on an open
/// interval. Immutable and cheap to copy. Domain, range and monotone
/// direction are derived exactly from the node algebra at construction, so
/// evaluation maps the domain onto the range bijectively.
class Generator {
 public:
  static Generator identity(const Interval& dom = Interval::real_line()) {
    return make_primitive(detail::NodeKind::identity, 0.0, 0.0, dom);
  }

  static Generator affine(double c1, double c0,
                          const Interval& dom = Interval::real_line()) {
    if (c1 == 0.0 || !std::isfinite(c1) || !std::isfinite(c0)) {
      throw InputError("affine generator requires finite coefficients and c1 != 0");
    }
    return make_primitive(detail::NodeKind::affine, c1, c0, dom);
  }

  static Generator ln(const Interval& dom = Interval::positive_half_line()) {
    return make_primitive(detail::NodeKind::ln, 0.0, 0.0, dom);
  }

  static Generator exp(const Interval& dom = Interval::real_line()) {
    return make_primitive(detail::NodeKind::exp, 0.0, 0.0, dom);
  }

  static Generator power(double beta,
                         const Interval& dom = Interval::positive_half_line()) {
    if (beta == 0.0 || !std::isfinite(beta)) {
      throw InputError("power generator requires a finite nonzero exponent");
    }
    return make_primitive(detail::NodeKind::power, beta, 0.0, dom);
  }

  static Generator negate(const Interval& dom = Interval::real_line()) {
    return make_primitive(detail::NodeKind::negate, 0.0, 0.0, dom);
  }

  /// x + amplitude*sin(2*pi*x). Strictly increasing for |2*pi*amplitude| < 1;
  /// the one node without a closed-form inverse (inverted by bisection).
  static Generator sin_perturb(double amplitude,
                               const Interval& dom = Interval::real_line()) {
    if (!std::isfinite(amplitude) || amplitude == 0.0 ||
        std::abs(amplitude) * detail::two_pi >= 1.0) {
      throw InputError(
          "sin_perturb amplitude must be nonzero with |amplitude| < 1/(2*pi) "
          "to stay strictly increasing");
    }
    return make_primitive(detail::NodeKind::sin_perturb, amplitude, 0.0, dom);
  }

  /// Composition outer∘inner on the maximal domain
  /// {x in dom(inner) : inner(x) in dom(outer)}.
  static Generator compose(const Generator& outer, const Generator& inner) {
    const auto overlap = inner.range().intersect(outer.domain());
    if (!overlap) {
      throw DomainError("composition has empty domain: inner range " +
                        inner.range().str() + " misses outer domain " +
                        outer.domain().str());
    }
    const auto dom = inner.preimage(*overlap);
    auto node = std::make_shared<detail::Node>();
    node->kind = detail::NodeKind::compose;
    node->outer = outer.node_;
    node->inner = inner.node_;
    const Direction dir = outer.dir_ * inner.dir_;
    return Generator(std::move(node), *dom, range_on(*node, *dom, dir), dir);
  }

  double eval(double x) const {
    if (!dom_.contains(x)) {
      throw DomainError("generator evaluated at x = " + format_number(x) +
                        " outside its domain " + dom_.str());
    }
    return eval_node(*node_, x);
  }

  double operator()(double x) const { return eval(x); }

  /// The unique x with eval(x) = y. Closed form per node; bisection for
  /// sin_perturb.
  double inverse(double y) const {
    if (!range_.contains(y)) {
      throw RangeError("inverse requested at y = " + format_number(y) +
                       " outside the generator range " + range_.str());
    }
    return inverse_node(*node_, y);
  }

  Direction monotonicity() const { return dir_; }
  const Interval& domain() const { return dom_; }
  const Interval& range() const { return range_; }

  /// Evaluation extended to the closure of the domain (limits at open or
  /// infinite endpoints).
  double eval_limit(double x) const { return eval_limit_node(*node_, x); }

  /// Inverse extended to the closure of the range.
  double inverse_limit(double y) const { return inverse_limit_node(*node_, y); }

  /// {x in domain : eval(x) in values}, empty -> nullopt.
  std::optional<Interval> preimage(const Interval& values) const {
    const auto overlap = range_.intersect(values);
    if (!overlap) return std::nullopt;
    const double xa = inverse_limit_node(*node_, overlap->lo());
    const double xb = inverse_limit_node(*node_, overlap->hi());
    return dir_ == Direction::increasing ? Interval(xa, xb) : Interval(xb, xa);
  }

  /// Same expression on a subinterval of the current domain.
  Generator restricted(const Interval& sub) const {
    if (!dom_.contains(sub)) {
      throw DomainError("restriction " + sub.str() +
                        " is not a subinterval of the domain " + dom_.str());
    }
    return Generator(node_, sub, range_on(*node_, sub, dir_), dir_);
  }

  const detail::Node& root_node() const { return *node_; }

 private:
  Generator(detail::NodePtr node, Interval dom, Interval range, Direction dir)
      : node_(std::move(node)), dom_(dom), range_(range), dir_(dir) {}

  static Interval natural_domain(detail::NodeKind kind) {
    using detail::NodeKind;
    if (kind == NodeKind::ln || kind == NodeKind::power) {
      return Interval::positive_half_line();
    }
    return Interval::real_line();
  }

  static Generator make_primitive(detail::NodeKind kind, double p0, double p1,
                                  const Interval& dom) {
    const Interval nat = natural_domain(kind);
    if (!nat.contains(dom)) {
      throw DomainError("domain " + dom.str() +
                        " exceeds the node's natural domain " + nat.str());
    }
    auto node = std::make_shared<detail::Node>();
    node->kind = kind;
    node->p0 = p0;
    node->p1 = p1;
    const Direction dir = node_direction(*node);
    return Generator(node, dom, range_on(*node, dom, dir), dir);
  }

  static Direction node_direction(const detail::Node& n) {
    using detail::NodeKind;
    switch (n.kind) {
      case NodeKind::affine:
      case NodeKind::power:
        return n.p0 > 0 ? Direction::increasing : Direction::decreasing;
      case NodeKind::negate:
        return Direction::decreasing;
      case NodeKind::compose:
        return node_direction(*n.outer) * node_direction(*n.inner);
      default:
        return Direction::increasing;
    }
  }

  static Interval range_on(const detail::Node& n, const Interval& dom,
                           Direction dir) {
    const double a = eval_limit_node(n, dom.lo());
    const double b = eval_limit_node(n, dom.hi());
    return dir == Direction::increasing ? Interval(a, b) : Interval(b, a);
  }

  static double eval_node(const detail::Node& n, double x) {
    using detail::NodeKind;
    switch (n.kind) {
      case NodeKind::identity:
        return x;
      case NodeKind::affine:
        return n.p0 * x + n.p1;
      case NodeKind::ln:
        return std::log(x);
      case NodeKind::exp:
        return std::exp(x);
      case NodeKind::power:
        return std::pow(x, n.p0);
      case NodeKind::negate:
        return -x;
      case NodeKind::sin_perturb:
        return x + n.p0 * std::sin(detail::two_pi * x);
      case NodeKind::compose:
        return eval_node(*n.outer, eval_node(*n.inner, x));
    }
    return 0.0;  // unreachable
  }

  static double eval_limit_node(const detail::Node& n, double x) {
    using detail::NodeKind;
    const double inf = Interval::inf();
    switch (n.kind) {
      case NodeKind::identity:
        return x;
      case NodeKind::affine:
        if (std::isinf(x)) return n.p0 > 0 ? x : -x;
        return n.p0 * x + n.p1;
      case NodeKind::ln:
        if (x == 0.0) return -inf;
        if (std::isinf(x)) return inf;
        return std::log(x);
      case NodeKind::exp:
        if (x == -inf) return 0.0;
        return std::exp(x);  // +inf maps to +inf
      case NodeKind::power:
        if (x == 0.0) return n.p0 > 0 ? 0.0 : inf;
        if (std::isinf(x)) return n.p0 > 0 ? inf : 0.0;
        return std::pow(x, n.p0);
      case NodeKind::negate:
        return -x;
      case NodeKind::sin_perturb:
        if (std::isinf(x)) return x;
        return x + n.p0 * std::sin(detail::two_pi * x);
      case NodeKind::compose:
        return eval_limit_node(*n.outer, eval_limit_node(*n.inner, x));
    }
    return 0.0;  // unreachable
  }

  static double inverse_node(const detail::Node& n, double y) {
    using detail::NodeKind;
    switch (n.kind) {
      case NodeKind::identity:
        return y;
      case NodeKind::affine:
        return (y - n.p1) / n.p0;
      case NodeKind::ln:
        return std::exp(y);
      case NodeKind::exp:
        return std::log(y);
      case NodeKind::power:
        return std::pow(y, 1.0 / n.p0);
      case NodeKind::negate:
        return -y;
      case NodeKind::sin_perturb: {
        // |g(x) - x| <= amplitude, so this bracket always straddles y
        const double pad = std::abs(n.p0) + 1.0;
        return detail::bisect_monotone(
            [&](double x) { return x + n.p0 * std::sin(detail::two_pi * x); },
            Interval(y - pad, y + pad), Direction::increasing, y);
      }
      case NodeKind::compose:
        return inverse_node(*n.inner, inverse_node(*n.outer, y));
    }
    return 0.0;  // unreachable
  }

  static double inverse_limit_node(const detail::Node& n, double y) {
    using detail::NodeKind;
    const double inf = Interval::inf();
    switch (n.kind) {
      case NodeKind::identity:
        return y;
      case NodeKind::affine:
        if (std::isinf(y)) return n.p0 > 0 ? y : -y;
        return (y - n.p1) / n.p0;
      case NodeKind::ln:
        if (y == -inf) return 0.0;
        return std::exp(y);
      case NodeKind::exp:
        if (y == 0.0) return -inf;
        if (std::isinf(y)) return inf;
        return std::log(y);
      case NodeKind::power:
        if (y == 0.0) return n.p0 > 0 ? 0.0 : inf;
        if (std::isinf(y)) return n.p0 > 0 ? inf : 0.0;
        return std::pow(y, 1.0 / n.p0);
      case NodeKind::negate:
        return -y;
      case NodeKind::sin_perturb:
        if (std::isinf(y)) return y;
        return inverse_node(n, y);
      case NodeKind::compose:
        return inverse_limit_node(*n.inner, inverse_limit_node(*n.outer, y));
    }
    return 0.0;  // unreachable
  }

  detail::NodePtr node_;
  Interval dom_;
  Interval range_;
  Direction dir_;
};

/// Bracketed-bisection inverse that uses only forward evaluations: the
/// fallback for nodes without closed forms, and an independent check of the
/// closed-form path. Relative tolerance 1e-12, 200-iteration cap.
inline double numeric_inverse(const Generator& g, double y) {
  if (!g.range().contains(y)) {
    throw RangeError("inverse requested at y = " + format_number(y) +
                     " outside the generator range " + g.range().str());
  }
  return detail::bisect_monotone([&](double x) { return g.eval(x); },
                                 g.domain(), g.monotonicity(), y);
}

struct AffineWitness {
  double a;
  double b;
};

/// Tests whether g2 == a*g1 + b on the common domain, the criterion for two
/// generators defining the same quasi-arithmetic mean. The witness is fitted
/// from the two extreme probes and validated on the rest; probes are evenly
/// spaced in a window of the domain intersection.
inline std::optional<AffineWitness> affine_equivalence(const Generator& g1,
                                                       const Generator& g2,
                                                       int probe_count = 9,
                                                       double tol = 1e-9) {
  if (probe_count < 3) throw InputError("affine equivalence needs >= 3 probes");
  const auto common = g1.domain().intersect(g2.domain());
  if (!common) {
    throw DomainError("generator domains " + g1.domain().str() + " and " +
                      g2.domain().str() + " do not overlap");
  }
  const auto [lo, hi] = sampling_window(*common);
  std::vector<double> xs(static_cast<std::size_t>(probe_count));
  for (int i = 0; i < probe_count; ++i) {
    xs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (probe_count - 1);
  }

  const double u0 = g1.eval(xs.front()), u1 = g1.eval(xs.back());
  const double v0 = g2.eval(xs.front()), v1 = g2.eval(xs.back());
  const double a = (v1 - v0) / (u1 - u0);
  const double b = v0 - a * u0;
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) return std::nullopt;

  for (const double x : xs) {
    const double want = g2.eval(x);
    const double got = a * g1.eval(x) + b;
    if (std::abs(got - want) > tol * std::max(1.0, std::abs(want))) {
      return std::nullopt;
    }
  }
  return AffineWitness{a, b};
}

}  // namespace qam
