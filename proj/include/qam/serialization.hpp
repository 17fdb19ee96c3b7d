#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "qam/errors.hpp"
#include "qam/generator.hpp"
#include "qam/interval.hpp"
#include "qam/neutral.hpp"
#include "qam/scale_family.hpp"
#include "qam/verify.hpp"

namespace qam {

using json = nlohmann::json;

namespace detail {

inline json endpoint_to_json(double e) {
  if (e == Interval::inf()) return "inf";
  if (e == -Interval::inf()) return "-inf";
  return e;
}

inline double endpoint_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return Interval::inf();
    if (s == "-inf") return -Interval::inf();
    throw InputError("interval endpoint string must be \"inf\" or \"-inf\", got \"" +
                     s + "\"");
  }
  throw InputError("interval endpoint must be a number or an infinity string");
}

inline json node_to_json(const Node& n) {
  switch (n.kind) {
    case NodeKind::identity:
      return {{"op", "identity"}};
    case NodeKind::affine:
      return {{"op", "affine"}, {"c1", n.p0}, {"c0", n.p1}};
    case NodeKind::ln:
      return {{"op", "ln"}};
    case NodeKind::exp:
      return {{"op", "exp"}};
    case NodeKind::power:
      return {{"op", "power"}, {"beta", n.p0}};
    case NodeKind::negate:
      return {{"op", "negate"}};
    case NodeKind::sin_perturb:
      return {{"op", "sin_perturb"}, {"amplitude", n.p0}};
    case NodeKind::compose:
      return {{"op", "compose"},
              {"outer", node_to_json(*n.outer)},
              {"inner", node_to_json(*n.inner)}};
  }
  throw InputError("unknown node kind");
}

inline double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InputError(std::string("generator node needs a numeric \"") + key +
                     "\" field");
  }
  return j.at(key).get<double>();
}

inline Generator node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) {
    throw InputError("generator node must be an object with an \"op\" string");
  }
  const auto op = j.at("op").get<std::string>();
  if (op == "identity") return Generator::identity();
  if (op == "affine") {
    const double c1 = require_number(j, "c1");
    const double c0 = require_number(j, "c0");
    if (c1 == 0.0) throw InputError("affine node with c1 = 0 is not invertible");
    return Generator::affine(c1, c0);
  }
  if (op == "ln") return Generator::ln();
  if (op == "exp") return Generator::exp();
  if (op == "power") {
    const double beta = require_number(j, "beta");
    if (beta == 0.0) throw InputError("power node with beta = 0 is not invertible");
    return Generator::power(beta);
  }
  if (op == "negate") return Generator::negate();
  if (op == "sin_perturb") {
    return Generator::sin_perturb(require_number(j, "amplitude"));
  }
  if (op == "compose") {
    if (!j.contains("outer") || !j.contains("inner")) {
      throw InputError("compose node needs \"outer\" and \"inner\" children");
    }
    return Generator::compose(node_from_json(j.at("outer")),
                              node_from_json(j.at("inner")));
  }
  throw InputError("unknown generator op \"" + op + "\"");
}

}  // namespace detail

/// Expression tree as JSON; a "domain" field is added only when the domain is
/// narrower than the maximal one the bare tree would get.
inline json to_json(const Generator& g) {
  json j = detail::node_to_json(g.root_node());
  const Generator natural = detail::node_from_json(j);
  if (g.domain().lo() != natural.domain().lo() ||
      g.domain().hi() != natural.domain().hi()) {
    j["domain"] = {detail::endpoint_to_json(g.domain().lo()),
                   detail::endpoint_to_json(g.domain().hi())};
  }
  return j;
}

inline Generator generator_from_json(const json& j) {
  Generator g = detail::node_from_json(j);
  if (j.is_object() && j.contains("domain")) {
    const auto& d = j.at("domain");
    if (!d.is_array() || d.size() != 2) {
      throw InputError("\"domain\" must be a [lo, hi] pair");
    }
    const Interval sub(detail::endpoint_from_json(d[0]),
                       detail::endpoint_from_json(d[1]));
    g = g.restricted(sub);
  }
  return g;
}

inline Generator parse_generator(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("generator JSON does not parse: ") + e.what());
  }
  return generator_from_json(j);
}

inline json to_json(const ScaleFamily& fam) {
  json j = {
      {"case",
       fam.family_case() == FamilyCase::scaling ? "scaling" : "translation"},
      {"generator", to_json(fam.generator())},
      {"a", fam.a()},
      {"b", fam.b()},
  };
  if (fam.family_case() == FamilyCase::scaling) {
    j["branch"] = fam.branch() == Branch::positive ? "positive" : "negative";
  }
  return j;
}

inline ScaleFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("case") || !j.contains("generator") ||
      !j.contains("a") || !j.contains("b")) {
    throw InputError(
        "family JSON needs \"case\", \"generator\", \"a\" and \"b\" fields");
  }
  const auto family_case = j.at("case").get<std::string>();
  if (family_case != "scaling" && family_case != "translation") {
    throw InputError("family case must be \"scaling\" or \"translation\", got \"" +
                     family_case + "\"");
  }
  const Generator g = generator_from_json(j.at("generator"));
  const double a = detail::require_number(j, "a");
  const double b = detail::require_number(j, "b");
  const auto n = NeutralMap::from_coeffs(g, a, b);
  const auto families = ScaleFamily::build(g, n);

  Branch branch = Branch::positive;
  if (j.contains("branch")) {
    const auto name = j.at("branch").get<std::string>();
    if (name == "positive") {
      branch = Branch::positive;
    } else if (name == "negative") {
      branch = Branch::negative;
    } else {
      throw InputError("branch must be \"positive\" or \"negative\", got \"" +
                       name + "\"");
    }
  }
  for (const auto& fam : families) {
    const bool case_matches =
        (family_case == "scaling") == (fam.family_case() == FamilyCase::scaling);
    if (case_matches &&
        (fam.family_case() == FamilyCase::translation || fam.branch() == branch)) {
      return fam;
    }
  }
  throw DomainError("no family with the requested case/branch exists for "
                    "these coefficients");
}

inline ScaleFamily parse_family(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("family JSON does not parse: ") + e.what());
  }
  return family_from_json(j);
}

inline json to_json(const CheckReport& r) {
  return {{"name", r.name},           {"passed", r.passed},
          {"trials", r.trials},       {"failures", r.failures},
          {"worst_residual", r.worst_residual}, {"notes", r.notes}};
}

inline json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite},
          {"trials", r.trials},
          {"seed", r.seed},
          {"all_passed", r.all_passed},
          {"checks", std::move(checks)}};
}

}  // namespace qam
