#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qam/serialization.hpp"
#include "qam/verify.hpp"

using qam::Generator;
using qam::Interval;
using qam::NeutralMap;
using qam::ScaleFamily;
using qam::WeightedSample;

namespace {

Generator wavy() { return Generator::sin_perturb(1.0 / (4.0 * std::numbers::pi)); }

}  // namespace

TEST_CASE("internality check passes for ordinary generators") {
  const auto report = qam::check_internality(Generator::ln(), 1000, 13, "ln");
  CHECK(report.passed);
  CHECK(report.failures == 0);
  CHECK(report.trials == 1000);
  CHECK(report.worst_residual <= 1e-12);

  CHECK(qam::check_internality(Generator::exp(), 300, 13).passed);
  CHECK(qam::check_internality(Generator::power(3.0), 300, 13).passed);
  CHECK(qam::check_internality(wavy(), 300, 13).passed);
}

TEST_CASE("exponential mean of (0,1) sits inside the interval") {
  const double m = qam::mean(Generator::exp(), WeightedSample({0.0, 1.0}));
  // ln((1 + e)/2), high-precision value
  CHECK_THAT(m, Catch::Matchers::WithinRel(0.62011450695827752, 1e-12));
  CHECK(m > 0.0);
  CHECK(m < 1.0);
}

TEST_CASE("homogeneity suite passes and pins the documented values") {
  const auto report = qam::check_homogeneity_equivalence(60, 21);
  CHECK(report.passed);
  CHECK(report.failures == 0);
  CHECK(report.worst_residual <= 1e-9);
  REQUIRE_FALSE(report.notes.empty());

  const auto g = Generator::identity(Interval::positive_half_line());
  const auto fam =
      ScaleFamily::build(g, NeutralMap::from_coeffs(g, 2.0, 0.0)).front();
  CHECK_THAT(fam.mean_at(2.0, WeightedSample({2.0, 14.0})).value,
             Catch::Matchers::WithinRel(10.0, 1e-12));
  CHECK_THAT(fam.mean_at(0.0, WeightedSample({6.0, 24.0})).value,
             Catch::Matchers::WithinRel(12.0, 1e-12));
  CHECK_THAT(fam.mean_at(-1.0, WeightedSample({1.0, 1.0 / 3.0})).value,
             Catch::Matchers::WithinRel(0.5, 1e-12));
  CHECK_THAT(fam.mean_at(-1.0, WeightedSample({3.0, 1.0})).value,
             Catch::Matchers::WithinRel(1.5, 1e-12));
}

TEST_CASE("translation suite passes and pins the documented values") {
  const auto report = qam::check_translation_logexp(60, 21);
  CHECK(report.passed);
  CHECK(report.failures == 0);

  const auto g = Generator::identity();
  const auto fam =
      ScaleFamily::build(g, NeutralMap::from_coeffs(g, 1.0, 1.0)).front();
  CHECK_THAT(fam.mean_at(0.0, WeightedSample({11.0, 13.0})).value,
             Catch::Matchers::WithinRel(12.0, 1e-12));
  const double ln2 = std::log(2.0);
  CHECK_THAT(fam.mean_at(1.0, WeightedSample({0.0, std::log(3.0)})).value,
             Catch::Matchers::WithinRel(ln2, 1e-12));
  CHECK_THAT(fam.mean_at(1.0, WeightedSample({1.0, 1.0 + std::log(3.0)})).value,
             Catch::Matchers::WithinRel(1.0 + ln2, 1e-12));
  CHECK(fam.mean_at(-1.0, WeightedSample({0.0, 0.0})).value == 0.0);
}

TEST_CASE("witness search finds both orderings") {
  const auto w = qam::noncomparability_witness(wavy(), 21, 23);
  CHECK(w.margin_above > 1e-6);
  CHECK(w.margin_below > 1e-6);
  CHECK(w.shift_neutral_for_plain);
  CHECK(w.shift_neutral_for_perturbed);
  REQUIRE(w.above.size() == 2);
  REQUIRE(w.below.size() == 2);

  // recompute both margins from the returned samples
  const auto f = Generator::identity();
  CHECK_THAT(qam::mean(f, w.above) - qam::mean(wavy(), w.above),
             Catch::Matchers::WithinRel(w.margin_above, 1e-12));
  CHECK_THAT(qam::mean(wavy(), w.below) - qam::mean(f, w.below),
             Catch::Matchers::WithinRel(w.margin_below, 1e-12));
}

TEST_CASE("witness search fails for a mean equal to the arithmetic mean") {
  // any affine generator gives exactly the arithmetic mean, so no ordering
  // either way can be found
  CHECK_THROWS_AS(qam::noncomparability_witness(Generator::affine(2.0, 1.0), 11),
                  qam::WitnessNotFoundError);
  CHECK_THROWS_AS(qam::noncomparability_witness(wavy(), 1), qam::InputError);
}

TEST_CASE("scale axiom check passes for both canonical families") {
  const auto gp = Generator::identity(Interval::positive_half_line());
  const auto power =
      ScaleFamily::build(gp, NeutralMap::from_coeffs(gp, 2.0, 0.0)).front();
  const auto rp = qam::check_scale_axiom(power, 40, 3, "power");
  CHECK(rp.passed);
  CHECK(rp.failures == 0);

  const auto gt = Generator::identity();
  const auto logexp =
      ScaleFamily::build(gt, NeutralMap::from_coeffs(gt, 1.0, 1.0)).front();
  const auto rt = qam::check_scale_axiom(logexp, 40, 3, "logexp");
  CHECK(rt.passed);

  const auto vacuous = qam::check_scale_axiom(power, 0, 3, "power");
  CHECK(vacuous.passed);
  REQUIRE(vacuous.notes.size() == 1);
  CHECK(vacuous.notes[0].find("vacuous") != std::string::npos);
}

TEST_CASE("suite runner aggregates and is deterministic") {
  const auto once = qam::run_suite("all", 40, 9);
  CHECK(once.all_passed);
  CHECK(once.checks.size() == 9);
  const auto twice = qam::run_suite("all", 40, 9);
  CHECK(qam::to_json(once) == qam::to_json(twice));

  const auto single = qam::run_suite("noncomparability", 40, 9);
  CHECK(single.checks.size() == 1);
  CHECK(single.all_passed);

  CHECK_THROWS_AS(qam::run_suite("bogus", 10, 1), qam::InputError);
  CHECK_THROWS_AS(qam::run_suite("all", 0, 1), qam::InputError);
}

TEST_CASE("suite report serializes with stable fields") {
  const auto report = qam::run_suite("internality", 30, 4);
  const auto j = qam::to_json(report);
  CHECK(j.at("suite") == "internality");
  CHECK(j.at("trials") == 30);
  CHECK(j.at("seed") == 4);
  CHECK(j.at("all_passed") == true);
  REQUIRE(j.at("checks").is_array());
  CHECK(j.at("checks").size() == 4);
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("passed"));
    CHECK(c.contains("failures"));
    CHECK(c.contains("worst_residual"));
  }
}

TEST_CASE("failed checks flip the aggregate flag") {
  qam::SuiteReport r;
  r.suite = "synthetic";
  r.trials = 1;
  r.seed = 0;
  qam::CheckReport ok;
  ok.name = "ok";
  r.checks.push_back(ok);
  qam::CheckReport bad;
  bad.name = "bad";
  bad.passed = false;
  bad.failures = 3;
  r.checks.push_back(bad);
  for (const auto& c : r.checks) r.all_passed = r.all_passed && c.passed;
  CHECK_FALSE(r.all_passed);
}
