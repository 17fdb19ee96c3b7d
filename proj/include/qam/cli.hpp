#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qam/csv.hpp"
#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/mean.hpp"
#include "qam/neutral.hpp"
#include "qam/scale_family.hpp"
#include "qam/serialization.hpp"
#include "qam/solver.hpp"
#include "qam/verify.hpp"

namespace qam {

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Generator load_generator(const std::string& inline_json,
                                const std::string& file) {
  if (!inline_json.empty() && !file.empty()) {
    throw InputError("--generator and --generator-file are mutually exclusive");
  }
  if (!inline_json.empty()) return parse_generator(inline_json);
  if (!file.empty()) return parse_generator(slurp(file));
  throw InputError("a generator is required: --generator or --generator-file");
}

inline Branch parse_branch(const std::string& name) {
  if (name == "positive") return Branch::positive;
  if (name == "negative") return Branch::negative;
  throw InputError("branch must be \"positive\" or \"negative\", got \"" +
                   name + "\"");
}

inline ScaleFamily select_branch(std::vector<ScaleFamily> families,
                                 Branch want) {
  for (auto& fam : families) {
    if (fam.family_case() == FamilyCase::translation || fam.branch() == want) {
      return std::move(fam);
    }
  }
  throw DomainError("the requested sign branch is empty for this family");
}

struct FamilyFlags {
  std::string family_json;
  std::string family_file;
  std::string generator_json;
  std::string generator_file;
  double a = 0.0;
  double b = 0.0;
  bool has_a = false;
  bool has_b = false;
  std::string branch = "positive";

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family_json, "family as inline JSON");
    cmd->add_option("--family-file", family_file, "path to a family JSON file");
    cmd->add_option("--generator", generator_json, "generator as inline JSON");
    cmd->add_option("--generator-file", generator_file,
                    "path to a generator JSON file");
    cmd->add_option("--a", a, "neutral map coefficient a")
        ->each([this](const std::string&) { has_a = true; });
    cmd->add_option("--b", b, "neutral map coefficient b")
        ->each([this](const std::string&) { has_b = true; });
    cmd->add_option("--branch", branch,
                    "sign branch for the scaling shape (positive|negative)");
  }

  ScaleFamily build() const {
    if (!family_json.empty() || !family_file.empty()) {
      if (!family_json.empty() && !family_file.empty()) {
        throw InputError("--family and --family-file are mutually exclusive");
      }
      const std::string text =
          family_json.empty() ? slurp(family_file) : family_json;
      return parse_family(text);
    }
    if (!has_a || !has_b) {
      throw InputError(
          "a family is required: --family/--family-file, or a generator "
          "plus --a and --b");
    }
    const Generator g = load_generator(generator_json, generator_file);
    const auto n = NeutralMap::from_coeffs(g, a, b);
    return select_branch(ScaleFamily::build(g, n), parse_branch(branch));
  }
};

inline std::vector<double> parse_beta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const std::string t = trim(field);
    double beta = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), beta);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw InputError("cannot parse beta value \"" + field + "\"");
    }
    out.push_back(beta);
  }
  return out;
}

}  // namespace detail

/// Dispatches one command line. Output goes to `out`, diagnostics to `err`;
/// the return value is the process exit code: 0 success, 2 input errors,
/// 3 domain or range errors, 4 convergence failures, 5 verification failure.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"quasi-arithmetic means, their invariance maps, and the "
               "one-parameter families those maps generate"};
  app.require_subcommand(0, 1);

  auto* mean_cmd =
      app.add_subcommand("mean", "evaluate a mean on a CSV sample");
  std::string mean_gen, mean_gen_file, mean_sample;
  mean_cmd->add_option("--generator", mean_gen, "generator as inline JSON");
  mean_cmd->add_option("--generator-file", mean_gen_file,
                       "path to a generator JSON file");
  mean_cmd->add_option("--sample", mean_sample, "sample CSV path")->required();

  auto* solve_cmd = app.add_subcommand(
      "solve", "find the family member whose mean hits a target");
  detail::FamilyFlags solve_fam;
  solve_fam.attach(solve_cmd);
  std::string solve_sample;
  double target = 0.0, tol = 1e-9;
  solve_cmd->add_option("--sample", solve_sample, "sample CSV path")->required();
  solve_cmd->add_option("--target", target, "target mean value")->required();
  solve_cmd->add_option("--tol", tol, "relative tolerance on the mean");

  auto* root_cmd = app.add_subcommand(
      "root", "k-th root coefficients of the map x -> a*x + b");
  double root_a = 0.0, root_b = 0.0;
  int root_k = 0;
  root_cmd->add_option("--a", root_a, "coefficient a")->required();
  root_cmd->add_option("--b", root_b, "coefficient b")->required();
  root_cmd->add_option("--k", root_k, "root order")->required();

  auto* sweep_cmd = app.add_subcommand(
      "family-sweep", "tabulate member means over a beta grid as CSV");
  detail::FamilyFlags sweep_fam;
  sweep_fam.attach(sweep_cmd);
  std::string sweep_sample, betas_text, output_path;
  double beta_min = 0.0, beta_max = 0.0;
  int beta_steps = 0;
  sweep_cmd->add_option("--sample", sweep_sample, "sample CSV path")->required();
  sweep_cmd->add_option("--betas", betas_text, "comma-separated beta values");
  auto* opt_min = sweep_cmd->add_option("--beta-min", beta_min, "grid start");
  auto* opt_max = sweep_cmd->add_option("--beta-max", beta_max, "grid end");
  auto* opt_steps =
      sweep_cmd->add_option("--beta-steps", beta_steps, "grid point count");
  sweep_cmd->add_option("--output", output_path,
                        "write the CSV here instead of stdout");

  auto* verify_cmd = app.add_subcommand(
      "verify", "run randomized verification suites, emit a JSON report");
  std::string suite = "all";
  int trials = 200;
  std::uint64_t seed = 42;
  verify_cmd->add_option(
      "--suite", suite,
      "internality|homogeneity|translation|noncomparability|scale|all");
  verify_cmd->add_option("--trials", trials, "trials per checker");
  verify_cmd->add_option("--seed", seed, "random seed")->envname("QAM_SEED");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (mean_cmd->parsed()) {
      const Generator g = detail::load_generator(mean_gen, mean_gen_file);
      const auto s = read_sample_csv_file(mean_sample);
      out << format_number(mean(g, s)) << "\n";
      return 0;
    }
    if (solve_cmd->parsed()) {
      const ScaleFamily fam = solve_fam.build();
      const auto s = read_sample_csv_file(solve_sample);
      const double beta = solve(fam, s, target, tol);
      out << "beta=" << format_number(beta)
          << " mean=" << format_number(fam.mean_at(beta, s).value) << "\n";
      return 0;
    }
    if (root_cmd->parsed()) {
      const auto n =
          NeutralMap::from_coeffs(Generator::identity(), root_a, root_b);
      const auto r = n.kth_root(root_k);
      out << "p=" << format_number(r.a()) << " q=" << format_number(r.b())
          << "\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      const ScaleFamily fam = sweep_fam.build();
      const auto s = read_sample_csv_file(sweep_sample);
      std::vector<double> grid;
      if (!betas_text.empty()) {
        if (*opt_min || *opt_max || *opt_steps) {
          throw InputError("--betas conflicts with --beta-min/max/steps");
        }
        grid = detail::parse_beta_list(betas_text);
      } else {
        if (!*opt_min || !*opt_max || !*opt_steps) {
          throw InputError(
              "a beta grid is required: --betas, or all of "
              "--beta-min/--beta-max/--beta-steps");
        }
        if (beta_steps < 1) throw InputError("--beta-steps must be >= 1");
        if (beta_steps == 1) {
          grid.push_back(beta_min);
        } else {
          for (int i = 0; i < beta_steps; ++i) {
            grid.push_back(beta_min +
                           (beta_max - beta_min) * i / (beta_steps - 1));
          }
        }
      }
      const auto rows = sweep(fam, s, grid);
      if (output_path.empty()) {
        write_sweep_csv(out, rows);
      } else {
        std::ofstream file(output_path);
        if (!file) throw InputError("cannot write to \"" + output_path + "\"");
        write_sweep_csv(file, rows);
      }
      return 0;
    }
    if (verify_cmd->parsed()) {
      const auto report = run_suite(suite, trials, seed);
      out << to_json(report).dump(2) << "\n";
      return report.all_passed ? 0 : 5;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 1;
  }

  out << app.help();
  return 2;
}

}  // namespace qam
