// Command-line front end: run verification checks from a JSON config, evaluate
// the induced metric at a point, or list the built-in catalog.
//
// Exit codes: 0 all requested checks pass, 1 at least one check fails,
// 2 configuration or construction error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finq/finq.hpp"

namespace {

finq::Vector parse_coords(const std::string& text, const std::string& what) {
  finq::json j;
  try {
    j = finq::json::parse(text);
  } catch (const finq::json::parse_error& e) {
    throw finq::ConfigError(what + ": " + e.what());
  }
  return finq::detail::get_vector(j, what);
}

void print_summary(const finq::VerificationReport& report) {
  for (const finq::CheckRecord& rec : report.checks) {
    std::fprintf(stderr, "check %-16s %s  (max deviation %.3e, tolerance %.1e)\n",
                 finq::check_name(rec.kind).c_str(), rec.pass ? "PASS" : "FAIL",
                 rec.max_deviation, rec.tolerance);
  }
  std::fprintf(stderr, "overall: %s\n", report.overall ? "PASS" : "FAIL");
}

int run_check(const std::string& config_path, const std::optional<std::uint64_t>& seed,
              const std::optional<int>& samples, const std::vector<std::string>& checks,
              const std::string& json_out) {
  finq::RunConfig cfg = finq::load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (samples) {
    if (*samples < 1) throw finq::ConfigError("--samples must be a positive integer");
    cfg.samples = *samples;
  }
  if (!checks.empty()) {
    cfg.checks.clear();
    for (const std::string& name : checks) {
      const finq::CheckKind kind = finq::check_kind(name);
      if (std::find(cfg.checks.begin(), cfg.checks.end(), kind) == cfg.checks.end())
        cfg.checks.push_back(kind);
    }
  }

  const finq::VerificationReport report = finq::run(cfg);
  const std::string text = finq::canonical_dump(finq::report_json(report)) + "\n";
  if (!json_out.empty()) {
    std::ofstream out(json_out, std::ios::binary);
    if (!out) throw finq::ConfigError("cannot write report file: " + json_out);
    out << text;
  } else {
    std::cout << text;
  }
  print_summary(report);
  return report.overall ? 0 : 1;
}

int run_eval(const std::string& config_path, const std::string& base_text,
             const std::string& mu_text) {
  const finq::RunConfig cfg = finq::load_config(config_path);
  const finq::Vector base = parse_coords(base_text, "--base-coords");
  const finq::Vector mu = parse_coords(mu_text, "--mu");
  const double value = finq::eval_point(cfg, base, mu);
  std::printf("%.16g\n", value);
  return 0;
}

int run_catalog() {
  std::printf("groups:\n");
  for (const std::string& name : finq::catalog_group_names()) {
    finq::GroupPtr g = finq::make_catalog_group(name);
    std::printf("  %-12s algebra dim %d, %dx%d matrices%s\n", name.c_str(), g->dim(),
                g->matrix_size(), g->matrix_size(),
                name == "rn" ? " (dim set by group_params.n, default 3)" : "");
    for (const finq::SubgroupDef& sub : finq::named_subgroups(g)) {
      std::printf("    subgroup %-14s basis indices [", sub.name.c_str());
      for (std::size_t i = 0; i < sub.basis_indices.size(); ++i)
        std::printf("%s%d", i ? ", " : "", sub.basis_indices[i]);
      std::printf("]\n");
    }
  }
  std::printf("norms: euclidean, randers, quartic\n");
  std::printf("checks:");
  for (const auto& [name, kind] : finq::check_name_table()) std::printf(" %s", name.c_str());
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant Finsler metrics on matrix Lie groups and their quotients"};
  app.require_subcommand(1);

  std::string config_path, json_out, base_text, mu_text;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::vector<std::string> checks;

  CLI::App* check = app.add_subcommand("check", "run verification checks from a config");
  check->add_option("--config", config_path, "path to a JSON run config")->required();
  check->add_option("--seed", seed, "override the config seed");
  check->add_option("--samples", samples, "override the config sample count");
  check->add_option("--json-out", json_out, "write the report to a file instead of stdout");
  check->add_option("--check", checks, "run only the named check (repeatable)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate the induced metric at one point");
  eval->add_option("--config", config_path, "path to a JSON run config")->required();
  eval->add_option("--base-coords", base_text, "algebra coordinates of the representative")
      ->required();
  eval->add_option("--mu", mu_text, "coordinates in the projected frame")->required();

  CLI::App* catalog = app.add_subcommand("catalog", "list built-in groups, subgroups, norms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(config_path, seed, samples, checks, json_out);
    if (eval->parsed()) return run_eval(config_path, base_text, mu_text);
    if (catalog->parsed()) return run_catalog();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
