// pcalc: command line front end for the Poisson-space identity suite.
//
//   pcalc verify   --config <path> [--backend exact|mc|both] [--seed N]
//                  [--samples N] [--workers N] [--report <path>] [--timing]
//   pcalc sample   --config <path> --count N [--seed N]
//   pcalc estimate --functional <name> --params <json> [--config <path>]
//                  [--backend mc|exact] [--seed N] [--samples N] [--workers N]

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "poisson/config.hpp"
#include "poisson/errors.hpp"
#include "poisson/exact.hpp"
#include "poisson/monte_carlo.hpp"
#include "poisson/registry.hpp"

namespace {

using nlohmann::json;
using namespace poisson;

int run_verify(const std::string& config_path, const std::optional<std::string>& backend,
               const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& samples,
               const std::optional<unsigned>& workers, const std::optional<std::string>& report_path,
               bool timing) {
  SuiteConfig cfg = load_suite_config(config_path);
  if (backend) cfg.backend = backend_selection_from_string(*backend);
  if (seed) cfg.mc.seed = *seed;
  if (samples) {
    if (*samples < 2) throw ConfigError("--samples must be >= 2");
    cfg.mc.samples = *samples;
  }
  if (workers) cfg.mc.workers = cfg.exact_workers = std::max(1u, *workers);
  cfg.timing = cfg.timing || timing;

  const auto reports = run_suite(cfg);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    if (!r.pass) ++failed;
    std::cerr << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(21) << to_string(r.identity)
              << std::setw(10) << r.backend << " defect=" << std::setw(13) << std::setprecision(4)
              << r.defect << " gate=" << r.gate;
    if (!r.reason.empty()) std::cerr << "  (" << r.reason << ")";
    std::cerr << '\n';
  }
  std::cerr << reports.size() - failed << "/" << reports.size() << " checks passed\n";

  const std::string out = serialize_reports(reports, cfg.timing);
  if (report_path) {
    std::ofstream f(*report_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write report to " + *report_path);
    f << out;
  } else {
    std::cout << out;
  }
  return failed == 0 ? 0 : 1;
}

int run_sample(const std::string& config_path, std::size_t count,
               const std::optional<std::uint64_t>& seed) {
  const SuiteConfig cfg = load_suite_config(config_path);
  const auto configs = sample_configurations(cfg.space, seed.value_or(cfg.mc.seed), count);
  for (const auto& eta : configs) std::cout << json(eta).dump() << '\n';
  return 0;
}

int run_estimate(const std::string& name, const std::string& params_text,
                 const std::optional<std::string>& config_path, const std::string& backend,
                 const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& samples,
                 const std::optional<unsigned>& workers) {
  SuiteConfig cfg;
  if (config_path) cfg = load_suite_config(*config_path);
  json spec;
  try {
    spec = params_text.empty() ? json::object() : json::parse(params_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("--params: ") + e.what());
  }
  if (!spec.is_object()) throw ConfigError("--params: expected a JSON object");
  spec["name"] = name;
  const Functional F = registry::functional_from_json(spec, cfg.space.size(), "--params");

  if (backend == "exact") {
    const StateTable table = build_state_table(cfg.space, cfg.truncation_tol, cfg.truncation_budget);
    const ExactValue v = exact_expectation(F, table, workers.value_or(cfg.exact_workers));
    std::cout << json{{"value", v.value},
                      {"error_bound", v.error_bound},
                      {"certified", v.certified},
                      {"state_count", table.size()},
                      {"tail_bound", table.tail_bound()}}
                     .dump()
              << '\n';
    return 0;
  }
  if (backend != "mc") throw ConfigError("--backend must be mc or exact");
  SamplerConfig sc = cfg.mc;
  if (seed) sc.seed = *seed;
  if (samples) sc.samples = *samples;
  if (workers) sc.workers = *workers;
  const Estimate e = mc_expectation(F, cfg.space, sc);
  std::cout << json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}}.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Malliavin calculus identities on a finite Poisson space"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> backend;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<unsigned> workers;
  std::optional<std::string> report_path;
  bool timing = false;

  auto* verify = app.add_subcommand("verify", "Run the identity suite and write a JSON report");
  verify->add_option("--config", config_path, "Suite config (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--backend", backend, "exact, mc or both")
      ->check(CLI::IsMember({"exact", "mc", "both"}));
  verify->add_option("--seed", seed, "Monte Carlo seed");
  verify->add_option("--samples", samples, "Monte Carlo sample count");
  verify->add_option("--workers", workers, "Worker threads");
  verify->add_option("--report", report_path, "Write the report here instead of stdout");
  verify->add_flag("--timing", timing, "Include wall times in the report");

  std::size_t count = 0;
  auto* sample = app.add_subcommand("sample", "Emit sampled configurations as JSON lines");
  sample->add_option("--config", config_path, "Suite config (JSON)")->required()->check(CLI::ExistingFile);
  sample->add_option("--count", count, "Number of configurations")->required();
  sample->add_option("--seed", seed, "Sampler seed (defaults to mc.seed)");

  std::string functional;
  std::string params;
  std::optional<std::string> estimate_config;
  std::string estimate_backend = "mc";
  auto* estimate = app.add_subcommand("estimate", "Estimate E[F] for a registry functional");
  estimate->add_option("--functional", functional, "Registry functional name")->required();
  estimate->add_option("--params", params, "Functional parameters as a JSON object");
  estimate->add_option("--config", estimate_config, "Suite config for space, mc and truncation")
      ->check(CLI::ExistingFile);
  estimate->add_option("--backend", estimate_backend, "mc (default) or exact")
      ->check(CLI::IsMember({"mc", "exact"}));
  estimate->add_option("--seed", seed, "Monte Carlo seed");
  estimate->add_option("--samples", samples, "Monte Carlo sample count");
  estimate->add_option("--workers", workers, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      return run_verify(config_path, backend, seed, samples, workers, report_path, timing);
    }
    if (*sample) return run_sample(config_path, count, seed);
    if (*estimate) {
      return run_estimate(functional, params, estimate_config, estimate_backend, seed, samples,
                          workers);
    }
  } catch (const poisson::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
