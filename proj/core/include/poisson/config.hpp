#pragma once

// Suite configuration and the suite runner.
//
//   {
//     "space":        {"weights": [0.5, 1.0, 1.5]},
//     "random_spaces":{"count": 1, "seed": 7, "min_weight": 0.2, "max_weight": 2.0},
//     "truncation":   {"tol": 1e-12, "budget": 2000000},
//     "mc":           {"seed": 20240611, "samples": 100000, "workers": 1},
//     "gates":        {"exact_abs": 1e-10, "mc_z": 4, "mc_abs": 1e-12, "pointwise": 1e-12,
//                      "non_diffusion_factor": 10},
//     "probes":       {"count": 100, "seed": 99},
//     "backend":      "exact" | "mc" | "both",
//     "cases":        [{"identity": "mecke", "u": {...}}, ...]
//   }

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poisson/ground.hpp"
#include "poisson/monte_carlo.hpp"
#include "poisson/verifier.hpp"

namespace poisson {

enum class BackendSelection { exact, mc, both };

BackendSelection backend_selection_from_string(const std::string& name);

struct SuiteConfig {
  GroundSpace space{std::vector<double>{0.5, 1.0, 1.5}};
  // Extra spaces with the same site count and randomized weights.
  std::size_t random_space_count = 0;
  std::uint64_t random_space_seed = 7;
  double random_min_weight = 0.2;
  double random_max_weight = 2.0;

  double truncation_tol = 1e-12;
  std::size_t truncation_budget = 2'000'000;
  unsigned exact_workers = 1;

  SamplerConfig mc{20240611, 100000, 1};
  Gates gates;
  std::size_t probe_count = 100;
  std::uint64_t probe_seed = 99;
  BackendSelection backend = BackendSelection::exact;
  // Emit per-report wall times; off by default so reports are byte-stable.
  bool timing = false;

  nlohmann::json cases = nlohmann::json::array();
};

// Validates every key and every case binding; errors are ConfigError with the
// offending key path.
SuiteConfig suite_config_from_json(const nlohmann::json& j);
SuiteConfig load_suite_config(const std::string& path);

// All spaces the suite runs on: the configured one first, then the random ones.
std::vector<GroundSpace> suite_spaces(const SuiteConfig& cfg);

std::vector<VerificationReport> run_suite(const SuiteConfig& cfg);

// JSON array of reports, pretty-printed, newline terminated.
std::string serialize_reports(const std::vector<VerificationReport>& reports, bool timing);

}  // namespace poisson
