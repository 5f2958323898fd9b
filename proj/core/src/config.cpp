#include "poisson/config.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "poisson/errors.hpp"
#include "poisson/exact.hpp"

namespace poisson {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(path + "." + key + ": unknown key");
  }
}

double get_number(const json& j, const char* key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

std::uint64_t get_unsigned(const json& j, const char* key, const std::string& path,
                           std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(path + "." + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

BackendSelection backend_selection_from_string(const std::string& name) {
  if (name == "exact") return BackendSelection::exact;
  if (name == "mc") return BackendSelection::mc;
  if (name == "both") return BackendSelection::both;
  throw ConfigError("backend must be exact, mc or both (got \"" + name + "\")");
}

SuiteConfig suite_config_from_json(const json& j) {
  check_keys(j, "config",
             {"space", "random_spaces", "truncation", "mc", "gates", "probes", "backend", "cases",
              "timing"});
  SuiteConfig cfg;
  if (!j.contains("space")) throw ConfigError("config.space: missing");
  try {
    cfg.space = space_from_json(j.at("space"));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config.") + e.what());
  }

  if (j.contains("random_spaces")) {
    const json& r = j.at("random_spaces");
    const std::string p = "config.random_spaces";
    check_keys(r, p, {"count", "seed", "min_weight", "max_weight"});
    cfg.random_space_count = get_unsigned(r, "count", p, 0);
    cfg.random_space_seed = get_unsigned(r, "seed", p, cfg.random_space_seed);
    cfg.random_min_weight = get_number(r, "min_weight", p, cfg.random_min_weight);
    cfg.random_max_weight = get_number(r, "max_weight", p, cfg.random_max_weight);
    if (!(cfg.random_min_weight > 0.0) || !(cfg.random_max_weight >= cfg.random_min_weight)) {
      throw ConfigError(p + ": need 0 < min_weight <= max_weight");
    }
  }

  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    const std::string p = "config.truncation";
    check_keys(t, p, {"tol", "budget", "workers"});
    cfg.truncation_tol = get_number(t, "tol", p, cfg.truncation_tol);
    cfg.truncation_budget = get_unsigned(t, "budget", p, cfg.truncation_budget);
    cfg.exact_workers = static_cast<unsigned>(get_unsigned(t, "workers", p, cfg.exact_workers));
    if (!(cfg.truncation_tol > 0.0 && cfg.truncation_tol < 1.0)) {
      throw ConfigError(p + ".tol: must be in (0, 1)");
    }
    if (cfg.truncation_budget < 1) throw ConfigError(p + ".budget: must be >= 1");
  }

  if (j.contains("mc")) {
    const json& m = j.at("mc");
    const std::string p = "config.mc";
    check_keys(m, p, {"seed", "samples", "workers"});
    cfg.mc.seed = get_unsigned(m, "seed", p, cfg.mc.seed);
    cfg.mc.samples = get_unsigned(m, "samples", p, cfg.mc.samples);
    cfg.mc.workers = static_cast<unsigned>(get_unsigned(m, "workers", p, cfg.mc.workers));
    if (cfg.mc.samples < 2) throw ConfigError(p + ".samples: must be >= 2");
    if (cfg.mc.workers < 1) throw ConfigError(p + ".workers: must be >= 1");
  }

  if (j.contains("gates")) {
    const json& g = j.at("gates");
    const std::string p = "config.gates";
    check_keys(g, p, {"exact_abs", "mc_z", "mc_abs", "pointwise", "non_diffusion_factor"});
    cfg.gates.exact_abs = get_number(g, "exact_abs", p, cfg.gates.exact_abs);
    cfg.gates.mc_z = get_number(g, "mc_z", p, cfg.gates.mc_z);
    cfg.gates.mc_abs = get_number(g, "mc_abs", p, cfg.gates.mc_abs);
    cfg.gates.pointwise = get_number(g, "pointwise", p, cfg.gates.pointwise);
    cfg.gates.non_diffusion_factor =
        get_number(g, "non_diffusion_factor", p, cfg.gates.non_diffusion_factor);
    if (!(cfg.gates.exact_abs >= 0.0) || !(cfg.gates.mc_z > 0.0) || !(cfg.gates.mc_abs >= 0.0) ||
        !(cfg.gates.pointwise >= 0.0)) {
      throw ConfigError(p + ": gates must be non-negative (mc_z positive)");
    }
  }

  if (j.contains("probes")) {
    const json& pr = j.at("probes");
    const std::string p = "config.probes";
    check_keys(pr, p, {"count", "seed"});
    cfg.probe_count = get_unsigned(pr, "count", p, cfg.probe_count);
    cfg.probe_seed = get_unsigned(pr, "seed", p, cfg.probe_seed);
  }

  if (j.contains("backend")) {
    if (!j.at("backend").is_string()) throw ConfigError("config.backend: expected a string");
    try {
      cfg.backend = backend_selection_from_string(j.at("backend").get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config.backend: ") + e.what());
    }
  }

  if (j.contains("timing")) {
    if (!j.at("timing").is_boolean()) throw ConfigError("config.timing: expected a boolean");
    cfg.timing = j.at("timing").get<bool>();
  }

  if (!j.contains("cases") || !j.at("cases").is_array()) {
    throw ConfigError("config.cases: expected an array of identity cases");
  }
  cfg.cases = j.at("cases");
  for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
    case_from_json(cfg.cases[i], cfg.space.size(), "config.cases[" + std::to_string(i) + "]");
  }
  return cfg;
}

SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return suite_config_from_json(j);
}

std::vector<GroundSpace> suite_spaces(const SuiteConfig& cfg) {
  std::vector<GroundSpace> spaces{cfg.space};
  std::mt19937_64 rng(cfg.random_space_seed);
  std::uniform_real_distribution<double> weight(cfg.random_min_weight, cfg.random_max_weight);
  for (std::size_t s = 0; s < cfg.random_space_count; ++s) {
    std::vector<double> w(cfg.space.size());
    for (double& x : w) x = weight(rng);
    spaces.emplace_back(std::move(w));
  }
  return spaces;
}

std::vector<VerificationReport> run_suite(const SuiteConfig& cfg) {
  const bool want_exact = cfg.backend != BackendSelection::mc;
  const bool want_mc = cfg.backend != BackendSelection::exact;

  std::vector<IdentityCase> cases;
  for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
    cases.push_back(
        case_from_json(cfg.cases[i], cfg.space.size(), "config.cases[" + std::to_string(i) + "]"));
  }

  std::vector<VerificationReport> reports;
  for (const GroundSpace& space : suite_spaces(cfg)) {
    std::unique_ptr<ExactBackend> exact;
    std::string exact_error;
    if (want_exact) {
      try {
        exact = std::make_unique<ExactBackend>(
            build_state_table(space, cfg.truncation_tol, cfg.truncation_budget), cfg.exact_workers);
      } catch (const Error& e) {
        exact_error = e.what();
      }
    }
    const MonteCarloBackend mc(space, cfg.mc);
    const std::vector<Configuration> probes =
        sample_configurations(space, cfg.probe_seed, cfg.probe_count);

    for (const IdentityCase& c : cases) {
      if (is_pointwise(c.id)) {
        reports.push_back(run_pointwise_case(c, space, probes, cfg.probe_seed, cfg.gates));
        continue;
      }
      if (want_exact) {
        if (exact) {
          reports.push_back(run_case(c, *exact, cfg.gates));
        } else {
          VerificationReport r;
          r.identity = c.id;
          r.backend = "exact";
          r.space = space;
          r.bindings = c.description;
          r.bindings.erase("identity");
          r.defect = std::numeric_limits<double>::quiet_NaN();
          r.reason = exact_error;
          reports.push_back(std::move(r));
        }
      }
      if (want_mc && c.id != IdentityId::non_diffusion) {
        reports.push_back(run_case(c, mc, cfg.gates));
      }
    }
  }
  return reports;
}

std::string serialize_reports(const std::vector<VerificationReport>& reports, bool timing) {
  json arr = json::array();
  for (const auto& r : reports) {
    json j = to_json(r);
    if (!timing) j["wall_time"] = nullptr;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace poisson
