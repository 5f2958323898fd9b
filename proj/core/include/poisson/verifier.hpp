#pragma once

// The identity suite. Every check reduces an identity to one scalar defect
// (left side minus right side) and a gate; a report passes iff
// |defect| <= gate, except for the non-diffusion search whose gate is
// inverted (a counterexample must be exhibited).
//
// Expectation identities are evaluated as E[lhs(η) − rhs(η)] over one pass of
// the backend, so Monte Carlo defects are paired per sample.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "poisson/backend.hpp"
#include "poisson/exact.hpp"
#include "poisson/functionals.hpp"
#include "poisson/ground.hpp"
#include "poisson/registry.hpp"

namespace poisson {

enum class IdentityId {
  mecke,
  duality,
  skorokhod,
  commutation,
  product_formula,
  energy_derivation,
  gamma_representation,
  gamma_form_bound,
  bracket_expectation,
  chain_rule,
  non_diffusion,
};

std::string_view to_string(IdentityId id) noexcept;
IdentityId identity_from_string(std::string_view name);
bool is_pointwise(IdentityId id) noexcept;

struct Gates {
  // exact backend: |defect| <= exact_abs + error_bound
  double exact_abs = 1e-10;
  // Monte Carlo: |defect| <= mc_z · std_error + mc_abs
  double mc_z = 4.0;
  // round-off floor for integrands that vanish identically
  double mc_abs = 1e-12;
  // pointwise checks: |defect| <= pointwise · max(1, |lhs|, |rhs|)
  double pointwise = 1e-12;
  // non-diffusion search: |defect| > non_diffusion_factor · exact_abs
  double non_diffusion_factor = 10.0;
};

struct VerificationReport {
  IdentityId identity = IdentityId::mecke;
  // "exact", "mc" or "pointwise"
  std::string backend;
  nlohmann::json bindings = nlohmann::json::object();
  nlohmann::json space;
  std::string gate_rule;
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;
  double gate = 0.0;
  bool pass = false;
  // error_bound (exact) or std_error (mc) of the defect
  double uncertainty = 0.0;
  std::optional<std::uint64_t> seed;
  std::size_t n = 0;
  std::optional<double> tail_bound;
  std::optional<double> boundary_leak;
  std::optional<double> wall_time;
  std::string reason;
};

nlohmann::json to_json(const VerificationReport& r);

// Bindings for one identity; which members are required depends on the id.
struct Bindings {
  std::optional<Functional> F;
  std::optional<Functional> G;
  std::optional<Functional> Phi;
  std::optional<RandomField> u;
  std::optional<RandomField> v;
  std::optional<registry::SmoothMap> phi;
  std::size_t budget = 0;
};

struct IdentityCase {
  IdentityId id = IdentityId::mecke;
  Bindings bindings;
  nlohmann::json description = nlohmann::json::object();
};

// Parses {"identity": ..., bindings...} for a space of n sites. Throws
// ConfigError naming `path` on bad keys or bindings that do not type-check
// (e.g. an unbounded F for an identity that needs a bounded one).
IdentityCase case_from_json(const nlohmann::json& j, std::size_t n, const std::string& path);

// Expectation identities.
VerificationReport mecke_check(const RandomField& u, const Backend& backend, const Gates& gates);
VerificationReport duality_check(const Functional& F, const RandomField& u, const Backend& backend,
                                 const Gates& gates);
VerificationReport skorokhod_check(const RandomField& u, const Backend& backend, const Gates& gates);
VerificationReport energy_derivation_check(const Functional& F, const Functional& G,
                                           const RandomField& u, const Backend& backend,
                                           const Gates& gates);
VerificationReport gamma_representation_check(const Functional& F, const Functional& Phi,
                                              const Backend& backend, const Gates& gates);
// 0 <= 𝓔(F,FΦ) − ½𝓔(F²,Φ) <= sup|Φ|·𝓔(F,F); Φ must be certified bounded and
// non-negative.
VerificationReport gamma_form_bound_check(const Functional& F, const Functional& Phi,
                                          const Backend& backend, const Gates& gates);
VerificationReport bracket_expectation_check(const RandomField& u, const RandomField& v,
                                             const Backend& backend, const Gates& gates);
// 𝓔(φ(F), G) − E φ'(F)·[DF, DG]_Γ.
VerificationReport chain_rule_check(registry::SmoothMap phi, const Functional& F,
                                    const Functional& G, const Backend& backend,
                                    const Gates& gates);

// Pointwise identities over the probe configurations and every site.
VerificationReport commutation_check(const RandomField& u, const GroundSpace& space,
                                     const std::vector<Configuration>& probes, const Gates& gates);
VerificationReport product_formula_check(const Functional& F, const RandomField& u,
                                         const GroundSpace& space,
                                         const std::vector<Configuration>& probes,
                                         const Gates& gates);

// Searches φ ∈ {square, tanh} and F, G linear counts over non-empty site sets
// (at most `budget` candidates) for the largest chain-rule defect. Passes iff
// that defect exceeds non_diffusion_factor · exact_abs.
VerificationReport non_diffusion_counterexample(const ExactBackend& backend, std::size_t budget,
                                                const Gates& gates);

// Dispatches one parsed case against a backend (or the probes for pointwise
// identities). Backend errors become failed reports with a reason.
VerificationReport run_case(const IdentityCase& c, const Backend& backend, const Gates& gates);
VerificationReport run_pointwise_case(const IdentityCase& c, const GroundSpace& space,
                                      const std::vector<Configuration>& probes,
                                      std::uint64_t probe_seed, const Gates& gates);

}  // namespace poisson
