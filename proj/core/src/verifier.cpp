#include "poisson/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "poisson/errors.hpp"
#include "poisson/monte_carlo.hpp"
#include "poisson/operators.hpp"

namespace poisson {
namespace {

using nlohmann::json;
using registry::SmoothMap;

constexpr std::pair<IdentityId, std::string_view> kIdentityNames[] = {
    {IdentityId::mecke, "mecke"},
    {IdentityId::duality, "duality"},
    {IdentityId::skorokhod, "skorokhod"},
    {IdentityId::commutation, "commutation"},
    {IdentityId::product_formula, "product_formula"},
    {IdentityId::energy_derivation, "energy_derivation"},
    {IdentityId::gamma_representation, "gamma_representation"},
    {IdentityId::gamma_form_bound, "gamma_form_bound"},
    {IdentityId::bracket_expectation, "bracket_expectation"},
    {IdentityId::chain_rule, "chain_rule"},
    {IdentityId::non_diffusion, "non_diffusion"},
};

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Functional pointwise(std::string name, Functional::Eval eval) {
  return Functional(std::move(name), json::object(), std::move(eval));
}

void stamp_backend(VerificationReport& r, const Backend& backend) {
  r.space = backend.space();
  if (const auto* exact = dynamic_cast<const ExactBackend*>(&backend)) {
    r.backend = "exact";
    r.tail_bound = exact->table().tail_bound();
    r.boundary_leak = exact->table().boundary_leak();
  } else {
    r.backend = "mc";
    if (const auto* mc = dynamic_cast<const MonteCarloBackend*>(&backend)) r.seed = mc->config().seed;
  }
}

double gate_for(const Backend& backend, double uncertainty, const Gates& gates) {
  return backend.kind() == BackendKind::exact ? gates.exact_abs + uncertainty
                                              : gates.mc_z * uncertainty + gates.mc_abs;
}

std::string gate_rule_for(const Backend& backend, const Gates& gates) {
  return backend.kind() == BackendKind::exact
             ? "|defect| <= " + fmt(gates.exact_abs) + " + error_bound"
             : "|defect| <= " + fmt(gates.mc_z) + " * std_error + " + fmt(gates.mc_abs);
}

// E[lhs], E[rhs] and the paired E[lhs − rhs] from one backend pass.
VerificationReport expectation_report(IdentityId id, json bindings, const Functional& lhs,
                                      const Functional& rhs, const Backend& backend,
                                      const Gates& gates) {
  const Functional defect =
      pointwise("defect", [lhs, rhs](const Configuration& eta) { return lhs(eta) - rhs(eta); });
  const std::vector<Functional> fs{lhs, rhs, defect};
  const auto es = backend.expect_all(fs);

  VerificationReport r;
  r.identity = id;
  r.bindings = std::move(bindings);
  stamp_backend(r, backend);
  r.gate_rule = gate_rule_for(backend, gates);
  r.lhs = es[0].value;
  r.rhs = es[1].value;
  r.defect = es[2].value;
  r.uncertainty = es[2].uncertainty;
  r.n = es[2].n;
  r.gate = gate_for(backend, r.uncertainty, gates);
  r.pass = std::abs(r.defect) <= r.gate;
  return r;
}

void require_bounded(const std::optional<Functional>& f, const char* key, const std::string& path) {
  if (f && !f->bounded()) {
    throw ConfigError(path + "." + key +
                      ": this identity needs a bounded functional (certified sup-norm bound)");
  }
}

}  // namespace

std::string_view to_string(IdentityId id) noexcept {
  for (const auto& [k, name] : kIdentityNames) {
    if (k == id) return name;
  }
  return "unknown";
}

IdentityId identity_from_string(std::string_view name) {
  for (const auto& [k, n] : kIdentityNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown identity \"" + std::string(name) + "\"");
}

bool is_pointwise(IdentityId id) noexcept {
  return id == IdentityId::commutation || id == IdentityId::product_formula;
}

json to_json(const VerificationReport& r) {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  json gate_spec{{"rule", r.gate_rule}};
  return json{
      {"case",
       {{"identity", std::string(to_string(r.identity))},
        {"bindings", r.bindings},
        {"backend", r.backend},
        {"gate", gate_spec}}},
      {"space", r.space},
      {"lhs", r.lhs},
      {"rhs", r.rhs},
      {"defect", r.defect},
      {"uncertainty", r.uncertainty},
      {"gate", r.gate},
      {"pass", r.pass},
      {"seed", opt(r.seed)},
      {"n", r.n},
      {"tail_bound", opt(r.tail_bound)},
      {"boundary_leak", opt(r.boundary_leak)},
      {"wall_time", opt(r.wall_time)},
      {"reason", r.reason},
  };
}

IdentityCase case_from_json(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  if (!j.contains("identity") || !j.at("identity").is_string()) {
    throw ConfigError(path + ".identity: expected an identity name");
  }
  IdentityCase c;
  try {
    c.id = identity_from_string(j.at("identity").get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ".identity: " + e.what());
  }
  c.description = j;

  std::vector<std::string> required;
  switch (c.id) {
    case IdentityId::mecke:
    case IdentityId::skorokhod:
    case IdentityId::commutation: required = {"u"}; break;
    case IdentityId::duality:
    case IdentityId::product_formula: required = {"F", "u"}; break;
    case IdentityId::energy_derivation: required = {"F", "G", "u"}; break;
    case IdentityId::gamma_representation:
    case IdentityId::gamma_form_bound: required = {"F", "Phi"}; break;
    case IdentityId::bracket_expectation: required = {"u", "v"}; break;
    case IdentityId::chain_rule: required = {"phi", "F", "G"}; break;
    case IdentityId::non_diffusion: required = {}; break;
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ConfigError(path + ": identity needs binding \"" + key + "\"");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "identity") continue;
    const bool expected = std::find(required.begin(), required.end(), key) != required.end() ||
                          (c.id == IdentityId::non_diffusion && key == "budget");
    if (!expected) {
      throw ConfigError(path + "." + key + ": not a binding of identity \"" +
                        std::string(to_string(c.id)) + "\"");
    }
    const std::string kp = path + "." + key;
    if (key == "F") c.bindings.F = registry::functional_from_json(value, n, kp);
    if (key == "G") c.bindings.G = registry::functional_from_json(value, n, kp);
    if (key == "Phi") c.bindings.Phi = registry::functional_from_json(value, n, kp);
    if (key == "u") c.bindings.u = registry::field_from_json(value, n, kp);
    if (key == "v") c.bindings.v = registry::field_from_json(value, n, kp);
    if (key == "phi") {
      if (!value.is_string()) throw ConfigError(kp + ": expected a map name");
      try {
        c.bindings.phi = registry::smooth_map_from_string(value.get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(kp + ": " + e.what());
      }
    }
    if (key == "budget") {
      if (!value.is_number_integer() || value.get<long>() < 1) {
        throw ConfigError(kp + ": expected a positive integer");
      }
      c.bindings.budget = value.get<std::size_t>();
    }
  }
  if (c.id == IdentityId::non_diffusion && c.bindings.budget == 0) c.bindings.budget = 1000;

  if (c.id == IdentityId::energy_derivation) {
    require_bounded(c.bindings.F, "F", path);
    require_bounded(c.bindings.G, "G", path);
  }
  if (c.id == IdentityId::gamma_representation || c.id == IdentityId::gamma_form_bound) {
    require_bounded(c.bindings.F, "F", path);
    require_bounded(c.bindings.Phi, "Phi", path);
  }
  if (c.id == IdentityId::gamma_form_bound && !c.bindings.Phi->nonnegative()) {
    throw ConfigError(path + ".Phi: the form bound needs a non-negative Phi");
  }
  return c;
}

VerificationReport mecke_check(const RandomField& u, const Backend& backend, const Gates& gates) {
  const GroundSpace space = backend.space();
  const Functional lhs = pointwise("mecke_lhs", [u, space](const Configuration& eta) {
    double s = 0.0;
    for (Site z = 0; z < space.size(); ++z) s += eta[z] * u(eta, z);
    return s;
  });
  const Functional rhs = pointwise("mecke_rhs", [u, space](const Configuration& eta) {
    double s = 0.0;
    for (Site z = 0; z < space.size(); ++z) s += space.weights()[z] * u(add_point(eta, z), z);
    return s;
  });
  return expectation_report(IdentityId::mecke, json{{"u", u.describe()}}, lhs, rhs, backend, gates);
}

VerificationReport duality_check(const Functional& F, const RandomField& u, const Backend& backend,
                                 const Gates& gates) {
  const GroundSpace space = backend.space();
  const Functional lhs = pointwise("duality_lhs", [F, u, space](const Configuration& eta) {
    return F(eta) * divergence(u, space, eta);
  });
  const Functional rhs = pointwise("duality_rhs", [F, u, space](const Configuration& eta) {
    double s = 0.0;
    for (Site z = 0; z < space.size(); ++z) s += space.weights()[z] * u(eta, z) * add_diff(F, eta, z);
    return s;
  });
  return expectation_report(IdentityId::duality, json{{"F", F.describe()}, {"u", u.describe()}},
                            lhs, rhs, backend, gates);
}

VerificationReport skorokhod_check(const RandomField& u, const Backend& backend, const Gates& gates) {
  const GroundSpace space = backend.space();
  const Functional lhs = pointwise("skorokhod_lhs", [u, space](const Configuration& eta) {
    const double d = divergence(u, space, eta);
    return d * d;
  });
  const Functional rhs = pointwise("skorokhod_rhs", [u, space](const Configuration& eta) {
    const std::size_t n = space.size();
    std::vector<double> base(n);
    for (Site z = 0; z < n; ++z) base[z] = u(eta, z);
    // diff[z][z'] = D⁺_z u(η, z')
    std::vector<std::vector<double>> diff(n, std::vector<double>(n));
    for (Site z = 0; z < n; ++z) {
      const Configuration up = add_point(eta, z);
      for (Site zp = 0; zp < n; ++zp) diff[z][zp] = u(up, zp) - base[zp];
    }
    double s = 0.0;
    for (Site z = 0; z < n; ++z) s += space.weights()[z] * base[z] * base[z];
    for (Site z = 0; z < n; ++z) {
      for (Site zp = 0; zp < n; ++zp) {
        s += space.weights()[z] * space.weights()[zp] * diff[z][zp] * diff[zp][z];
      }
    }
    return s;
  });
  return expectation_report(IdentityId::skorokhod, json{{"u", u.describe()}}, lhs, rhs, backend,
                            gates);
}

VerificationReport energy_derivation_check(const Functional& F, const Functional& G,
                                           const RandomField& u, const Backend& backend,
                                           const Gates& gates) {
  const GroundSpace space = backend.space();
  const RandomField dFG = derivative_field(registry::product({F, G}));
  const RandomField dF = derivative_field(F);
  const RandomField dG = derivative_field(G);
  const Functional lhs = pointwise("energy_derivation_lhs", [dFG, u, space](const Configuration& eta) {
    return bracket(dFG, u, BracketKind::gamma, space, eta);
  });
  const Functional rhs =
      pointwise("energy_derivation_rhs", [F, G, dF, dG, u, space](const Configuration& eta) {
        return F(eta) * bracket(dG, u, BracketKind::gamma, space, eta) +
               G(eta) * bracket(dF, u, BracketKind::gamma, space, eta);
      });
  return expectation_report(IdentityId::energy_derivation,
                            json{{"F", F.describe()}, {"G", G.describe()}, {"u", u.describe()}},
                            lhs, rhs, backend, gates);
}

namespace {

// Integrand of Γa(F)[Φ] = 𝓔(F, FΦ) − ½𝓔(F², Φ).
Functional functional_gamma_density(const Functional& F, const Functional& Phi,
                                    const GroundSpace& space) {
  return pointwise("functional_gamma", [F, Phi, space](const Configuration& eta) {
    const double f = F(eta);
    const double p = Phi(eta);
    double s = 0.0;
    for (Site z = 0; z < space.size(); ++z) {
      const Configuration up = add_point(eta, z);
      const double fu = F(up);
      const double pu = Phi(up);
      const double dF = fu - f;
      const double dFPhi = fu * pu - f * p;
      const double dF2 = fu * fu - f * f;
      const double dPhi = pu - p;
      s += space.weights()[z] * (dF * dFPhi - 0.5 * dF2 * dPhi);
    }
    return s;
  });
}

}  // namespace

VerificationReport gamma_representation_check(const Functional& F, const Functional& Phi,
                                              const Backend& backend, const Gates& gates) {
  const GroundSpace space = backend.space();
  const Functional lhs = functional_gamma_density(F, Phi, space);
  const Functional rhs = pointwise("gamma_times_phi", [F, Phi, space](const Configuration& eta) {
    return gamma(F, F, space, eta) * Phi(eta);
  });
  return expectation_report(IdentityId::gamma_representation,
                            json{{"F", F.describe()}, {"Phi", Phi.describe()}}, lhs, rhs, backend,
                            gates);
}

VerificationReport gamma_form_bound_check(const Functional& F, const Functional& Phi,
                                          const Backend& backend, const Gates& gates) {
  if (!Phi.bound() || !Phi.nonnegative()) {
    throw ConfigError("gamma_form_bound: Phi must be certified bounded and non-negative");
  }
  const GroundSpace space = backend.space();
  const double sup_phi = *Phi.bound();
  const Functional form = functional_gamma_density(F, Phi, space);
  const Functional energy = energy_density(F, F, space);
  const Functional cap = pointwise("bounded_energy", [energy, sup_phi](const Configuration& eta) {
    return sup_phi * energy(eta);
  });
  const Functional slack = pointwise("bound_slack", [form, cap](const Configuration& eta) {
    return cap(eta) - form(eta);
  });
  const std::vector<Functional> fs{form, cap, slack};
  const auto es = backend.expect_all(fs);

  VerificationReport r;
  r.identity = IdentityId::gamma_form_bound;
  r.bindings = json{{"F", F.describe()}, {"Phi", Phi.describe()}, {"sup_phi", sup_phi}};
  stamp_backend(r, backend);
  r.gate_rule = "0 <= form and form <= sup_phi * energy, each within " +
                (backend.kind() == BackendKind::exact ? fmt(gates.exact_abs) + " + error_bound"
                                                      : fmt(gates.mc_z) + " * std_error + " +
                                                            fmt(gates.mc_abs)) +
                "; defect = largest violation";
  r.lhs = es[0].value;
  r.rhs = es[1].value;
  r.n = es[0].n;
  const double lower_violation = std::max(0.0, -es[0].value);
  const double upper_violation = std::max(0.0, -es[2].value);
  const double lower_gate = gate_for(backend, es[0].uncertainty, gates);
  const double upper_gate = gate_for(backend, es[2].uncertainty, gates);
  r.pass = lower_violation <= lower_gate && upper_violation <= upper_gate;
  if (lower_violation - lower_gate >= upper_violation - upper_gate) {
    r.defect = lower_violation;
    r.gate = lower_gate;
    r.uncertainty = es[0].uncertainty;
  } else {
    r.defect = upper_violation;
    r.gate = upper_gate;
    r.uncertainty = es[2].uncertainty;
  }
  return r;
}

VerificationReport bracket_expectation_check(const RandomField& u, const RandomField& v,
                                             const Backend& backend, const Gates& gates) {
  const GroundSpace space = backend.space();
  const Functional plus = pointwise("plus_bracket", [u, v, space](const Configuration& eta) {
    return bracket(u, v, BracketKind::plus, space, eta);
  });
  const Functional minus = pointwise("minus_bracket", [u, v, space](const Configuration& eta) {
    return bracket(u, v, BracketKind::minus, space, eta);
  });
  return expectation_report(IdentityId::bracket_expectation,
                            json{{"u", u.describe()}, {"v", v.describe()}}, plus, minus, backend,
                            gates);
}

VerificationReport chain_rule_check(SmoothMap phi, const Functional& F, const Functional& G,
                                    const Backend& backend, const Gates& gates) {
  const GroundSpace space = backend.space();
  const Functional lhs = energy_density(registry::compose(phi, F), G, space);
  const Functional dphi = registry::compose_derivative(phi, F);
  const RandomField dF = derivative_field(F);
  const RandomField dG = derivative_field(G);
  const Functional rhs = pointwise("chain_rule_rhs", [dphi, dF, dG, space](const Configuration& eta) {
    return dphi(eta) * bracket(dF, dG, BracketKind::gamma, space, eta);
  });
  return expectation_report(
      IdentityId::chain_rule,
      json{{"phi", registry::to_string(phi)}, {"F", F.describe()}, {"G", G.describe()}}, lhs, rhs,
      backend, gates);
}

namespace {

template <class Defect>
VerificationReport pointwise_report(IdentityId id, json bindings, const GroundSpace& space,
                                    std::size_t sites_per_probe,
                                    const std::vector<Configuration>& probes, const Gates& gates,
                                    Defect&& lhs_rhs) {
  VerificationReport r;
  r.identity = id;
  r.backend = "pointwise";
  r.bindings = std::move(bindings);
  r.space = space;
  r.gate_rule = "|defect| <= " + fmt(gates.pointwise) + " * max(1, |lhs|, |rhs|) at every probe";
  r.pass = true;
  double worst_ratio = -1.0;
  for (const auto& eta : probes) {
    for (Site z = 0; z < sites_per_probe; ++z) {
      const auto [lhs, rhs] = lhs_rhs(eta, z);
      const double d = lhs - rhs;
      const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      const double gate = gates.pointwise * scale;
      const double ratio = std::abs(d) / gate;
      if (!(ratio <= 1.0)) r.pass = false;
      if (ratio > worst_ratio || std::isnan(ratio)) {
        worst_ratio = std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio;
        r.lhs = lhs;
        r.rhs = rhs;
        r.defect = d;
        r.gate = gate;
        if (!std::isfinite(d)) r.reason = "non-finite value at " + to_string(eta);
      }
      ++r.n;
    }
  }
  return r;
}

}  // namespace

VerificationReport commutation_check(const RandomField& u, const GroundSpace& space,
                                     const std::vector<Configuration>& probes, const Gates& gates) {
  return pointwise_report(
      IdentityId::commutation, json{{"u", u.describe()}}, space, space.size(), probes, gates,
      [&](const Configuration& eta, Site z) {
        const double lhs = divergence(u, space, add_point(eta, z)) - divergence(u, space, eta);
        const double rhs = u(eta, z) + divergence(shifted_derivative_field(u, z), space, eta);
        return std::pair{lhs, rhs};
      });
}

VerificationReport product_formula_check(const Functional& F, const RandomField& u,
                                         const GroundSpace& space,
                                         const std::vector<Configuration>& probes,
                                         const Gates& gates) {
  const RandomField Fu = product_field(F, u);
  const RandomField dF = derivative_field(F);
  // No site argument: one evaluation per probe.
  return pointwise_report(
      IdentityId::product_formula, json{{"F", F.describe()}, {"u", u.describe()}}, space, 1,
      probes, gates, [&](const Configuration& eta, Site) {
        const double lhs = divergence(Fu, space, eta);
        const double rhs =
            F(eta) * divergence(u, space, eta) - bracket(dF, u, BracketKind::minus, space, eta);
        return std::pair{lhs, rhs};
      });
}

VerificationReport non_diffusion_counterexample(const ExactBackend& backend, std::size_t budget,
                                                const Gates& gates) {
  const std::size_t n = backend.space().size();
  const double threshold = gates.non_diffusion_factor * gates.exact_abs;

  VerificationReport best;
  best.identity = IdentityId::non_diffusion;
  stamp_backend(best, backend);
  best.gate_rule = "|defect| > " + fmt(gates.non_diffusion_factor) + " * " + fmt(gates.exact_abs) +
                   " (inverted: a chain-rule violation must be exhibited)";
  best.gate = threshold;
  best.defect = 0.0;

  std::size_t candidates = 0;
  const std::size_t subsets = n >= 63 ? std::size_t(-1) : (std::size_t{1} << n) - 1;
  bool found_any = false;
  for (SmoothMap phi : {SmoothMap::square, SmoothMap::tanh}) {
    for (std::size_t b = 1; b <= subsets && candidates < budget; ++b) {
      for (std::size_t c = 1; c <= subsets && candidates < budget; ++c) {
        std::vector<Site> bs, cs;
        for (Site z = 0; z < n; ++z) {
          if (b >> z & 1U) bs.push_back(z);
          if (c >> z & 1U) cs.push_back(z);
        }
        const VerificationReport r =
            chain_rule_check(phi, registry::linear_count(SiteSet(bs)),
                             registry::linear_count(SiteSet(cs)), backend, gates);
        ++candidates;
        if (!found_any || std::abs(r.defect) > std::abs(best.defect)) {
          found_any = true;
          best.bindings = r.bindings;
          best.lhs = r.lhs;
          best.rhs = r.rhs;
          best.defect = r.defect;
          best.uncertainty = r.uncertainty;
          best.n = r.n;
        }
      }
    }
  }
  best.bindings["candidates"] = candidates;
  best.pass = std::abs(best.defect) > threshold;
  if (!best.pass) best.reason = "no chain-rule violation found within budget";
  return best;
}

VerificationReport run_case(const IdentityCase& c, const Backend& backend, const Gates& gates) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  const Bindings& b = c.bindings;
  try {
    switch (c.id) {
      case IdentityId::mecke: r = mecke_check(*b.u, backend, gates); break;
      case IdentityId::duality: r = duality_check(*b.F, *b.u, backend, gates); break;
      case IdentityId::skorokhod: r = skorokhod_check(*b.u, backend, gates); break;
      case IdentityId::energy_derivation:
        r = energy_derivation_check(*b.F, *b.G, *b.u, backend, gates);
        break;
      case IdentityId::gamma_representation:
        r = gamma_representation_check(*b.F, *b.Phi, backend, gates);
        break;
      case IdentityId::gamma_form_bound: r = gamma_form_bound_check(*b.F, *b.Phi, backend, gates); break;
      case IdentityId::bracket_expectation:
        r = bracket_expectation_check(*b.u, *b.v, backend, gates);
        break;
      case IdentityId::chain_rule: r = chain_rule_check(*b.phi, *b.F, *b.G, backend, gates); break;
      case IdentityId::non_diffusion: {
        const auto* exact = dynamic_cast<const ExactBackend*>(&backend);
        if (!exact) throw ConfigError("non_diffusion runs on the exact backend only");
        r = non_diffusion_counterexample(*exact, b.budget, gates);
        break;
      }
      case IdentityId::commutation:
      case IdentityId::product_formula:
        throw ConfigError("pointwise identity dispatched to an expectation backend");
    }
  } catch (const std::exception& e) {
    r = VerificationReport{};
    r.identity = c.id;
    stamp_backend(r, backend);
    r.pass = false;
    r.defect = std::numeric_limits<double>::quiet_NaN();
    r.reason = e.what();
  }
  if (c.id == IdentityId::non_diffusion) {
    r.bindings["budget"] = b.budget;
  } else {
    r.bindings = c.description;
    r.bindings.erase("identity");
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  r.wall_time = elapsed.count();
  return r;
}

VerificationReport run_pointwise_case(const IdentityCase& c, const GroundSpace& space,
                                      const std::vector<Configuration>& probes,
                                      std::uint64_t probe_seed, const Gates& gates) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  try {
    if (c.id == IdentityId::commutation) {
      r = commutation_check(*c.bindings.u, space, probes, gates);
    } else if (c.id == IdentityId::product_formula) {
      r = product_formula_check(*c.bindings.F, *c.bindings.u, space, probes, gates);
    } else {
      throw ConfigError("identity is not pointwise");
    }
  } catch (const std::exception& e) {
    r = VerificationReport{};
    r.identity = c.id;
    r.backend = "pointwise";
    r.space = space;
    r.pass = false;
    r.defect = std::numeric_limits<double>::quiet_NaN();
    r.reason = e.what();
  }
  r.bindings = c.description;
  r.bindings.erase("identity");
  r.seed = probe_seed;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  r.wall_time = elapsed.count();
  return r;
}

}  // namespace poisson
