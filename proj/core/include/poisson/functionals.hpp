#pragma once

// Functionals F(η), random fields u(η, z) and the add/drop difference
// operators acting on them.

#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "poisson/ground.hpp"

namespace poisson {

// A deterministic, total map Configuration -> double. The evaluation closure
// must be pure: functionals are shared between worker threads.
class Functional {
 public:
  using Eval = std::function<double(const Configuration&)>;

  Functional(std::string name, nlohmann::json params, Eval eval,
             std::optional<double> bound = std::nullopt, bool nonnegative = false);

  double operator()(const Configuration& eta) const { return eval_(eta); }

  const std::string& name() const noexcept { return name_; }
  const nlohmann::json& params() const noexcept { return params_; }
  // Certified sup-norm bound, if the functional is uniformly bounded.
  const std::optional<double>& bound() const noexcept { return bound_; }
  bool bounded() const noexcept { return bound_.has_value(); }
  // Certified F >= 0 everywhere.
  bool nonnegative() const noexcept { return nonnegative_; }

  // {"name": ..., params...}, the same shape the registry parser accepts.
  nlohmann::json describe() const;

 private:
  std::string name_;
  nlohmann::json params_;
  Eval eval_;
  std::optional<double> bound_;
  bool nonnegative_;
};

// A deterministic, total map (Configuration, Site) -> double.
class RandomField {
 public:
  using Eval = std::function<double(const Configuration&, Site)>;

  RandomField(std::string name, nlohmann::json params, Eval eval);

  double operator()(const Configuration& eta, Site z) const { return eval_(eta, z); }

  const std::string& name() const noexcept { return name_; }
  const nlohmann::json& params() const noexcept { return params_; }
  nlohmann::json describe() const;

 private:
  std::string name_;
  nlohmann::json params_;
  Eval eval_;
};

// D⁺_z F(η) = F(η + δ_z) − F(η).
double add_diff(const Functional& F, const Configuration& eta, Site z);
// D⁻_z F(η) = (F(η) − F(η − δ_z))·1{k_z ≥ 1}.
double drop_diff(const Functional& F, const Configuration& eta, Site z);
// D⁺_z u(η, z') = u(η + δ_z, z') − u(η, z').
double second_add_diff(const RandomField& u, const Configuration& eta, Site z, Site zp);

// DF: (η, z) ↦ D⁺_z F(η).
RandomField derivative_field(const Functional& F);
// (η, z') ↦ D⁺_z u(η, z') for a fixed z.
RandomField shifted_derivative_field(const RandomField& u, Site z);

}  // namespace poisson
