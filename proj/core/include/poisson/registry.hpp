#pragma once

// Named, parametric families of test functionals and random fields. This is
// the vocabulary the identity suite and the CLI config are written in.
//
// Functionals:
//   constant(c)                 F = c
//   linear_count(B)             F = η(B)
//   poly_count(B, d)            F = η(B)^d
//   bounded_sigmoid(B, s)       F = tanh(s·η(B))           |F| <= 1
//   indicator_leq(B, m)         F = 1{η(B) <= m}           0 <= F <= 1
//   product(F_1, ..., F_k)      F = Π F_i
//   affine({a_i, F_i}, b)       F = Σ a_i F_i + b
//   compose(φ, F)               F = φ∘F for φ in SmoothMap
//
// Fields:
//   zero                        u = 0
//   deterministic(g)            u(η, z) = g(z)
//   scaled(F, g)                u(η, z) = F(η)·g(z)
//   site_count(d)               u(η, z) = k_z^d
//   local_sigmoid(s)            u(η, z) = tanh(s·k_z)
//   derivative(F)               u = DF

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poisson/functionals.hpp"
#include "poisson/ground.hpp"

namespace poisson::registry {

enum class SmoothMap { identity, square, tanh };

double apply(SmoothMap phi, double x);
double apply_derivative(SmoothMap phi, double x);
std::string to_string(SmoothMap phi);
SmoothMap smooth_map_from_string(const std::string& name);

struct AffineTerm {
  double coefficient;
  Functional functional;
};

Functional constant(double value);
Functional linear_count(SiteSet sites);
Functional poly_count(SiteSet sites, int degree);
Functional bounded_sigmoid(SiteSet sites, double scale);
Functional indicator_leq(SiteSet sites, long threshold);
Functional product(std::vector<Functional> factors);
Functional affine(std::vector<AffineTerm> terms, double offset = 0.0);
Functional compose(SmoothMap phi, Functional F);
// x ↦ φ'(F(x)).
Functional compose_derivative(SmoothMap phi, Functional F);

RandomField zero_field();
RandomField deterministic_field(std::vector<double> g);
RandomField scaled_field(Functional F, std::vector<double> g);
RandomField site_count_field(int degree);
RandomField local_sigmoid_field(double scale);

// Parse {"name": ..., params} for a space with n sites. Site sets use 1-based
// labels. Errors are ConfigError carrying `path` for context.
Functional functional_from_json(const nlohmann::json& j, std::size_t n,
                                const std::string& path = "functional");
RandomField field_from_json(const nlohmann::json& j, std::size_t n,
                            const std::string& path = "field");

}  // namespace poisson::registry
