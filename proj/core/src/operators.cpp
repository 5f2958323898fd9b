#include "poisson/operators.hpp"

#include <string>

#include "poisson/errors.hpp"

namespace poisson {
namespace {

void check_shape(const GroundSpace& space, const Configuration& eta) {
  if (space.size() != eta.size()) {
    throw ShapeError("configuration has " + std::to_string(eta.size()) + " sites, space has " +
                     std::to_string(space.size()));
  }
}

double plus_bracket(const RandomField& u, const RandomField& v, const GroundSpace& space,
                    const Configuration& eta) {
  double s = 0.0;
  for (Site z = 0; z < space.size(); ++z) s += space.weights()[z] * u(eta, z) * v(eta, z);
  return s;
}

double minus_bracket(const RandomField& u, const RandomField& v, const Configuration& eta) {
  double s = 0.0;
  for (Site z = 0; z < eta.size(); ++z) {
    const int k = eta[z];
    if (k == 0) continue;
    const Configuration dropped = drop_point(eta, z);
    s += k * u(dropped, z) * v(dropped, z);
  }
  return s;
}

}  // namespace

std::string_view to_string(BackendKind kind) noexcept {
  return kind == BackendKind::exact ? "exact" : "mc";
}

std::string_view to_string(BracketKind kind) noexcept {
  switch (kind) {
    case BracketKind::gamma: return "gamma";
    case BracketKind::plus: return "plus";
    case BracketKind::minus: return "minus";
  }
  return "gamma";
}

double divergence(const RandomField& u, const GroundSpace& space, const Configuration& eta) {
  check_shape(space, eta);
  double point_part = 0.0;
  double mean_part = 0.0;
  for (Site z = 0; z < space.size(); ++z) {
    if (const int k = eta[z]; k > 0) point_part += k * u(drop_point(eta, z), z);
    mean_part += space.weights()[z] * u(eta, z);
  }
  return point_part - mean_part;
}

double ou_generator(const Functional& F, const GroundSpace& space, const Configuration& eta) {
  check_shape(space, eta);
  const double f = F(eta);
  double s = 0.0;
  for (Site z = 0; z < space.size(); ++z) {
    s += space.weights()[z] * (F(add_point(eta, z)) - f);
    if (const int k = eta[z]; k > 0) s -= k * (f - F(drop_point(eta, z)));
  }
  return s;
}

double bracket(const RandomField& u, const RandomField& v, BracketKind kind,
               const GroundSpace& space, const Configuration& eta) {
  check_shape(space, eta);
  switch (kind) {
    case BracketKind::plus: return plus_bracket(u, v, space, eta);
    case BracketKind::minus: return minus_bracket(u, v, eta);
    case BracketKind::gamma:
      return 0.5 * plus_bracket(u, v, space, eta) + 0.5 * minus_bracket(u, v, eta);
  }
  return 0.0;
}

double gamma(const Functional& F, const Functional& G, const GroundSpace& space,
             const Configuration& eta) {
  return bracket(derivative_field(F), derivative_field(G), BracketKind::gamma, space, eta);
}

double gamma_add_drop(const Functional& F, const GroundSpace& space, const Configuration& eta) {
  check_shape(space, eta);
  double plus = 0.0;
  double minus = 0.0;
  for (Site z = 0; z < space.size(); ++z) {
    const double a = add_diff(F, eta, z);
    plus += space.weights()[z] * a * a;
    const double d = drop_diff(F, eta, z);
    minus += eta[z] * d * d;
  }
  return 0.5 * plus + 0.5 * minus;
}

Functional energy_density(const Functional& F, const Functional& G, const GroundSpace& space) {
  return Functional("energy_density",
                    nlohmann::json{{"F", F.describe()}, {"G", G.describe()}},
                    [F, G, space](const Configuration& eta) {
                      check_shape(space, eta);
                      const double f = F(eta);
                      const double g = G(eta);
                      double s = 0.0;
                      for (Site z = 0; z < space.size(); ++z) {
                        const Configuration up = add_point(eta, z);
                        s += space.weights()[z] * (F(up) - f) * (G(up) - g);
                      }
                      return s;
                    });
}

Expectation dirichlet_energy(const Functional& F, const Functional& G, const Backend& backend) {
  return backend.expect(energy_density(F, G, backend.space()));
}

RandomField product_field(const Functional& F, const RandomField& u) {
  return RandomField("product_field",
                     nlohmann::json{{"functional", F.describe()}, {"field", u.describe()}},
                     [F, u](const Configuration& eta, Site z) { return F(eta) * u(eta, z); });
}

double divergence_product_defect(const Functional& F, const RandomField& u,
                                 const GroundSpace& space, const Configuration& eta) {
  const double lhs = divergence(product_field(F, u), space, eta);
  const double rhs = F(eta) * divergence(u, space, eta) -
                     bracket(derivative_field(F), u, BracketKind::minus, space, eta);
  return lhs - rhs;
}

}  // namespace poisson

namespace poisson {

std::vector<Expectation> Backend::expect_all(std::span<const Functional> fs) const {
  std::vector<Expectation> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(expect(f));
  return out;
}

}  // namespace poisson
