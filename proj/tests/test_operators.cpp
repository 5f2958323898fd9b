#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "poisson/errors.hpp"
#include "poisson/exact.hpp"
#include "poisson/operators.hpp"
#include "poisson/registry.hpp"

using namespace poisson;
namespace reg = poisson::registry;

namespace {

const GroundSpace kCanonical({0.5, 1.0, 1.5});

// Independent evaluation of the divergence straight from the point list:
// each point x of eta contributes u(eta minus x, x).
double divergence_oracle(const RandomField& u, const GroundSpace& space, const Configuration& eta) {
  double pts = 0.0;
  double comp = 0.0;
  for (Site z = 0; z < space.size(); ++z) {
    for (int j = 0; j < eta[z]; ++j) {
      std::vector<int> c(eta.counts().begin(), eta.counts().end());
      --c[z];
      pts += u(Configuration(c), z);
    }
    comp += space.weight(z) * u(eta, z);
  }
  return pts - comp;
}

}  // namespace

TEST_CASE("divergence examples") {
  const Configuration eta({1, 0, 2});
  CHECK(divergence(reg::deterministic_field({1, 1, 1}), kCanonical, eta) == doctest::Approx(0.0));
  CHECK(divergence(reg::zero_field(), kCanonical, eta) == 0.0);
  CHECK(divergence(reg::deterministic_field({1, 0, 0}), kCanonical, Configuration({2, 1, 0})) ==
        doctest::Approx(1.5));
  CHECK_THROWS_AS(divergence(reg::zero_field(), kCanonical, Configuration({1, 0})), ShapeError);
}

TEST_CASE("divergence matches the point-list oracle") {
  testing::Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const GroundSpace space = testing::random_space(rng);
    const RandomField u = testing::random_field(rng, space.size());
    const Configuration eta = testing::random_configuration(rng, space.size(), 3);
    const double expected = divergence_oracle(u, space, eta);
    CHECK(std::abs(divergence(u, space, eta) - expected) <= 1e-12 * (1 + std::abs(expected)));
  }
}

TEST_CASE("ou_generator examples") {
  const Configuration eta({1, 0, 2});
  CHECK(ou_generator(reg::linear_count(SiteSet{0, 1}), kCanonical, eta) == doctest::Approx(0.5));
  CHECK(ou_generator(reg::constant(3.0), kCanonical, eta) == 0.0);

  testing::Rng rng(5);
  const SiteSet B{0, 1};
  const Functional centered = reg::affine({{1.0, reg::linear_count(B)}}, -measure_of(kCanonical, B));
  for (int i = 0; i < 10; ++i) {
    const Configuration x = testing::random_configuration(rng, 3, 6);
    CHECK(ou_generator(centered, kCanonical, x) == doctest::Approx(-centered(x)).epsilon(1e-14));
  }
}

TEST_CASE("bracket examples") {
  const RandomField one = reg::deterministic_field({1, 1, 1});
  const Configuration eta({1, 0, 2});
  CHECK(bracket(one, one, BracketKind::plus, kCanonical, eta) == doctest::Approx(3.0));
  CHECK(bracket(one, one, BracketKind::minus, kCanonical, eta) == doctest::Approx(3.0));
  CHECK(bracket(one, one, BracketKind::gamma, kCanonical, eta) == doctest::Approx(3.0));
  for (BracketKind k : {BracketKind::plus, BracketKind::minus, BracketKind::gamma}) {
    CHECK(bracket(reg::zero_field(), one, k, kCanonical, eta) == 0.0);
  }

  testing::Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const GroundSpace space = testing::random_space(rng);
    const RandomField u = testing::random_field(rng, space.size());
    const RandomField v = testing::random_field(rng, space.size());
    const Configuration x = testing::random_configuration(rng, space.size());
    const double p = bracket(u, v, BracketKind::plus, space, x);
    const double m = bracket(u, v, BracketKind::minus, space, x);
    CHECK(std::abs(bracket(u, v, BracketKind::gamma, space, x) - 0.5 * (p + m)) <=
          1e-12 * (1 + std::abs(p) + std::abs(m)));
  }
}

TEST_CASE("gamma examples and pointwise properties") {
  const Configuration eta({1, 0, 2});
  const Functional F = reg::linear_count(SiteSet{0, 1});
  CHECK(gamma(F, F, kCanonical, eta) == doctest::Approx(1.25));
  CHECK(gamma(reg::constant(2.0), reg::constant(2.0), kCanonical, eta) == 0.0);

  testing::Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const GroundSpace space = testing::random_space(rng);
    const std::size_t n = space.size();
    const Functional A = testing::random_functional(rng, n);
    const Functional C = testing::random_functional(rng, n);
    const Configuration x = testing::random_configuration(rng, n);
    const double gaa = gamma(A, A, space, x);
    const double gcc = gamma(C, C, space, x);
    const double gac = gamma(A, C, space, x);
    const double tol = 1e-12 * (1 + gaa + gcc);
    CHECK(gaa >= -tol);
    CHECK(std::abs(gac - gamma(C, A, space, x)) <= tol);
    CHECK(gac * gac <= gaa * gcc + tol * (1 + gaa + gcc));
    CHECK(std::abs(gaa - gamma_add_drop(A, space, x)) <= tol);
  }
}

TEST_CASE("dirichlet energy") {
  const ExactBackend exact(build_state_table(kCanonical, 1e-12, 2'000'000));
  const Functional F = reg::linear_count(SiteSet{0, 1});
  CHECK(dirichlet_energy(F, F, exact).value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(dirichlet_energy(reg::constant(1.0), F, exact).value == 0.0);

  const Functional A = reg::bounded_sigmoid(SiteSet{0, 2}, 0.7);
  const Functional C = reg::indicator_leq(SiteSet{1, 2}, 2);
  CHECK(dirichlet_energy(A, C, exact).value ==
        doctest::Approx(dirichlet_energy(C, A, exact).value).epsilon(1e-13));
}

TEST_CASE("divergence product defect vanishes pointwise") {
  testing::Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const GroundSpace space = testing::random_space(rng);
    const std::size_t n = space.size();
    const Configuration x = testing::random_configuration(rng, n, 4);
    CHECK(divergence_product_defect(reg::constant(2.5), testing::random_field(rng, n), space, x) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(divergence_product_defect(testing::random_functional(rng, n), reg::zero_field(), space, x) ==
          0.0);
    const Functional F = testing::random_functional(rng, n);
    const RandomField u = testing::random_field(rng, n);
    const double scale = 1 + std::abs(F(x) * divergence(u, space, x));
    CHECK(std::abs(divergence_product_defect(F, u, space, x)) <= 1e-11 * scale);
  }
}

TEST_CASE("adding a point shifts the divergence by the field value") {
  testing::Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const GroundSpace space = testing::random_space(rng);
    const std::size_t n = space.size();
    const RandomField u = testing::random_field(rng, n);
    const Configuration x = testing::random_configuration(rng, n, 4);
    const Site z = std::uniform_int_distribution<Site>(0, n - 1)(rng);
    const double lhs = divergence(u, space, add_point(x, z)) - divergence(u, space, x);
    const double rhs = u(x, z) + divergence(shifted_derivative_field(u, z), space, x);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * (1 + std::abs(lhs)));
  }
}
