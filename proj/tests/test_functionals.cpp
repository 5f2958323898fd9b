#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "poisson/errors.hpp"
#include "poisson/functionals.hpp"
#include "poisson/registry.hpp"

using namespace poisson;
namespace reg = poisson::registry;

TEST_CASE("add_diff examples") {
  const Functional F = reg::linear_count(SiteSet{0});
  testing::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Configuration eta = testing::random_configuration(rng, 3);
    CHECK(add_diff(F, eta, 0) == 1.0);
    CHECK(add_diff(F, eta, 1) == 0.0);
    CHECK(add_diff(reg::constant(4.2), eta, 2) == 0.0);
  }
  // (N+1)^2 - N^2 = 2N + 1 with N = 3
  const Functional sq = reg::poly_count(SiteSet{0, 1, 2}, 2);
  for (Site z = 0; z < 3; ++z) CHECK(add_diff(sq, Configuration({1, 0, 2}), z) == 7.0);
}

TEST_CASE("drop_diff examples") {
  const Configuration eta({1, 0, 2});
  CHECK(drop_diff(reg::linear_count(SiteSet{0}), eta, 0) == 1.0);
  CHECK(drop_diff(reg::poly_count(SiteSet{0, 1, 2}, 3), eta, 1) == 0.0);
  // N^2 - (N-1)^2 = 2N - 1 with N = 3
  CHECK(drop_diff(reg::poly_count(SiteSet{0, 1, 2}, 2), eta, 2) == 5.0);
}

TEST_CASE("second_add_diff examples") {
  const std::vector<double> g{0.3, -1.0, 2.0};
  const Configuration eta({1, 0, 2});
  const RandomField det = reg::deterministic_field(g);
  const RandomField scaled = reg::scaled_field(reg::linear_count(SiteSet::all(3)), g);
  const RandomField total = reg::scaled_field(reg::linear_count(SiteSet::all(3)), {1, 1, 1});
  for (Site z = 0; z < 3; ++z) {
    for (Site zp = 0; zp < 3; ++zp) {
      CHECK(second_add_diff(det, eta, z, zp) == 0.0);
      CHECK(second_add_diff(scaled, eta, z, zp) == doctest::Approx(g[zp]));
      CHECK(second_add_diff(total, eta, z, zp) == 1.0);
    }
  }
}

TEST_CASE("derivative_field") {
  const RandomField d = derivative_field(reg::linear_count(SiteSet{1, 2}));
  const Configuration eta({4, 1, 0});
  CHECK(d(eta, 0) == 0.0);
  CHECK(d(eta, 1) == 1.0);
  CHECK(d(eta, 2) == 1.0);
  CHECK(derivative_field(reg::constant(2.0))(eta, 1) == 0.0);
  const RandomField dsq = derivative_field(reg::poly_count(SiteSet::all(3), 2));
  for (Site z = 0; z < 3; ++z) CHECK(dsq(Configuration({1, 0, 2}), z) == 7.0);
}

TEST_CASE("registry bounds and signs") {
  CHECK(reg::bounded_sigmoid(SiteSet{0}, 1.0).bound() == 1.0);
  CHECK(reg::bounded_sigmoid(SiteSet{0}, 1.0).nonnegative());
  CHECK_FALSE(reg::bounded_sigmoid(SiteSet{0}, -1.0).nonnegative());
  CHECK(reg::indicator_leq(SiteSet{0}, 2).bound() == 1.0);
  CHECK_FALSE(reg::linear_count(SiteSet{0}).bounded());
  CHECK_FALSE(reg::poly_count(SiteSet{0}, 2).bounded());
  CHECK(reg::product({reg::constant(2.0), reg::indicator_leq(SiteSet{0}, 1)}).bound() == 2.0);
  CHECK_FALSE(reg::product({reg::constant(2.0), reg::linear_count(SiteSet{0})}).bounded());
  const Functional a = reg::affine({{-2.0, reg::bounded_sigmoid(SiteSet{0}, 1.0)}}, 0.5);
  CHECK(a.bound() == 2.5);
  CHECK_FALSE(a.nonnegative());
}

TEST_CASE("registry json parsing") {
  const auto F = reg::functional_from_json(
      nlohmann::json::parse(R"({"name":"poly_count","B":[1,2,3],"degree":2})"), 3);
  CHECK(F(Configuration({1, 0, 2})) == 9.0);
  CHECK(reg::functional_from_json(F.describe(), 3)(Configuration({2, 2, 2})) == 36.0);

  const auto u = reg::field_from_json(
      nlohmann::json::parse(R"({"name":"scaled","functional":{"name":"linear_count","B":[1]},"g":[1,2,3]})"),
      3);
  CHECK(u(Configuration({2, 0, 0}), 2) == 6.0);

  CHECK_THROWS_WITH_AS(reg::functional_from_json(nlohmann::json::parse(R"({"name":"nope"})"), 3),
                       doctest::Contains("unknown functional"), ConfigError);
  CHECK_THROWS_WITH_AS(
      reg::functional_from_json(nlohmann::json::parse(R"({"name":"linear_count","B":[7]})"), 3,
                                "cases[2].F"),
      doctest::Contains("cases[2].F.B"), ConfigError);
  CHECK_THROWS_AS(reg::field_from_json(nlohmann::json::parse(R"({"name":"deterministic","g":[1]})"), 3),
                  ConfigError);
}

TEST_CASE("difference operator identities on random functionals") {
  testing::Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const Functional F = testing::random_functional(rng, n);
    const Functional G = testing::random_functional(rng, n);
    const Configuration eta = testing::random_configuration(rng, n);
    const Site z = std::uniform_int_distribution<Site>(0, n - 1)(rng);
    const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
    const double b = std::uniform_real_distribution<double>(-2, 2)(rng);

    const double f = F(eta);
    const double g = G(eta);
    const double scale = 1.0 + std::abs(f) * std::abs(f) + std::abs(g) * std::abs(g) +
                         std::abs(F(add_point(eta, z))) * std::abs(G(add_point(eta, z)));
    const double tol = 1e-12 * scale;

    // linearity
    const Functional lin = reg::affine({{a, F}, {b, G}});
    CHECK(std::abs(add_diff(lin, eta, z) - (a * add_diff(F, eta, z) + b * add_diff(G, eta, z))) <= tol);
    CHECK(std::abs(drop_diff(lin, eta, z) - (a * drop_diff(F, eta, z) + b * drop_diff(G, eta, z))) <=
          tol);

    // drop/add conjugation
    if (eta[z] > 0) CHECK(drop_diff(F, eta, z) == add_diff(F, drop_point(eta, z), z));

    // square chain rules
    const Functional sq = reg::product({F, F});
    const double dp = add_diff(F, eta, z);
    const double dm = drop_diff(F, eta, z);
    CHECK(std::abs(add_diff(sq, eta, z) - (2 * f * dp + dp * dp)) <= tol);
    CHECK(std::abs(drop_diff(sq, eta, z) - (2 * f * dm - dm * dm)) <= tol);

    // product rule
    const Functional fg = reg::product({F, G});
    const double gp = add_diff(G, eta, z);
    CHECK(std::abs(add_diff(fg, eta, z) - (f * gp + g * dp + dp * gp)) <= tol);

    // bounded functionals have bounded differences
    if (F.bound()) CHECK(std::abs(dp) <= 2.0 * *F.bound() + 1e-15);
  }
}
