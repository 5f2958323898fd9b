#include <doctest.h>

#include "generators.hpp"
#include "poisson/errors.hpp"
#include "poisson/ground.hpp"

using namespace poisson;

namespace {
const GroundSpace kCanonical({0.5, 1.0, 1.5});
}

TEST_CASE("ground space rejects empty and non-positive weights") {
  CHECK_THROWS_AS(GroundSpace(std::vector<double>{}), InvalidSpace);
  CHECK_THROWS_AS(GroundSpace({0.5, 0.0}), InvalidSpace);
  CHECK_THROWS_AS(GroundSpace({-1.0}), InvalidSpace);
  CHECK_THROWS_AS(GroundSpace({std::numeric_limits<double>::infinity()}), InvalidSpace);
  CHECK(kCanonical.total_mass() == doctest::Approx(3.0));
}

TEST_CASE("measure_of") {
  CHECK(measure_of(kCanonical, SiteSet{}) == 0.0);
  CHECK(measure_of(kCanonical, SiteSet{0, 1, 2}) == doctest::Approx(3.0));
  // 0.5 + 1.5
  CHECK(measure_of(kCanonical, SiteSet{0, 2}) == doctest::Approx(2.0));
  CHECK(measure_of(kCanonical, SiteSet::all(3)) == kCanonical.total_mass());
  CHECK_THROWS_AS(measure_of(kCanonical, SiteSet{3}), InvalidSiteSet);
}

TEST_CASE("count_of") {
  const Configuration eta({1, 0, 2});
  CHECK(count_of(eta, SiteSet{0, 1, 2}) == 3);
  CHECK(count_of(eta, SiteSet{1}) == 0);
  CHECK(count_of(eta, SiteSet{0, 2}) == 3);
  CHECK_THROWS_AS(count_of(eta, SiteSet{5}), ShapeError);
}

TEST_CASE("add_point and drop_point") {
  const Configuration eta({1, 0, 2});
  CHECK(add_point(eta, 1) == Configuration({1, 1, 2}));
  CHECK(eta == Configuration({1, 0, 2}));
  CHECK(add_point(Configuration::empty(3), 0) == Configuration({1, 0, 0}));
  CHECK(drop_point(Configuration({1, 1, 2}), 1) == Configuration({1, 0, 2}));
  CHECK(drop_point(Configuration({2, 0, 0}), 0) == Configuration({1, 0, 0}));
  CHECK_THROWS_AS(drop_point(eta, 1), PointAbsent);
  CHECK_THROWS_AS(add_point(eta, 3), SiteOutOfRange);
  CHECK_THROWS_AS(Configuration({1, -1}), ShapeError);
}

TEST_CASE("configuration invariants hold on random inputs") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const GroundSpace space = testing::random_space(rng);
    const std::size_t n = space.size();
    const Configuration eta = testing::random_configuration(rng, n);
    const SiteSet B = testing::random_sites(rng, n);
    const Site z = std::uniform_int_distribution<Site>(0, n - 1)(rng);

    CHECK(drop_point(add_point(eta, z), z) == eta);
    if (eta[z] > 0) CHECK(add_point(drop_point(eta, z), z) == eta);
    CHECK(count_of(add_point(eta, z), B) == count_of(eta, B) + (B.contains(z) ? 1 : 0));

    std::vector<Site> complement;
    for (Site s = 0; s < n; ++s) {
      if (!B.contains(s)) complement.push_back(s);
    }
    CHECK(measure_of(space, B) + measure_of(space, SiteSet(complement)) ==
          doctest::Approx(space.total_mass()).epsilon(1e-14));
  }
}

TEST_CASE("json round trip for spaces and configurations") {
  const nlohmann::json js = kCanonical;
  CHECK(js.dump() == R"({"weights":[0.5,1.0,1.5]})");
  CHECK(space_from_json(js) == kCanonical);

  const nlohmann::json jc = Configuration({1, 0, 2});
  CHECK(jc.dump() == R"({"counts":[1,0,2]})");
  CHECK(configuration_from_json(jc) == Configuration({1, 0, 2}));

  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(R"({"weights":[1,-2]})")), ConfigError);
  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(R"({"w":[1]})")), ConfigError);
  CHECK_THROWS_AS(configuration_from_json(nlohmann::json::parse(R"({"counts":[1,-2]})")),
                  ConfigError);
}

TEST_CASE("site labels are one-based in json") {
  const SiteSet B = site_set_from_labels(nlohmann::json::parse("[3,1,1]"), 3);
  CHECK(B == SiteSet{0, 2});
  CHECK(site_set_labels(B).dump() == "[1,3]");
  CHECK_THROWS_AS(site_set_from_labels(nlohmann::json::parse("[0]"), 3), ConfigError);
  CHECK_THROWS_AS(site_set_from_labels(nlohmann::json::parse("[4]"), 3), ConfigError);
}
