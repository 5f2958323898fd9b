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

// One-dimensional Poisson moment by direct summation of the pmf, far past
// where the terms underflow.
double poisson_moment(double lambda, int power) {
  double pmf = std::exp(-lambda);
  double acc = 0.0;
  for (int k = 0; k < 400; ++k) {
    if (k > 0) pmf *= lambda / k;
    acc += pmf * std::pow(static_cast<double>(k), power);
  }
  return acc;
}

double tail_oracle(double lambda, int cap) {
  double pmf = std::exp(-lambda);
  double head = pmf;
  for (int k = 1; k <= cap; ++k) {
    pmf *= lambda / k;
    head += pmf;
  }
  return 1.0 - head;
}

const StateTable& canonical_table() {
  static const StateTable table = build_state_table(kCanonical, 1e-12, 2'000'000);
  return table;
}

}  // namespace

TEST_CASE("poisson_tail agrees with one minus the head sum") {
  for (double lambda : {0.3, 1.0, 2.5}) {
    for (int cap : {0, 1, 3, 6}) {
      CHECK(poisson_tail(lambda, cap) == doctest::Approx(tail_oracle(lambda, cap)).epsilon(1e-10));
    }
  }
  CHECK(poisson_tail(1e-6, 2) < 1e-18);
  CHECK(poisson_tail(1.0, 30) < 1e-30);
}

TEST_CASE("truncation plans") {
  const TruncationPlan plan = plan_truncation(kCanonical, 1e-12, 2'000'000);
  CHECK(plan.tail_bound <= 1e-12);
  CHECK(plan.caps.size() == 3);
  double union_bound = 0.0;
  std::size_t states = 1;
  for (std::size_t i = 0; i < 3; ++i) {
    union_bound += tail_oracle(kCanonical.weight(i), plan.caps[i]);
    states *= static_cast<std::size_t>(plan.caps[i] + 1);
  }
  CHECK(union_bound <= 1.0000001e-12);
  CHECK(states == plan.state_count);

  const TruncationPlan tiny = plan_truncation(GroundSpace({1e-6}), 1e-9, 1000);
  CHECK(tiny.caps[0] <= 2);
  CHECK(tiny.tail_bound <= 1e-9);

  const TruncationPlan loose = plan_truncation(kCanonical, 1.5, 1000);
  for (int c : loose.caps) CHECK(c >= 1);
  CHECK(loose.tail_bound <= 1.5);

  CHECK_THROWS_AS(plan_truncation(kCanonical, 0.0, 1000), ConfigError);
  CHECK_THROWS_AS(plan_truncation(kCanonical, 1e-12, 100), BudgetExceeded);
}

TEST_CASE("exact expectations against one-dimensional oracles") {
  const StateTable& table = canonical_table();
  const SiteSet Z = SiteSet::all(3);

  const ExactValue mean = exact_expectation(reg::linear_count(Z), table);
  CHECK(std::abs(mean.value - 3.0) <= 1e-10 + mean.error_bound);
  const ExactValue second = exact_expectation(reg::poly_count(Z, 2), table);
  CHECK(std::abs(second.value - poisson_moment(3.0, 2)) <= 1e-10 + second.error_bound);
  CHECK(std::abs(second.value - 12.0) <= 1e-10 + second.error_bound);
  const ExactValue fourth = exact_expectation(reg::poly_count(SiteSet{1}, 4), table);
  CHECK(std::abs(fourth.value - poisson_moment(1.0, 4)) <= 1e-10 + fourth.error_bound);

  const ExactValue one = exact_expectation(reg::constant(1.0), table);
  CHECK(one.value <= 1.0 + 1e-15);
  CHECK(one.value >= 1.0 - table.tail_bound() - 1e-15);
  CHECK(table.total_prob() == doctest::Approx(one.value).epsilon(1e-15));
}

TEST_CASE("pairing examples") {
  const StateTable& table = canonical_table();
  const SiteSet B{0, 1};
  CHECK(exact_pairing(reg::linear_count(B), reg::zero_field(), table).value == 0.0);
  const ExactValue p = exact_pairing(reg::linear_count(B), reg::deterministic_field({1, 1, 0}), table);
  CHECK(std::abs(p.value - 1.5) <= 1e-10 + p.error_bound);
}

TEST_CASE("exact Mecke at the oracle level") {
  // E sum_x u(eta - x, x) = E sum_z lambda_z u(eta, z) with u = local sigmoid.
  const StateTable& table = canonical_table();
  const RandomField u = reg::local_sigmoid_field(0.8);
  const Functional lhs("lhs", {}, [u](const Configuration& eta) {
    double acc = 0.0;
    for (Site z = 0; z < eta.size(); ++z) {
      if (eta[z] > 0) acc += eta[z] * u(drop_point(eta, z), z);
    }
    return acc;
  });
  const Functional rhs("rhs", {}, [u](const Configuration& eta) {
    double acc = 0.0;
    for (Site z = 0; z < eta.size(); ++z) acc += kCanonical.weight(z) * u(eta, z);
    return acc;
  });
  CHECK(exact_expectation(lhs, table).value ==
        doctest::Approx(exact_expectation(rhs, table).value).epsilon(1e-11));
}

TEST_CASE("worker count does not change exact results") {
  const StateTable& table = canonical_table();
  testing::Rng rng(4);
  std::vector<Functional> fs;
  for (int i = 0; i < 6; ++i) fs.push_back(testing::random_functional(rng, 3));
  const auto one = exact_expectations(fs, table, 1);
  const auto four = exact_expectations(fs, table, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].value == four[i].value);
}

TEST_CASE("state table indexing") {
  const StateTable& table = canonical_table();
  for (std::size_t i = 0; i < table.size(); i += 97) CHECK(table.index_of(table.state(i)) == i);
  CHECK_FALSE(table.index_of(Configuration({100, 0, 0})).has_value());
  CHECK(table.boundary_leak() < 1e-10);
}

TEST_CASE("generator matrix structure") {
  const StateTable& table = canonical_table();
  const GeneratorMatrix M(table);
  REQUIRE(M.size() == table.size());

  double worst_row = 0.0;
  for (std::size_t r = 0; r < M.size(); ++r) worst_row = std::max(worst_row, std::abs(M.row_sum(r)));
  CHECK(worst_row <= 1e-12);

  // Constants are in the kernel.
  const auto Mone = M.apply(std::vector<double>(M.size(), 1.0));
  for (double v : Mone) CHECK(std::abs(v) <= 1e-12);

  // First chaos is an eigenvector with eigenvalue -1 away from the caps.
  const SiteSet B{0, 2};
  const Functional f = reg::affine({{1.0, reg::linear_count(B)}}, -measure_of(kCanonical, B));
  const auto fv = state_vector(f, table);
  const auto Mf = M.apply(fv);
  double worst = 0.0;
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (table.interior(i)) worst = std::max(worst, std::abs(Mf[i] + fv[i]));
  }
  CHECK(worst <= 1e-11);

  // Matrix rows agree with the pointwise generator at interior states.
  const Functional g = reg::bounded_sigmoid(SiteSet{0, 1}, 0.6);
  const auto Mg = M.apply(state_vector(g, table));
  for (std::size_t i = 0; i < M.size(); i += 31) {
    if (table.interior(i)) {
      CHECK(std::abs(Mg[i] - ou_generator(g, kCanonical, table.state(i))) <= 1e-12);
    }
  }

  // Reversibility: p_i M_ij = p_j M_ji.
  double asym = 0.0;
  for (std::size_t r = 0; r < M.size(); ++r) {
    for (std::size_t k = M.row_start()[r]; k < M.row_start()[r + 1]; ++k) {
      const std::size_t c = M.columns()[k];
      asym = std::max(asym, std::abs(table.prob(r) * M.values()[k] - table.prob(c) * M.entry(c, r)));
    }
  }
  CHECK(asym <= 1e-15);
}

TEST_CASE("pseudo-inverse") {
  const StateTable& table = canonical_table();
  const SiteSet B{0, 1};
  const PseudoInverse inv = ou_pseudo_inverse(reg::linear_count(B), table, 1e-9);
  CHECK(inv.mean == doctest::Approx(1.5).epsilon(1e-11));
  CHECK(inv.residual <= 1e-9);
  double worst = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.prob(i) > 1e-2) worst = std::max(worst, std::abs(inv.solution[i] + inv.centered[i]));
  }
  // The truncated chain differs from the full one only at the caps, so the
  // first-chaos identity is sharp where the mass is.
  CHECK(worst <= 1e-9);

  const PseudoInverse zero = ou_pseudo_inverse(reg::constant(2.0), table, 1e-9);
  for (double v : zero.solution) CHECK(std::abs(v) <= 1e-12);

  const PseudoInverse bounded = ou_pseudo_inverse(reg::indicator_leq(SiteSet{0, 1, 2}, 3), table, 1e-9);
  double mean = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) mean += table.prob(i) * bounded.solution[i];
  CHECK(std::abs(mean) <= 1e-12);

  const StateTable coarse = build_state_table(kCanonical, 1e-2, 1000);
  CHECK_THROWS_AS(ou_pseudo_inverse(reg::linear_count(B), coarse, 1e-9, 1e-6), SolverError);
}

TEST_CASE("exact backend") {
  const ExactBackend backend(build_state_table(kCanonical, 1e-12, 2'000'000));
  const Expectation e = backend.expect(reg::linear_count(SiteSet::all(3)));
  CHECK(std::abs(e.value - 3.0) <= 1e-10 + e.uncertainty);
  CHECK(e.uncertainty >= 0.0);
  CHECK(backend.kind() == BackendKind::exact);
}
