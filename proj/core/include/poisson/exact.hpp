#pragma once

// Exact expectation oracle on a truncated product-Poisson state space, plus
// the matrix of the Ornstein-Uhlenbeck generator on that space.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "poisson/backend.hpp"
#include "poisson/functionals.hpp"
#include "poisson/ground.hpp"

namespace poisson {

// Per-site caps K_i and the union bound Σ_i P(Poisson(λ_i) > K_i).
struct TruncationPlan {
  std::vector<int> caps;
  double tail_bound = 0.0;
  std::size_t state_count = 0;
};

// P(Poisson(lambda) > cap), summed over the tail directly.
double poisson_tail(double lambda, int cap);

// Smallest caps (each >= 1) whose union tail bound is <= tol. Throws
// BudgetExceeded if Π(K_i + 1) > budget.
TruncationPlan plan_truncation(const GroundSpace& space, double tol, std::size_t budget);

// Every configuration under the caps, in lexicographic order (last site
// varies fastest), with its product-Poisson probability.
class StateTable {
 public:
  StateTable(GroundSpace space, TruncationPlan plan);

  const GroundSpace& space() const noexcept { return space_; }
  const TruncationPlan& plan() const noexcept { return plan_; }
  std::size_t size() const noexcept { return states_.size(); }
  const Configuration& state(std::size_t i) const { return states_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }
  double total_prob() const noexcept { return total_prob_; }
  double tail_bound() const noexcept { return plan_.tail_bound; }
  // Σ_s p(s)·Σ_{z : k_z = K_z} λ_z: probability flux through the cap faces.
  double boundary_leak() const noexcept { return boundary_leak_; }

  std::optional<std::size_t> index_of(const Configuration& eta) const;
  // No site at its cap.
  bool interior(std::size_t i) const;

 private:
  GroundSpace space_;
  TruncationPlan plan_;
  std::vector<Configuration> states_;
  std::vector<double> probs_;
  std::vector<std::size_t> strides_;
  double total_prob_ = 0.0;
  double boundary_leak_ = 0.0;
};

StateTable build_state_table(const GroundSpace& space, double tol, std::size_t budget);

struct ExactValue {
  double value = 0.0;
  // tail_bound · sup|F|. Rigorous when F carries a certified bound, otherwise
  // the sup is taken over the enumerated states only.
  double error_bound = 0.0;
  bool certified = false;
};

// Σ_s p(s)·F(s) with compensated summation over fixed-size state blocks; the
// result does not depend on `workers`.
ExactValue exact_expectation(const Functional& F, const StateTable& table, unsigned workers = 1);

std::vector<ExactValue> exact_expectations(std::span<const Functional> fs, const StateTable& table,
                                           unsigned workers = 1);

// E Σ_z λ_z·u(η, z)·D⁺_zF(η).
ExactValue exact_pairing(const Functional& F, const RandomField& u, const StateTable& table,
                         unsigned workers = 1);

class ExactBackend final : public Backend {
 public:
  explicit ExactBackend(StateTable table, unsigned workers = 1)
      : table_(std::move(table)), workers_(workers) {}

  BackendKind kind() const noexcept override { return BackendKind::exact; }
  const GroundSpace& space() const noexcept override { return table_.space(); }
  Expectation expect(const Functional& F) const override;
  std::vector<Expectation> expect_all(std::span<const Functional> fs) const override;

  const StateTable& table() const noexcept { return table_; }

 private:
  StateTable table_;
  unsigned workers_;
};

// Values of F at every enumerated state.
std::vector<double> state_vector(const Functional& F, const StateTable& table);

// Generator L on the truncated box in CSR form:
//   (Mf)(s) = Σ_z λ_z (f(s + δ_z) − f(s)) + Σ_z k_z (f(s − δ_z) − f(s)),
// where an upward jump that leaves the box is dropped along with its diagonal
// term. Every row therefore sums to zero; the flux lost at the caps is
// reported as the table's boundary_leak.
class GeneratorMatrix {
 public:
  explicit GeneratorMatrix(const StateTable& table);

  std::size_t size() const noexcept { return row_start_.size() - 1; }
  double boundary_leak() const noexcept { return boundary_leak_; }

  std::vector<double> apply(std::span<const double> f) const;
  double row_sum(std::size_t row) const;
  double entry(std::size_t row, std::size_t col) const;

  std::span<const std::size_t> row_start() const noexcept { return row_start_; }
  std::span<const std::size_t> columns() const noexcept { return columns_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
  double boundary_leak_ = 0.0;
};

GeneratorMatrix build_generator_matrix(const StateTable& table);

struct PseudoInverse {
  // g with M g = F − E F and Σ_s p(s) g(s) = 0.
  std::vector<double> solution;
  // F − E F on the box (box-normalized mean).
  std::vector<double> centered;
  double mean = 0.0;
  // max over interior states of |M g − (F − E F)|.
  double residual = 0.0;
  double boundary_leak = 0.0;
};

// Solves L g = F − E F on the truncated box. Throws SolverError if the
// residual exceeds tol or the boundary leak exceeds max_leak.
PseudoInverse ou_pseudo_inverse(const Functional& F, const StateTable& table, double tol,
                                double max_leak = 1e-6);

}  // namespace poisson
