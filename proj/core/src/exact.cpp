#include "poisson/exact.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "poisson/errors.hpp"

namespace poisson {
namespace {

constexpr std::size_t kBlockSize = 1024;

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct BlockResult {
  std::vector<CompensatedSum> sums;
  std::vector<double> sup;
};

[[noreturn]] void non_finite(const Configuration& eta, double v) {
  throw EvaluationError("non-finite value " + std::to_string(v) + " at configuration " +
                        to_string(eta));
}

// Σ_s p(s)·values(s)[j] for j < width, over fixed blocks. Block results are
// combined in block order so the answer does not depend on the worker count.
template <class Fill>
std::vector<ExactValue> expect_over_states(const StateTable& table, unsigned workers,
                                           std::size_t width, Fill&& fill,
                                           const std::vector<std::optional<double>>& bounds) {
  const std::size_t n_states = table.size();
  const std::size_t n_blocks = (n_states + kBlockSize - 1) / kBlockSize;
  std::vector<BlockResult> blocks(n_blocks);

  auto run_block = [&](std::size_t b) {
    BlockResult r{std::vector<CompensatedSum>(width), std::vector<double>(width, 0.0)};
    std::vector<double> values(width);
    const std::size_t end = std::min(n_states, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) {
      const Configuration& eta = table.state(i);
      fill(eta, std::span<double>(values));
      for (std::size_t j = 0; j < width; ++j) {
        const double v = values[j];
        if (!std::isfinite(v)) non_finite(eta, v);
        r.sums[j].add(table.prob(i) * v);
        r.sup[j] = std::max(r.sup[j], std::abs(v));
      }
    }
    blocks[b] = std::move(r);
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_blocks)));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < n_blocks; b += workers) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<ExactValue> out(width);
  for (std::size_t j = 0; j < width; ++j) {
    CompensatedSum total;
    double sup = 0.0;
    for (const auto& b : blocks) {
      total.add(b.sums[j].value());
      sup = std::max(sup, b.sup[j]);
    }
    const auto& bound = bounds[j];
    out[j].value = total.value();
    out[j].certified = bound.has_value();
    out[j].error_bound = table.tail_bound() * (bound ? *bound : sup);
  }
  return out;
}

}  // namespace

double poisson_tail(double lambda, int cap) {
  if (cap < 0) return 1.0;
  // log p_{cap+1}
  double k = static_cast<double>(cap) + 1.0;
  double term = std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
  double sum = 0.0;
  const double k_limit = k + 100.0 * lambda + 1000.0;
  while (k < k_limit) {
    sum += term;
    if (k > lambda && (term == 0.0 || term < sum * 1e-18)) break;
    k += 1.0;
    term *= lambda / k;
  }
  return std::min(sum, 1.0);
}

TruncationPlan plan_truncation(const GroundSpace& space, double tol, std::size_t budget) {
  if (!(tol > 0.0)) throw ConfigError("truncation tolerance must be > 0");
  if (budget < 1) throw ConfigError("enumeration budget must be >= 1");

  const std::size_t n = space.size();
  const double per_site = tol / static_cast<double>(n);
  std::vector<int> caps(n);
  std::vector<double> tails(n);
  for (std::size_t i = 0; i < n; ++i) {
    int K = 1;
    double t = poisson_tail(space.weights()[i], K);
    while (t > per_site) t = poisson_tail(space.weights()[i], ++K);
    caps[i] = K;
    tails[i] = t;
  }

  auto total = [&] {
    double s = 0.0;
    for (double t : tails) s += t;
    return s;
  };

  // Lower caps one at a time while the union bound stays within tol.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (caps[i] <= 1) continue;
      const double candidate = poisson_tail(space.weights()[i], caps[i] - 1);
      if (total() - tails[i] + candidate <= tol) {
        --caps[i];
        tails[i] = candidate;
        changed = true;
      }
    }
  }

  std::size_t count = 1;
  bool overflow = false;
  for (int K : caps) {
    const auto width = static_cast<std::size_t>(K) + 1;
    if (count > std::numeric_limits<std::size_t>::max() / width) {
      overflow = true;
      break;
    }
    count *= width;
  }
  if (overflow || count > budget) {
    const std::size_t reported = overflow ? std::numeric_limits<std::size_t>::max() : count;
    throw BudgetExceeded("truncation needs " + (overflow ? std::string("more than 2^64")
                                                         : std::to_string(count)) +
                             " states; budget is " + std::to_string(budget),
                         reported);
  }
  return TruncationPlan{std::move(caps), total(), count};
}

StateTable::StateTable(GroundSpace space, TruncationPlan plan)
    : space_(std::move(space)), plan_(std::move(plan)) {
  const std::size_t n = space_.size();
  if (plan_.caps.size() != n) throw ShapeError("truncation plan does not match the space");

  // log pmf per site and count
  std::vector<std::vector<double>> log_pmf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = space_.weights()[i];
    const double log_lambda = std::log(lambda);
    log_pmf[i].resize(static_cast<std::size_t>(plan_.caps[i]) + 1);
    log_pmf[i][0] = -lambda;
    for (int k = 1; k <= plan_.caps[i]; ++k) {
      log_pmf[i][k] = log_pmf[i][k - 1] + log_lambda - std::log(static_cast<double>(k));
    }
  }

  strides_.assign(n, 1);
  for (std::size_t i = n - 1; i-- > 0;) {
    strides_[i] = strides_[i + 1] * (static_cast<std::size_t>(plan_.caps[i + 1]) + 1);
  }
  const std::size_t count = strides_[0] * (static_cast<std::size_t>(plan_.caps[0]) + 1);
  plan_.state_count = count;

  states_.reserve(count);
  probs_.reserve(count);
  std::vector<int> k(n, 0);
  CompensatedSum total;
  CompensatedSum leak;
  for (std::size_t s = 0; s < count; ++s) {
    double lp = 0.0;
    double capped_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lp += log_pmf[i][k[i]];
      if (k[i] == plan_.caps[i]) capped_mass += space_.weights()[i];
    }
    const double p = std::exp(lp);
    states_.emplace_back(k);
    probs_.push_back(p);
    total.add(p);
    leak.add(p * capped_mass);

    for (std::size_t i = n; i-- > 0;) {
      if (++k[i] <= plan_.caps[i]) break;
      k[i] = 0;
    }
  }
  total_prob_ = total.value();
  boundary_leak_ = leak.value();
}

std::optional<std::size_t> StateTable::index_of(const Configuration& eta) const {
  if (eta.size() != space_.size()) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] > plan_.caps[i]) return std::nullopt;
    idx += static_cast<std::size_t>(eta[i]) * strides_[i];
  }
  return idx;
}

bool StateTable::interior(std::size_t i) const {
  const Configuration& s = states_[i];
  for (std::size_t z = 0; z < s.size(); ++z) {
    if (s[z] >= plan_.caps[z]) return false;
  }
  return true;
}

StateTable build_state_table(const GroundSpace& space, double tol, std::size_t budget) {
  return StateTable(space, plan_truncation(space, tol, budget));
}

ExactValue exact_expectation(const Functional& F, const StateTable& table, unsigned workers) {
  return expect_over_states(
      table, workers, 1, [&F](const Configuration& eta, std::span<double> out) { out[0] = F(eta); },
      {F.bound()})[0];
}

std::vector<ExactValue> exact_expectations(std::span<const Functional> fs, const StateTable& table,
                                           unsigned workers) {
  std::vector<std::optional<double>> bounds;
  for (const auto& f : fs) bounds.push_back(f.bound());
  return expect_over_states(
      table, workers, fs.size(),
      [fs](const Configuration& eta, std::span<double> out) {
        for (std::size_t j = 0; j < fs.size(); ++j) out[j] = fs[j](eta);
      },
      bounds);
}

ExactValue exact_pairing(const Functional& F, const RandomField& u, const StateTable& table,
                         unsigned workers) {
  const GroundSpace& space = table.space();
  return expect_over_states(
      table, workers, 1,
      [&](const Configuration& eta, std::span<double> out) {
        double s = 0.0;
        for (Site z = 0; z < space.size(); ++z) {
          s += space.weights()[z] * u(eta, z) * add_diff(F, eta, z);
        }
        out[0] = s;
      },
      {std::nullopt})[0];
}

Expectation ExactBackend::expect(const Functional& F) const {
  const ExactValue v = exact_expectation(F, table_, workers_);
  return Expectation{v.value, v.error_bound, table_.size()};
}

std::vector<Expectation> ExactBackend::expect_all(std::span<const Functional> fs) const {
  std::vector<Expectation> out;
  for (const auto& v : exact_expectations(fs, table_, workers_)) {
    out.push_back(Expectation{v.value, v.error_bound, table_.size()});
  }
  return out;
}

std::vector<double> state_vector(const Functional& F, const StateTable& table) {
  std::vector<double> out(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) out[i] = F(table.state(i));
  return out;
}

GeneratorMatrix::GeneratorMatrix(const StateTable& table) : boundary_leak_(table.boundary_leak()) {
  const GroundSpace& space = table.space();
  const auto& caps = table.plan().caps;
  const std::size_t n = space.size();

  std::vector<std::size_t> strides(n, 1);
  for (std::size_t i = n - 1; i-- > 0;) {
    strides[i] = strides[i + 1] * (static_cast<std::size_t>(caps[i + 1]) + 1);
  }

  row_start_.reserve(table.size() + 1);
  row_start_.push_back(0);
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t s = 0; s < table.size(); ++s) {
    const Configuration& eta = table.state(s);
    row.clear();
    double diagonal = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
      if (eta[z] < caps[z]) {
        row.emplace_back(s + strides[z], space.weights()[z]);
        diagonal -= space.weights()[z];
      }
      if (eta[z] > 0) {
        row.emplace_back(s - strides[z], static_cast<double>(eta[z]));
        diagonal -= static_cast<double>(eta[z]);
      }
    }
    row.emplace_back(s, diagonal);
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      columns_.push_back(c);
      values_.push_back(v);
    }
    row_start_.push_back(columns_.size());
  }
}

std::vector<double> GeneratorMatrix::apply(std::span<const double> f) const {
  if (f.size() != size()) throw ShapeError("generator applied to a vector of the wrong length");
  std::vector<double> out(size(), 0.0);
  for (std::size_t r = 0; r < size(); ++r) {
    double acc = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += values_[k] * f[columns_[k]];
    out[r] = acc;
  }
  return out;
}

double GeneratorMatrix::row_sum(std::size_t r) const {
  double acc = 0.0;
  for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += values_[k];
  return acc;
}

double GeneratorMatrix::entry(std::size_t r, std::size_t c) const {
  for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
    if (columns_[k] == c) return values_[k];
  }
  return 0.0;
}

GeneratorMatrix build_generator_matrix(const StateTable& table) { return GeneratorMatrix(table); }

PseudoInverse ou_pseudo_inverse(const Functional& F, const StateTable& table, double tol,
                                double max_leak) {
  PseudoInverse out;
  out.boundary_leak = table.boundary_leak();
  if (out.boundary_leak > max_leak) {
    throw SolverError("boundary leak " + std::to_string(out.boundary_leak) +
                          " exceeds the allowed " + std::to_string(max_leak) +
                          "; tighten the truncation tolerance",
                      std::numeric_limits<double>::infinity());
  }

  const std::vector<double> f = state_vector(F, table);
  const std::size_t n = f.size();
  CompensatedSum m;
  for (std::size_t i = 0; i < n; ++i) m.add(table.prob(i) * f[i]);
  out.mean = m.value() / table.total_prob();
  out.centered.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.centered[i] = f[i] - out.mean;

  const GeneratorMatrix M(table);
  out.solution.assign(n, 0.0);
  if (n > 1) {
    // The kernel is the constants: pin the most probable state to zero and
    // solve the remaining rows, then shift to Π-mean zero.
    const auto pin = static_cast<std::size_t>(
        std::max_element(table.probs().begin(), table.probs().end()) - table.probs().begin());
    auto reduced = [pin](std::size_t i) { return i < pin ? i : i - 1; };

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(M.values().size());
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n - 1));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == pin) continue;
      rhs[static_cast<Eigen::Index>(reduced(r))] = out.centered[r];
      for (std::size_t k = M.row_start()[r]; k < M.row_start()[r + 1]; ++k) {
        const std::size_t c = M.columns()[k];
        if (c == pin) continue;
        triplets.emplace_back(static_cast<Eigen::Index>(reduced(r)),
                              static_cast<Eigen::Index>(reduced(c)), M.values()[k]);
      }
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1));
    A.setFromTriplets(triplets.begin(), triplets.end());
    A.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
      throw SolverError("sparse LU factorization of the generator failed",
                        std::numeric_limits<double>::infinity());
    }
    const Eigen::VectorXd x = lu.solve(rhs);
    for (std::size_t r = 0; r < n; ++r) {
      out.solution[r] = r == pin ? 0.0 : x[static_cast<Eigen::Index>(reduced(r))];
    }
    CompensatedSum gm;
    for (std::size_t i = 0; i < n; ++i) gm.add(table.prob(i) * out.solution[i]);
    const double shift = gm.value() / table.total_prob();
    for (double& g : out.solution) g -= shift;
  }

  const std::vector<double> Mg = M.apply(out.solution);
  for (std::size_t i = 0; i < n; ++i) {
    if (table.interior(i)) out.residual = std::max(out.residual, std::abs(Mg[i] - out.centered[i]));
  }
  if (!(out.residual <= tol)) {
    throw SolverError("pseudo-inverse residual " + std::to_string(out.residual) +
                          " exceeds tolerance " + std::to_string(tol),
                      out.residual);
  }
  return out;
}

}  // namespace poisson
