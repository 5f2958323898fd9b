#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "poisson/functionals.hpp"
#include "poisson/ground.hpp"

namespace poisson {

enum class BackendKind { exact, monte_carlo };

std::string_view to_string(BackendKind kind) noexcept;

// E_Π[F] as computed by one of the engines. `uncertainty` is the truncation
// error bound for the exact engine and the standard error for Monte Carlo;
// `n` is the state count or the sample count respectively.
struct Expectation {
  double value = 0.0;
  double uncertainty = 0.0;
  std::size_t n = 0;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendKind kind() const noexcept = 0;
  virtual const GroundSpace& space() const noexcept = 0;
  virtual Expectation expect(const Functional& F) const = 0;
  // Expectations of several functionals from one pass over the same states or
  // samples, so differences between them are paired.
  virtual std::vector<Expectation> expect_all(std::span<const Functional> fs) const;
};

}  // namespace poisson
