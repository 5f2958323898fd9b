#pragma once

// Seeded Poisson sampler and Monte Carlo expectation engine.
//
// Sample i always draws from its own stream keyed by (seed, i), so the set of
// samples is the same for any worker count. Workers take contiguous sample
// blocks and their accumulators are merged in worker order.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "poisson/backend.hpp"
#include "poisson/functionals.hpp"
#include "poisson/ground.hpp"

namespace poisson {

// SplitMix64 as a UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Independent stream for one (seed, index) pair.
SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) noexcept;

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  unsigned workers = 1;
};

struct Estimate {
  double mean = 0.0;
  // sample standard deviation / sqrt(n)
  double std_error = 0.0;
  std::size_t n = 0;
};

// Independent Poisson(λ_i) count per site.
Configuration sample_configuration(const GroundSpace& space, SplitMix64& rng);

// The first `count` configurations of the stream family for `seed`.
std::vector<Configuration> sample_configurations(const GroundSpace& space, std::uint64_t seed,
                                                 std::size_t count);

// Throws EvaluationError (echoing the configuration) on a non-finite value,
// ConfigError if samples < 2.
Estimate mc_expectation(const Functional& F, const GroundSpace& space, const SamplerConfig& cfg);

// Several functionals over the same samples.
std::vector<Estimate> mc_expectations(std::span<const Functional> fs, const GroundSpace& space,
                                      const SamplerConfig& cfg);

// Paired per-sample defect Σ_z k_z u(η, z) − Σ_z λ_z u(η + δ_z, z).
Estimate mc_mecke_defect(const RandomField& u, const GroundSpace& space, const SamplerConfig& cfg);

class MonteCarloBackend final : public Backend {
 public:
  MonteCarloBackend(GroundSpace space, SamplerConfig cfg)
      : space_(std::move(space)), cfg_(cfg) {}

  BackendKind kind() const noexcept override { return BackendKind::monte_carlo; }
  const GroundSpace& space() const noexcept override { return space_; }
  Expectation expect(const Functional& F) const override;
  std::vector<Expectation> expect_all(std::span<const Functional> fs) const override;

  const SamplerConfig& config() const noexcept { return cfg_; }

 private:
  GroundSpace space_;
  SamplerConfig cfg_;
};

}  // namespace poisson
