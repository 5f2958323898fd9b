#include "poisson/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <span>
#include <string>
#include <thread>

#include "poisson/errors.hpp"

namespace poisson {
namespace {

// Welford running moments; merged with Chan's pairwise update.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

std::uint64_t mix(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One sample stream, `width` values per sample.
template <class Fill>
std::vector<Estimate> run_paired(const GroundSpace& space, const SamplerConfig& cfg,
                                 std::size_t width, Fill&& fill) {
  if (cfg.samples < 2) throw ConfigError("Monte Carlo needs at least 2 samples");
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(cfg.workers, cfg.samples)));

  std::vector<std::vector<Moments>> partial(workers, std::vector<Moments>(width));
  auto run = [&](unsigned w) {
    const std::size_t begin = cfg.samples * w / workers;
    const std::size_t end = cfg.samples * (w + 1) / workers;
    std::vector<double> values(width);
    auto& m = partial[w];
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = stream_for(cfg.seed, i);
      const Configuration eta = sample_configuration(space, rng);
      fill(eta, std::span<double>(values));
      for (std::size_t j = 0; j < width; ++j) {
        const double v = values[j];
        if (!std::isfinite(v)) {
          throw EvaluationError("non-finite value " + std::to_string(v) + " at configuration " +
                                to_string(eta) + " (sample " + std::to_string(i) + ")");
        }
        m[j].add(v);
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run(w);
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

  std::vector<Estimate> out(width);
  for (std::size_t j = 0; j < width; ++j) {
    Moments total;
    for (const auto& m : partial) total.merge(m[j]);
    const double variance = total.m2 / static_cast<double>(total.n - 1);
    out[j] = Estimate{total.mean,
                      std::sqrt(std::max(0.0, variance) / static_cast<double>(total.n)), total.n};
  }
  return out;
}

}  // namespace

SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
}

Configuration sample_configuration(const GroundSpace& space, SplitMix64& rng) {
  std::vector<int> counts(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::poisson_distribution<int> draw(space.weights()[i]);
    counts[i] = draw(rng);
  }
  return Configuration(std::move(counts));
}

std::vector<Configuration> sample_configurations(const GroundSpace& space, std::uint64_t seed,
                                                 std::size_t count) {
  std::vector<Configuration> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng = stream_for(seed, i);
    out.push_back(sample_configuration(space, rng));
  }
  return out;
}

Estimate mc_expectation(const Functional& F, const GroundSpace& space, const SamplerConfig& cfg) {
  return run_paired(space, cfg, 1, [&F](const Configuration& eta, std::span<double> out) {
    out[0] = F(eta);
  })[0];
}

Estimate mc_mecke_defect(const RandomField& u, const GroundSpace& space, const SamplerConfig& cfg) {
  return run_paired(space, cfg, 1, [&](const Configuration& eta, std::span<double> out) {
    double d = 0.0;
    for (Site z = 0; z < space.size(); ++z) {
      d += eta[z] * u(eta, z) - space.weights()[z] * u(add_point(eta, z), z);
    }
    out[0] = d;
  })[0];
}

std::vector<Estimate> mc_expectations(std::span<const Functional> fs, const GroundSpace& space,
                                      const SamplerConfig& cfg) {
  return run_paired(space, cfg, fs.size(), [fs](const Configuration& eta, std::span<double> out) {
    for (std::size_t j = 0; j < fs.size(); ++j) out[j] = fs[j](eta);
  });
}

Expectation MonteCarloBackend::expect(const Functional& F) const {
  const Estimate e = mc_expectation(F, space_, cfg_);
  return Expectation{e.mean, e.std_error, e.n};
}

std::vector<Expectation> MonteCarloBackend::expect_all(std::span<const Functional> fs) const {
  std::vector<Expectation> out;
  for (const auto& e : mc_expectations(fs, space_, cfg_)) {
    out.push_back(Expectation{e.mean, e.std_error, e.n});
  }
  return out;
}

}  // namespace poisson
