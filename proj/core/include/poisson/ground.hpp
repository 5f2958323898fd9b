#pragma once

// Finite ground space (sites with intensity weights), point configurations
// and site subsets.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace poisson {

// Zero-based site index. JSON and the CLI use one-based labels.
using Site = std::size_t;

class GroundSpace {
 public:
  // Throws InvalidSpace unless weights is non-empty, finite and strictly positive.
  explicit GroundSpace(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(Site z) const;
  std::span<const double> weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return total_mass_; }

  bool operator==(const GroundSpace&) const = default;

 private:
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

// Sorted, duplicate-free set of sites. Range is checked against a space or
// configuration at the point of use.
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<Site> sites);
  explicit SiteSet(std::vector<Site> sites);

  static SiteSet all(std::size_t n);

  const std::vector<Site>& members() const noexcept { return members_; }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Site z) const noexcept;
  // Largest member + 1, or 0 for the empty set.
  std::size_t extent() const noexcept;
  // Throws InvalidSiteSet if any member is >= n.
  void validate(std::size_t n) const;

  bool operator==(const SiteSet&) const = default;

 private:
  std::vector<Site> members_;
};

// Counting measure on the ground space: multiplicity per site.
class Configuration {
 public:
  Configuration() = default;
  // Throws ShapeError on a negative multiplicity.
  explicit Configuration(std::vector<int> counts);
  static Configuration empty(std::size_t n) { return Configuration(std::vector<int>(n, 0)); }

  std::size_t size() const noexcept { return counts_.size(); }
  int operator[](Site z) const noexcept { return counts_[z]; }
  int at(Site z) const;
  std::span<const int> counts() const noexcept { return counts_; }
  long total_points() const noexcept;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;

 private:
  friend Configuration add_point(const Configuration&, Site);
  friend Configuration drop_point(const Configuration&, Site);
  std::vector<int> counts_;
};

// ν(B). Throws InvalidSiteSet when B leaves the space.
double measure_of(const GroundSpace& space, const SiteSet& sites);
// η(B). Throws ShapeError when B leaves the configuration.
long count_of(const Configuration& eta, const SiteSet& sites);
// η + δ_z.
Configuration add_point(const Configuration& eta, Site z);
// η − δ_z; throws PointAbsent when k_z = 0.
Configuration drop_point(const Configuration& eta, Site z);

std::string to_string(const Configuration& eta);

// {"weights": [...]} and {"counts": [...]}.
void to_json(nlohmann::json& j, const GroundSpace& space);
GroundSpace space_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const Configuration& eta);
Configuration configuration_from_json(const nlohmann::json& j);

// One-based site labels <-> SiteSet.
SiteSet site_set_from_labels(const nlohmann::json& labels, std::size_t n);
nlohmann::json site_set_labels(const SiteSet& sites);

}  // namespace poisson
