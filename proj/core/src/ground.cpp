#include "poisson/ground.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "poisson/errors.hpp"

namespace poisson {

GroundSpace::GroundSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidSpace("ground space needs at least one site");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || !(w > 0.0)) {
      std::ostringstream os;
      os << "site " << i + 1 << " has weight " << w << "; weights must be finite and > 0";
      throw InvalidSpace(os.str());
    }
  }
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double GroundSpace::weight(Site z) const {
  if (z >= weights_.size()) throw SiteOutOfRange("site " + std::to_string(z) + " out of range");
  return weights_[z];
}

SiteSet::SiteSet(std::initializer_list<Site> sites) : SiteSet(std::vector<Site>(sites)) {}

SiteSet::SiteSet(std::vector<Site> sites) : members_(std::move(sites)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

SiteSet SiteSet::all(std::size_t n) {
  std::vector<Site> m(n);
  std::iota(m.begin(), m.end(), Site{0});
  return SiteSet(std::move(m));
}

bool SiteSet::contains(Site z) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), z);
}

std::size_t SiteSet::extent() const noexcept {
  return members_.empty() ? 0 : members_.back() + 1;
}

void SiteSet::validate(std::size_t n) const {
  if (extent() > n) {
    throw InvalidSiteSet("site set refers to site " + std::to_string(members_.back()) +
                         " but the space has " + std::to_string(n) + " sites");
  }
}

Configuration::Configuration(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int k : counts_) {
    if (k < 0) throw ShapeError("configuration multiplicities must be non-negative");
  }
}

int Configuration::at(Site z) const {
  if (z >= counts_.size()) throw SiteOutOfRange("site " + std::to_string(z) + " out of range");
  return counts_[z];
}

long Configuration::total_points() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), 0L);
}

double measure_of(const GroundSpace& space, const SiteSet& sites) {
  sites.validate(space.size());
  double mass = 0.0;
  for (Site z : sites.members()) mass += space.weights()[z];
  return mass;
}

long count_of(const Configuration& eta, const SiteSet& sites) {
  if (sites.extent() > eta.size()) {
    throw ShapeError("site set extends past a configuration of " + std::to_string(eta.size()) +
                     " sites");
  }
  long n = 0;
  for (Site z : sites.members()) n += eta[z];
  return n;
}

Configuration add_point(const Configuration& eta, Site z) {
  if (z >= eta.size()) throw SiteOutOfRange("add_point: site " + std::to_string(z) + " out of range");
  Configuration out = eta;
  ++out.counts_[z];
  return out;
}

Configuration drop_point(const Configuration& eta, Site z) {
  if (z >= eta.size()) throw SiteOutOfRange("drop_point: site " + std::to_string(z) + " out of range");
  if (eta[z] == 0) throw PointAbsent("drop_point: no point at site " + std::to_string(z));
  Configuration out = eta;
  --out.counts_[z];
  return out;
}

std::string to_string(const Configuration& eta) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < eta.size(); ++i) os << (i ? "," : "") << eta[i];
  os << ')';
  return os.str();
}

void to_json(nlohmann::json& j, const GroundSpace& space) {
  j = nlohmann::json{{"weights", std::vector<double>(space.weights().begin(), space.weights().end())}};
}

GroundSpace space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weights") || !j.at("weights").is_array()) {
    throw ConfigError("space: expected an object with a \"weights\" array");
  }
  std::vector<double> w;
  for (const auto& x : j.at("weights")) {
    if (!x.is_number()) throw ConfigError("space.weights: entries must be numbers");
    w.push_back(x.get<double>());
  }
  try {
    return GroundSpace(std::move(w));
  } catch (const InvalidSpace& e) {
    throw ConfigError(std::string("space.weights: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const Configuration& eta) {
  j = nlohmann::json{{"counts", std::vector<int>(eta.counts().begin(), eta.counts().end())}};
}

Configuration configuration_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("counts") || !j.at("counts").is_array()) {
    throw ConfigError("configuration: expected an object with a \"counts\" array");
  }
  std::vector<int> counts;
  for (const auto& x : j.at("counts")) {
    if (!x.is_number_integer()) throw ConfigError("configuration.counts: entries must be integers");
    counts.push_back(x.get<int>());
  }
  try {
    return Configuration(std::move(counts));
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("configuration.counts: ") + e.what());
  }
}

SiteSet site_set_from_labels(const nlohmann::json& labels, std::size_t n) {
  if (!labels.is_array()) throw ConfigError("site set must be an array of 1-based site labels");
  std::vector<Site> sites;
  for (const auto& x : labels) {
    if (!x.is_number_integer()) throw ConfigError("site labels must be integers");
    const long label = x.get<long>();
    if (label < 1 || static_cast<std::size_t>(label) > n) {
      throw ConfigError("site label " + std::to_string(label) + " outside 1.." + std::to_string(n));
    }
    sites.push_back(static_cast<Site>(label - 1));
  }
  return SiteSet(std::move(sites));
}

nlohmann::json site_set_labels(const SiteSet& sites) {
  nlohmann::json out = nlohmann::json::array();
  for (Site z : sites.members()) out.push_back(z + 1);
  return out;
}

}  // namespace poisson
