#include "poisson/registry.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "poisson/errors.hpp"

namespace poisson::registry {
namespace {

using nlohmann::json;

double ipow(double x, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= x;
  return r;
}

double field_weight(const std::vector<double>& g, Site z) {
  if (z >= g.size()) throw ShapeError("field profile has no entry for site " + std::to_string(z));
  return g[z];
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + ": missing key \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

long integer(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  return v.get<long>();
}

SiteSet sites(const json& j, std::size_t n, const std::string& path) {
  try {
    return site_set_from_labels(require(j, "B", path), n);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ".B: " + e.what());
  }
}

std::vector<double> profile(const json& j, std::size_t n, const std::string& path) {
  const json& g = require(j, "g", path);
  if (!g.is_array() || g.size() != n) {
    throw ConfigError(path + ".g: expected an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& x : g) {
    if (!x.is_number()) throw ConfigError(path + ".g: entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

double apply(SmoothMap phi, double x) {
  switch (phi) {
    case SmoothMap::identity: return x;
    case SmoothMap::square: return x * x;
    case SmoothMap::tanh: return std::tanh(x);
  }
  return x;
}

double apply_derivative(SmoothMap phi, double x) {
  switch (phi) {
    case SmoothMap::identity: return 1.0;
    case SmoothMap::square: return 2.0 * x;
    case SmoothMap::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

std::string to_string(SmoothMap phi) {
  switch (phi) {
    case SmoothMap::identity: return "identity";
    case SmoothMap::square: return "square";
    case SmoothMap::tanh: return "tanh";
  }
  return "identity";
}

SmoothMap smooth_map_from_string(const std::string& name) {
  if (name == "identity") return SmoothMap::identity;
  if (name == "square") return SmoothMap::square;
  if (name == "tanh") return SmoothMap::tanh;
  throw ConfigError("unknown smooth map \"" + name + "\" (expected identity, square or tanh)");
}

Functional constant(double value) {
  return Functional("constant", json{{"value", value}},
                    [value](const Configuration&) { return value; }, std::abs(value),
                    value >= 0.0);
}

Functional linear_count(SiteSet B) {
  json params{{"B", site_set_labels(B)}};
  return Functional("linear_count", std::move(params),
                    [B = std::move(B)](const Configuration& eta) {
                      return static_cast<double>(count_of(eta, B));
                    },
                    std::nullopt, true);
}

Functional poly_count(SiteSet B, int degree) {
  if (degree < 0) throw ConfigError("poly_count: degree must be >= 0");
  json params{{"B", site_set_labels(B)}, {"degree", degree}};
  std::optional<double> bound;
  if (degree == 0) bound = 1.0;
  return Functional("poly_count", std::move(params),
                    [B = std::move(B), degree](const Configuration& eta) {
                      return ipow(static_cast<double>(count_of(eta, B)), degree);
                    },
                    bound, true);
}

Functional bounded_sigmoid(SiteSet B, double scale) {
  json params{{"B", site_set_labels(B)}, {"scale", scale}};
  return Functional("bounded_sigmoid", std::move(params),
                    [B = std::move(B), scale](const Configuration& eta) {
                      return std::tanh(scale * static_cast<double>(count_of(eta, B)));
                    },
                    1.0, scale >= 0.0);
}

Functional indicator_leq(SiteSet B, long threshold) {
  json params{{"B", site_set_labels(B)}, {"m", threshold}};
  return Functional("indicator_leq", std::move(params),
                    [B = std::move(B), threshold](const Configuration& eta) {
                      return count_of(eta, B) <= threshold ? 1.0 : 0.0;
                    },
                    1.0, true);
}

Functional product(std::vector<Functional> factors) {
  json described = json::array();
  std::optional<double> bound = 1.0;
  bool nonnegative = true;
  for (const auto& f : factors) {
    described.push_back(f.describe());
    if (bound && f.bound()) {
      *bound *= *f.bound();
    } else {
      bound.reset();
    }
    nonnegative = nonnegative && f.nonnegative();
  }
  return Functional("product", json{{"factors", std::move(described)}},
                    [factors = std::move(factors)](const Configuration& eta) {
                      double v = 1.0;
                      for (const auto& f : factors) v *= f(eta);
                      return v;
                    },
                    bound, nonnegative);
}

Functional affine(std::vector<AffineTerm> terms, double offset) {
  json described = json::array();
  std::optional<double> bound = std::abs(offset);
  bool nonnegative = offset >= 0.0;
  for (const auto& t : terms) {
    described.push_back(json{{"coef", t.coefficient}, {"functional", t.functional.describe()}});
    if (bound && t.functional.bound()) {
      *bound += std::abs(t.coefficient) * *t.functional.bound();
    } else {
      bound.reset();
    }
    nonnegative = nonnegative && t.coefficient >= 0.0 && t.functional.nonnegative();
  }
  return Functional("affine", json{{"terms", std::move(described)}, {"offset", offset}},
                    [terms = std::move(terms), offset](const Configuration& eta) {
                      double v = offset;
                      for (const auto& t : terms) v += t.coefficient * t.functional(eta);
                      return v;
                    },
                    bound, nonnegative);
}

Functional compose(SmoothMap phi, Functional F) {
  std::optional<double> bound;
  bool nonnegative = false;
  switch (phi) {
    case SmoothMap::identity:
      bound = F.bound();
      nonnegative = F.nonnegative();
      break;
    case SmoothMap::square:
      if (F.bound()) bound = *F.bound() * *F.bound();
      nonnegative = true;
      break;
    case SmoothMap::tanh:
      bound = 1.0;
      nonnegative = F.nonnegative();
      break;
  }
  json params{{"map", to_string(phi)}, {"functional", F.describe()}};
  return Functional("compose", std::move(params),
                    [phi, F = std::move(F)](const Configuration& eta) { return apply(phi, F(eta)); },
                    bound, nonnegative);
}

Functional compose_derivative(SmoothMap phi, Functional F) {
  std::optional<double> bound;
  bool nonnegative = false;
  switch (phi) {
    case SmoothMap::identity:
      bound = 1.0;
      nonnegative = true;
      break;
    case SmoothMap::square:
      if (F.bound()) bound = 2.0 * *F.bound();
      nonnegative = F.nonnegative();
      break;
    case SmoothMap::tanh:
      bound = 1.0;
      nonnegative = true;
      break;
  }
  json params{{"map", to_string(phi)}, {"functional", F.describe()}};
  return Functional("compose_derivative", std::move(params),
                    [phi, F = std::move(F)](const Configuration& eta) {
                      return apply_derivative(phi, F(eta));
                    },
                    bound, nonnegative);
}

RandomField zero_field() {
  return RandomField("zero", json::object(), [](const Configuration&, Site) { return 0.0; });
}

RandomField deterministic_field(std::vector<double> g) {
  json params{{"g", g}};
  return RandomField("deterministic", std::move(params),
                     [g = std::move(g)](const Configuration&, Site z) { return field_weight(g, z); });
}

RandomField scaled_field(Functional F, std::vector<double> g) {
  json params{{"functional", F.describe()}, {"g", g}};
  return RandomField("scaled", std::move(params),
                     [F = std::move(F), g = std::move(g)](const Configuration& eta, Site z) {
                       return F(eta) * field_weight(g, z);
                     });
}

RandomField site_count_field(int degree) {
  if (degree < 0) throw ConfigError("site_count: degree must be >= 0");
  return RandomField("site_count", json{{"degree", degree}},
                     [degree](const Configuration& eta, Site z) {
                       return ipow(static_cast<double>(eta.at(z)), degree);
                     });
}

RandomField local_sigmoid_field(double scale) {
  return RandomField("local_sigmoid", json{{"scale", scale}},
                     [scale](const Configuration& eta, Site z) {
                       return std::tanh(scale * static_cast<double>(eta.at(z)));
                     });
}

Functional functional_from_json(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const json& name_j = require(j, "name", path);
  if (!name_j.is_string()) throw ConfigError(path + ".name: expected a string");
  const std::string name = name_j.get<std::string>();

  if (name == "constant") return constant(number(j, "value", path));
  if (name == "linear_count") return linear_count(sites(j, n, path));
  if (name == "poly_count") {
    const long d = integer(j, "degree", path);
    if (d < 0 || d > 16) throw ConfigError(path + ".degree: must be in 0..16");
    return poly_count(sites(j, n, path), static_cast<int>(d));
  }
  if (name == "bounded_sigmoid") return bounded_sigmoid(sites(j, n, path), number(j, "scale", path));
  if (name == "indicator_leq") return indicator_leq(sites(j, n, path), integer(j, "m", path));
  if (name == "product") {
    const json& fs = require(j, "factors", path);
    if (!fs.is_array() || fs.empty()) throw ConfigError(path + ".factors: expected a non-empty array");
    std::vector<Functional> factors;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      factors.push_back(functional_from_json(fs[i], n, path + ".factors[" + std::to_string(i) + "]"));
    }
    return product(std::move(factors));
  }
  if (name == "affine") {
    const json& ts = require(j, "terms", path);
    if (!ts.is_array()) throw ConfigError(path + ".terms: expected an array");
    std::vector<AffineTerm> terms;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string tp = path + ".terms[" + std::to_string(i) + "]";
      terms.push_back(AffineTerm{number(ts[i], "coef", tp),
                                 functional_from_json(require(ts[i], "functional", tp), n,
                                                      tp + ".functional")});
    }
    const double offset = j.contains("offset") ? number(j, "offset", path) : 0.0;
    return affine(std::move(terms), offset);
  }
  if (name == "compose") {
    const json& m = require(j, "map", path);
    if (!m.is_string()) throw ConfigError(path + ".map: expected a string");
    SmoothMap phi;
    try {
      phi = smooth_map_from_string(m.get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(path + ".map: " + e.what());
    }
    return compose(phi, functional_from_json(require(j, "functional", path), n, path + ".functional"));
  }
  throw ConfigError(path + ": unknown functional \"" + name + "\"");
}

RandomField field_from_json(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const json& name_j = require(j, "name", path);
  if (!name_j.is_string()) throw ConfigError(path + ".name: expected a string");
  const std::string name = name_j.get<std::string>();

  if (name == "zero") return zero_field();
  if (name == "deterministic") return deterministic_field(profile(j, n, path));
  if (name == "scaled") {
    Functional F = functional_from_json(require(j, "functional", path), n, path + ".functional");
    std::vector<double> g = j.contains("g") ? profile(j, n, path) : std::vector<double>(n, 1.0);
    return scaled_field(std::move(F), std::move(g));
  }
  if (name == "site_count") {
    const long d = integer(j, "degree", path);
    if (d < 0 || d > 16) throw ConfigError(path + ".degree: must be in 0..16");
    return site_count_field(static_cast<int>(d));
  }
  if (name == "local_sigmoid") return local_sigmoid_field(number(j, "scale", path));
  if (name == "derivative") {
    return derivative_field(
        functional_from_json(require(j, "functional", path), n, path + ".functional"));
  }
  throw ConfigError(path + ": unknown field \"" + name + "\"");
}

}  // namespace poisson::registry
