#include "poisson/functionals.hpp"

#include <utility>

namespace poisson {

Functional::Functional(std::string name, nlohmann::json params, Eval eval,
                       std::optional<double> bound, bool nonnegative)
    : name_(std::move(name)),
      params_(std::move(params)),
      eval_(std::move(eval)),
      bound_(bound),
      nonnegative_(nonnegative) {}

nlohmann::json Functional::describe() const {
  nlohmann::json j = params_.is_object() ? params_ : nlohmann::json::object();
  j["name"] = name_;
  return j;
}

RandomField::RandomField(std::string name, nlohmann::json params, Eval eval)
    : name_(std::move(name)), params_(std::move(params)), eval_(std::move(eval)) {}

nlohmann::json RandomField::describe() const {
  nlohmann::json j = params_.is_object() ? params_ : nlohmann::json::object();
  j["name"] = name_;
  return j;
}

double add_diff(const Functional& F, const Configuration& eta, Site z) {
  return F(add_point(eta, z)) - F(eta);
}

double drop_diff(const Functional& F, const Configuration& eta, Site z) {
  if (eta.at(z) == 0) return 0.0;
  return F(eta) - F(drop_point(eta, z));
}

double second_add_diff(const RandomField& u, const Configuration& eta, Site z, Site zp) {
  return u(add_point(eta, z), zp) - u(eta, zp);
}

RandomField derivative_field(const Functional& F) {
  return RandomField("derivative", nlohmann::json{{"functional", F.describe()}},
                     [F](const Configuration& eta, Site z) { return add_diff(F, eta, z); });
}

RandomField shifted_derivative_field(const RandomField& u, Site z) {
  return RandomField("add_diff_of_field",
                     nlohmann::json{{"field", u.describe()}, {"site", z + 1}},
                     [u, z](const Configuration& eta, Site zp) {
                       return second_add_diff(u, eta, z, zp);
                     });
}

}  // namespace poisson
