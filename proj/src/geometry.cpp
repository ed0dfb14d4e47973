#include "uavcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uavcov {

namespace {

// (r1^2 + gamma^2)^q - gamma^2, evaluated as gamma^2 * expm1(q*ln(r1^2+gamma^2) - ln(gamma^2))
// so that the difference keeps full precision when the two terms nearly cancel.
double excess_squared(double r1, double gamma, double q)
{
  const double g2 = gamma * gamma;
  const double y2 = r1 * r1 + g2;
  if (g2 == 0.0) {
    return std::pow(y2, q);
  }
  return g2 * std::expm1(q * std::log(y2) - std::log(g2));
}

} // namespace

LinkGeometry LinkGeometry::from(const ScenarioConfig& cfg)
{
  return {cone_radius(cfg.omega, cfg.gamma), antenna_gain(cfg.omega), cfg.gamma, cfg.alpha_los,
          cfg.alpha_nlos};
}

double cone_radius(double omega, double gamma) { return std::tan(0.5 * omega) * gamma; }

double antenna_gain(double omega) { return 16.0 * std::numbers::pi / (omega * omega); }

double association_probability(double lambda, double u)
{
  return -std::expm1(-std::numbers::pi * lambda * u * u);
}

double bound_nlos_given_los_serving(double r1, const LinkGeometry& geom)
{
  const double e = excess_squared(r1, geom.gamma, geom.alpha_los / geom.alpha_nlos);
  return std::sqrt(std::max(0.0, e));
}

double bound_los_given_nlos_serving(double r1, const LinkGeometry& geom)
{
  const double e = excess_squared(r1, geom.gamma, geom.alpha_nlos / geom.alpha_los);
  return std::min(geom.u, std::sqrt(std::max(0.0, e)));
}

} // namespace uavcov
