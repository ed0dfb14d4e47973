#pragma once

#include "uavcov/config.hpp"

namespace uavcov {

/// Per-scenario link geometry: coverage cone, main-lobe gain, and the
/// exponents needed for the association bounds.
struct LinkGeometry {
  double u = 0.0;     // cone radius on the ground [m]
  double eta = 0.0;   // gain inside the cone
  double gamma = 0.0;
  double alpha_los = 0.0;
  double alpha_nlos = 0.0;

  static LinkGeometry from(const ScenarioConfig& cfg);
};

double cone_radius(double omega, double gamma);

/// Gain inside the cone. Outside the cone the gain is zero.
double antenna_gain(double omega);

/// Probability that at least one UAV covers the user, 1 - exp(-pi*lambda*u^2).
double association_probability(double lambda, double u);

/// Distance below which an NLOS UAV would beat a LOS server at r1 on mean power.
double bound_nlos_given_los_serving(double r1, const LinkGeometry& geom);

/// Distance below which a LOS UAV would beat an NLOS server at r1, capped at u.
double bound_los_given_nlos_serving(double r1, const LinkGeometry& geom);

} // namespace uavcov
