#pragma once

#include <cstddef>
#include <vector>

#include "uavcov/config.hpp"
#include "uavcov/environment.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/specfun.hpp"

namespace uavcov {

/// Joint density of the serving distance R1 = r1 and the serving link type.
struct ServingDensity {
  double r1 = 0.0;
  double f_los = 0.0;
  double f_nlos = 0.0;
};

struct QuadDiagnostics {
  double abs_error = 0.0;
  std::size_t subdivisions = 0;
  std::size_t integrals = 0;

  void add(const QuadratureResult& q)
  {
    abs_error += q.abs_error_estimate;
    subdivisions += q.subdivisions;
    ++integrals;
  }
};

struct AnalyticResult {
  double p_cov = 0.0;          // P(associated and SINR >= theta)
  double p_assoc = 0.0;        // P(at least one UAV in the cone window)
  double p_los_serving = 0.0;  // P(serving link LOS | associated); NaN when lambda = 0
  QuadDiagnostics quad;        // outer (r1) integrals only
};

/// Laplace transform of one interferer population (LOS or NLOS) and its
/// derivatives in s, with signal power and gain cancelled out:
/// L(s) = E[exp(-s * sum_i H_i (r_i^2 + gamma^2)^(-alpha/2))].
struct LaplaceDerivatives {
  int order = 0;
  double s = 0.0;
  std::vector<double> values;  // L, L', ..., L^(order)
  std::vector<double> scaled;  // s^k L^(k), dimensionless
};

/// Integral of w(r) r dr over [lo, hi] where w = p_los (los) or 1 - p_los.
double thinned_intensity_integral(const UrbanEnvironment& env, double gamma, double lo, double hi,
                                  bool los);

ServingDensity serving_density(const ScenarioConfig& cfg, double r1);
double serving_density(const ScenarioConfig& cfg, double r1, bool serving_los);

/// P(serving link is LOS | associated). Throws std::domain_error if lambda = 0.
double p_los_serving(const ScenarioConfig& cfg);

/// Same quantity with the elevation-angle sigmoid LOS curve in place of the
/// building-grid step function; (a, b) are the sigmoid fit parameters.
double p_los_serving_sigmoid(const ScenarioConfig& cfg, double a, double b);

/// Horizontal distance below which no interferer of the given type can
/// exist when the serving UAV is at r1.
double interferer_lower_bound(const LinkGeometry& geom, double r1, bool serving_los,
                              bool interferer_los);

/// s_t = m_t * theta * (r1^2 + gamma^2)^(alpha_t / 2) for the serving type t.
double serving_laplace_argument(const ScenarioConfig& cfg, double r1, bool serving_los);

/// The zeroth order uses the hypergeometric closed form per LOS step
/// segment; higher orders integrate the s-derivatives of the fading
/// Laplace term and combine them through complete Bell polynomials.
/// Requires order <= m_serving - 1 and s > 0.
LaplaceDerivatives laplace_derivatives(const ScenarioConfig& cfg, bool serving_los,
                                       bool interferer_los, double r1, double s, int order);

/// P(SINR >= theta | R1 = r1, serving type).
double conditional_coverage(const ScenarioConfig& cfg, double r1, bool serving_los);

AnalyticResult coverage_probability(const ScenarioConfig& cfg);

} // namespace uavcov
