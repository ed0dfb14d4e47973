#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "uavcov/errors.hpp"

namespace uavcov {

struct NumericsConfig {
  double quad_rel_tol = 1e-8;
  double hyp2f1_tol = 1e-12;
  double fd_step = 1e-6;
  int max_quad_depth = 50;

  bool operator==(const NumericsConfig&) const = default;
};

/// All parameters of one evaluation. Values are SI and linear: meters,
/// watts, UAVs / buildings per square meter, linear SINR threshold.
struct ScenarioConfig {
  double gamma = 100.0;       // UAV height [m]
  double lambda = 0.0;        // UAV density [1/m^2]
  double omega = 2.87;        // antenna beamwidth [rad]
  double p = 0.1;             // transmit power [W]
  double alpha_los = 2.1;
  double alpha_nlos = 4.0;
  int m_los = 3;
  int m_nlos = 1;
  double sigma2 = 1e-9;       // noise power [W]
  double beta = 300e-6;       // buildings [1/m^2]
  double delta = 0.5;         // built-up fraction
  double kappa = 50.0;        // Rayleigh scale of building heights [m]
  double theta = 1.0;         // SINR threshold, linear
  NumericsConfig numerics;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Urban and radio parameters used throughout the evaluation section.
/// gamma, lambda and theta are not fixed there; they are set to
/// placeholders (100 m, 0, 0 dB) that callers are expected to overwrite.
ScenarioConfig table1_defaults();

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& cfg);

/// Values supplied outside the document (e.g. CLI flags). They take
/// precedence over document keys. Units match the document keys.
struct ConfigOverrides {
  std::optional<double> gamma_m;
  std::optional<double> lambda_per_km2;
  std::optional<double> theta_db;
  std::optional<double> omega_rad;
};

/// Parses a flat JSON document (keys gamma_m, lambda_per_km2, omega_rad,
/// p_w, alpha_los, alpha_nlos, m_los, m_nlos, sigma2_w, beta_per_km2,
/// delta, kappa_m, theta_db, optional "numerics" object). Absent radio and
/// urban keys take table1_defaults(); gamma_m, lambda_per_km2 and theta_db
/// must come from the document or from `overrides`.
ScenarioConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Inverse of parse_config, in document units.
std::string serialize_config(const ScenarioConfig& cfg);

double db_to_linear(double db);
double linear_to_db(double linear);
inline constexpr double per_km2_to_per_m2(double v) { return v * 1e-6; }
inline constexpr double per_m2_to_per_km2(double v) { return v * 1e6; }

} // namespace uavcov
