#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/config.hpp"
#include "uavcov/montecarlo.hpp"

namespace uavcov::cli {

enum class Axis { gamma, lambda, omega, theta_db };

std::string_view to_string(Axis axis);
/// Accepts gamma, lambda, omega, theta_db. Throws std::invalid_argument.
Axis parse_axis(std::string_view text);

/// Axis values are in CLI units: meters, UAVs per km^2, radians, dB.
struct SweepSpec {
  Axis axis = Axis::gamma;
  std::vector<double> values;
  ScenarioConfig base;
  bool with_mc = false;
  McConfig mc;
  unsigned threads = 1; // points evaluated concurrently; 0: hardware threads
};

struct SweepRow {
  Axis axis = Axis::gamma;
  double axis_value = 0.0;
  ScenarioConfig cfg;
  double p_cov_analytic = 0.0;
  double p_assoc = 0.0;
  double p_los_serving = 0.0;
  std::optional<McEstimate> mc;
  std::string error; // empty unless the point failed
};

inline constexpr std::string_view kCsvHeader =
    "axis_name,axis_value,gamma_m,lambda_per_km2,omega_rad,theta_db,p_cov_analytic,p_assoc,"
    "p_los_serving,p_cov_mc,mc_ci95,trials,seed,los_mode,error";

/// "%.12g"; NaN and infinities print as an empty field.
std::string format_number(double v);

/// "lo:hi:step" (inclusive of hi up to rounding) or a comma-separated list.
/// Throws std::invalid_argument.
std::vector<double> parse_values(std::string_view text);

/// Copy of `base` with the axis parameter set. Throws ConfigError.
ScenarioConfig apply_axis(const ScenarioConfig& base, Axis axis, double value);

SweepRow evaluate_point(const ScenarioConfig& base, Axis axis, double value, bool with_mc,
                        const McConfig& mc);

/// Rows in the order of spec.values whatever the thread count. Numerics
/// failures are reported in SweepRow::error; invalid axis values throw
/// ConfigError before anything is evaluated.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const SweepRow& row);

/// Fraction of buildings lower than gamma under the Rayleigh height law.
double height_percentile(double gamma, double kappa);

struct OptimalHeight {
  double gamma = 0.0;
  double p_cov = 0.0;
  bool at_endpoint = false;
  bool multimodal = false;
  int evaluations = 0;
};

/// Coarse grid over [lo, hi], then golden-section refinement around the
/// best grid point. If the grid shows more than one local maximum with
/// prominence above `ripple_tol`, the bracket is scanned on a fine grid
/// instead. `max_evals` caps the total number of coverage evaluations.
OptimalHeight optimal_height(const ScenarioConfig& base, double lo, double hi, int coarse_points,
                             int max_evals, double ripple_tol = 1e-3, double gamma_tol = 0.1);

/// Entry point of the command-line tool. Exit codes: 0 success, 1
/// validation failure, 2 configuration or usage error, 3 numerics error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace uavcov::cli
