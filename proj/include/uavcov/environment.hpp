#pragma once

#include <cstddef>
#include <vector>

#include "uavcov/config.hpp"
#include "uavcov/rng.hpp"

namespace uavcov {

/// Square-grid urban model: beta buildings per m^2 covering a fraction
/// delta of the ground, heights Rayleigh(kappa).
struct UrbanEnvironment {
  double beta = 300e-6;
  double delta = 0.5;
  double kappa = 50.0;

  static UrbanEnvironment from(const ScenarioConfig& cfg)
  {
    return {cfg.beta, cfg.delta, cfg.kappa};
  }

  /// Buildings crossed per meter of horizontal link, sqrt(beta*delta).
  double crossing_rate() const;
  /// Horizontal distance between steps of the LOS probability.
  double step_pitch() const { return 1.0 / crossing_rate(); }
};

/// Number of buildings a link of horizontal length r crosses, floor(r*sqrt(beta*delta)).
int buildings_crossed(const UrbanEnvironment& env, double r);

/// LOS probability of a link crossing `crossings` buildings. Exactly 1 when
/// no building is crossed.
double p_los_for_crossings(const UrbanEnvironment& env, double gamma, int crossings);

double p_los(const UrbanEnvironment& env, double gamma, double r);

/// Interval of horizontal distance on which p_los is constant.
struct LosSegment {
  double lo;
  double hi;
  int crossings;
};

/// Splits [lo, hi] at the LOS step points. Empty when lo >= hi.
std::vector<LosSegment> los_segments(const UrbanEnvironment& env, double lo, double hi);

/// {0, pitch, 2*pitch, ...} clipped to [0, r_max], with r_max appended.
/// Strictly increasing, no near-duplicate endpoint.
std::vector<double> los_breakpoints(const UrbanEnvironment& env, double r_max);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// One explicit building layout around a user at the origin. Cell (i, j)
/// spans [offset.x + i*pitch, offset.x + (i+1)*pitch) in x (likewise y)
/// and holds a square building of side `side` at its center.
struct BuildingGridRealization {
  double pitch = 0.0;
  double side = 0.0;
  Vec2 offset;
  int first_col = 0;
  int first_row = 0;
  int cols = 0;
  int rows = 0;
  std::vector<double> heights; // row-major, rows x cols

  double height(int col, int row) const
  {
    return heights[static_cast<std::size_t>(row - first_row) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(col - first_col)];
  }
  bool contains_cell(int col, int row) const
  {
    return col >= first_col && col < first_col + cols && row >= first_row && row < first_row + rows;
  }
};

/// Samples a grid covering the square around the disc of `window_radius`,
/// with the offset re-drawn until the origin is on the street.
BuildingGridRealization sample_grid(const UrbanEnvironment& env, double window_radius, Rng& rng);

/// Ray test from the user (origin, height 0) to a UAV at (uav_xy, gamma).
bool is_los_explicit(const BuildingGridRealization& grid, double gamma, Vec2 uav_xy);

/// Elevation-angle sigmoid LOS model, 1 / (1 + a*exp(-b*(angle_deg - a))).
double p_los_sigmoid(double a, double b, double gamma, double r);

} // namespace uavcov
