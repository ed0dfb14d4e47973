#include "uavcov/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavcov {

double UrbanEnvironment::crossing_rate() const { return std::sqrt(beta * delta); }

int buildings_crossed(const UrbanEnvironment& env, double r)
{
  return static_cast<int>(std::floor(r * env.crossing_rate()));
}

double p_los_for_crossings(const UrbanEnvironment& env, double gamma, int crossings)
{
  if (crossings <= 0) {
    return 1.0;
  }
  const double d = crossings;
  const double two_k2 = 2.0 * env.kappa * env.kappa;
  double prob = 1.0;
  for (int n = 0; n < crossings; ++n) {
    // Building n sits at fraction (n + 1/2)/d of the path, counted from the UAV.
    const double h = gamma - (n + 0.5) * gamma / d;
    prob *= -std::expm1(-(h * h) / two_k2);
  }
  return prob;
}

double p_los(const UrbanEnvironment& env, double gamma, double r)
{
  return p_los_for_crossings(env, gamma, buildings_crossed(env, r));
}

std::vector<LosSegment> los_segments(const UrbanEnvironment& env, double lo, double hi)
{
  std::vector<LosSegment> out;
  if (!(hi > lo)) {
    return out;
  }
  const double pitch = env.step_pitch();
  const double eps = 1e-9 * std::max(1.0, hi);

  std::vector<double> edges{lo};
  for (long j = static_cast<long>(std::floor(lo / pitch)) + 1;; ++j) {
    const double x = static_cast<double>(j) * pitch;
    if (x >= hi - eps) {
      break;
    }
    if (x > lo + eps) {
      edges.push_back(x);
    }
  }
  edges.push_back(hi);

  const double rate = env.crossing_rate();
  out.reserve(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double mid = 0.5 * (edges[k] + edges[k + 1]);
    out.push_back({edges[k], edges[k + 1], static_cast<int>(std::floor(mid * rate))});
  }
  return out;
}

std::vector<double> los_breakpoints(const UrbanEnvironment& env, double r_max)
{
  std::vector<double> pts;
  const auto segs = los_segments(env, 0.0, r_max);
  if (segs.empty()) {
    return {0.0};
  }
  for (const auto& s : segs) {
    pts.push_back(s.lo);
  }
  pts.push_back(segs.back().hi);
  return pts;
}

BuildingGridRealization sample_grid(const UrbanEnvironment& env, double window_radius, Rng& rng)
{
  if (!(window_radius > 0)) {
    throw std::invalid_argument("sample_grid: window_radius must be > 0");
  }
  BuildingGridRealization g;
  g.pitch = 1.0 / std::sqrt(env.beta);
  g.side = std::sqrt(env.delta / env.beta);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double half = 0.5 * g.side;
  for (;;) {
    g.offset = {unit(rng) * g.pitch, unit(rng) * g.pitch};
    // The origin lies in cell (-1, -1); its building is centered at offset - pitch/2.
    const double cx = g.offset.x - 0.5 * g.pitch;
    const double cy = g.offset.y - 0.5 * g.pitch;
    if (std::abs(cx) > half || std::abs(cy) > half) {
      break;
    }
  }

  const auto cell_of = [&](double v, double off) {
    return static_cast<int>(std::floor((v - off) / g.pitch));
  };
  g.first_col = cell_of(-window_radius, g.offset.x);
  g.first_row = cell_of(-window_radius, g.offset.y);
  g.cols = cell_of(window_radius, g.offset.x) - g.first_col + 1;
  g.rows = cell_of(window_radius, g.offset.y) - g.first_row + 1;

  g.heights.resize(static_cast<std::size_t>(g.cols) * static_cast<std::size_t>(g.rows));
  for (auto& h : g.heights) {
    h = env.kappa * std::sqrt(-2.0 * std::log1p(-unit(rng)));
  }
  return g;
}

namespace {

// Parameter range t in [0, 1] where t*d (the segment from 0 to d) lies in [a, b].
bool slab(double d, double a, double b, double& t0, double& t1)
{
  if (d == 0.0) {
    if (a <= 0.0 && 0.0 <= b) {
      t0 = 0.0;
      t1 = 1.0;
      return true;
    }
    return false;
  }
  double ta = a / d;
  double tb = b / d;
  if (ta > tb) {
    std::swap(ta, tb);
  }
  t0 = std::max(0.0, ta);
  t1 = std::min(1.0, tb);
  return t0 <= t1;
}

} // namespace

bool is_los_explicit(const BuildingGridRealization& grid, double gamma, Vec2 uav_xy)
{
  const double dx = uav_xy.x;
  const double dy = uav_xy.y;
  if (dx == 0.0 && dy == 0.0) {
    return true;
  }
  const double P = grid.pitch;
  const double half = 0.5 * grid.side;
  const auto cell_of = [P](double v, double off) { return static_cast<int>(std::floor((v - off) / P)); };

  const int col_lo = cell_of(std::min(0.0, dx), grid.offset.x);
  const int col_hi = cell_of(std::max(0.0, dx), grid.offset.x);
  for (int i = col_lo; i <= col_hi; ++i) {
    const double cx = grid.offset.x + (i + 0.5) * P;
    double tx0, tx1;
    if (!slab(dx, cx - half, cx + half, tx0, tx1)) {
      continue;
    }
    const double ya = tx0 * dy;
    const double yb = tx1 * dy;
    const int row_lo = cell_of(std::min(ya, yb), grid.offset.y);
    const int row_hi = cell_of(std::max(ya, yb), grid.offset.y);
    for (int j = row_lo; j <= row_hi; ++j) {
      const double cy = grid.offset.y + (j + 0.5) * P;
      double ty0, ty1;
      if (!slab(dy, cy - half, cy + half, ty0, ty1)) {
        continue;
      }
      const double t0 = std::max(tx0, ty0);
      const double t1 = std::min(tx1, ty1);
      if (t0 > t1) {
        continue;
      }
      if (!grid.contains_cell(i, j)) {
        throw std::out_of_range("is_los_explicit: link leaves the sampled grid window");
      }
      // Link height grows from 0 at the user; lowest over the footprint is at entry.
      if (grid.height(i, j) >= gamma * t0) {
        return false;
      }
    }
  }
  return true;
}

double p_los_sigmoid(double a, double b, double gamma, double r)
{
  const double angle_deg = std::atan2(gamma, r) * 180.0 / std::numbers::pi;
  return 1.0 / (1.0 + a * std::exp(-b * (angle_deg - a)));
}

} // namespace uavcov
