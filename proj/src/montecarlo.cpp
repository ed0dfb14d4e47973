#include "uavcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/environment.hpp"
#include "uavcov/geometry.hpp"

namespace uavcov {

namespace {

struct Uav {
  double y2;    // squared 3D distance
  bool los;
  double fading;
};

class TrialSimulator {
public:
  TrialSimulator(const ScenarioConfig& cfg, LosMode mode)
      : cfg_(cfg), mode_(mode), env_(UrbanEnvironment::from(cfg)), geom_(LinkGeometry::from(cfg))
  {
    const int max_d = buildings_crossed(env_, geom_.u) + 1;
    for (int d = 0; d <= max_d; ++d) {
      plos_.push_back(p_los_for_crossings(env_, cfg.gamma, d));
    }
  }

  TrialOutcome full(Rng& rng) const
  {
    TrialOutcome out;
    const double u = geom_.u;
    const double mean = std::numbers::pi * cfg_.lambda * u * u;
    if (!(mean > 0.0)) {
      return out;
    }
    std::poisson_distribution<long> count_dist(mean);
    const long n = count_dist(rng);
    if (n == 0) {
      return out;
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> fade_los(cfg_.m_los, 1.0 / cfg_.m_los);
    std::gamma_distribution<double> fade_nlos(cfg_.m_nlos, 1.0 / cfg_.m_nlos);
    std::optional<BuildingGridRealization> grid;
    if (mode_ == LosMode::grid) {
      grid = sample_grid(env_, u, rng);
    }

    std::vector<Uav> uavs;
    uavs.reserve(static_cast<std::size_t>(n));
    const double g2 = cfg_.gamma * cfg_.gamma;
    for (long i = 0; i < n; ++i) {
      const double r = u * std::sqrt(unit(rng));
      bool los;
      if (grid) {
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        los = is_los_explicit(*grid, cfg_.gamma, {r * std::cos(phi), r * std::sin(phi)});
      } else {
        los = unit(rng) < plos(r);
      }
      const double h = los ? fade_los(rng) : fade_nlos(rng);
      uavs.push_back({r * r + g2, los, h});
    }

    out.associated = true;
    const std::size_t serving = strongest(uavs);
    out.serving_los = uavs[serving].los;
    out.covered = sinr_ok(uavs, serving);
    return out;
  }

  bool conditional(Rng& rng, double r1, bool serving_los) const
  {
    const double u = geom_.u;
    const double b_los = interferer_lower_bound(geom_, r1, serving_los, true);
    const double b_nlos = interferer_lower_bound(geom_, r1, serving_los, false);
    const double rmin = std::min(b_los, b_nlos);
    const double g2 = cfg_.gamma * cfg_.gamma;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> fade_los(cfg_.m_los, 1.0 / cfg_.m_los);
    std::gamma_distribution<double> fade_nlos(cfg_.m_nlos, 1.0 / cfg_.m_nlos);

    std::vector<Uav> uavs;
    uavs.push_back({r1 * r1 + g2, serving_los, serving_los ? fade_los(rng) : fade_nlos(rng)});

    const double mean = std::numbers::pi * cfg_.lambda * std::max(0.0, u * u - rmin * rmin);
    if (mean > 0.0) {
      std::poisson_distribution<long> count_dist(mean);
      const long n = count_dist(rng);
      for (long i = 0; i < n; ++i) {
        const double r = std::sqrt(rmin * rmin + unit(rng) * (u * u - rmin * rmin));
        const bool los = unit(rng) < plos(r);
        const double h = los ? fade_los(rng) : fade_nlos(rng);
        if (r >= (los ? b_los : b_nlos)) {
          uavs.push_back({r * r + g2, los, h});
        }
      }
    }
    return sinr_ok(uavs, 0);
  }

private:
  double plos(double r) const
  {
    const int d = buildings_crossed(env_, r);
    return d < static_cast<int>(plos_.size()) ? plos_[static_cast<std::size_t>(d)]
                                              : p_los_for_crossings(env_, cfg_.gamma, d);
  }

  double alpha(bool los) const { return los ? cfg_.alpha_los : cfg_.alpha_nlos; }

  // Largest mean received power; LOS wins exact ties.
  std::size_t strongest(const std::vector<Uav>& uavs) const
  {
    std::size_t best = 0;
    double best_db = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < uavs.size(); ++i) {
      const double v = -0.5 * alpha(uavs[i].los) * std::log(uavs[i].y2);
      if (v > best_db || (v == best_db && uavs[i].los && !uavs[best].los)) {
        best = i;
        best_db = v;
      }
    }
    return best;
  }

  bool sinr_ok(const std::vector<Uav>& uavs, std::size_t serving) const
  {
    const double gain = cfg_.p * geom_.eta;
    const auto power = [&](const Uav& x) {
      return gain * x.fading * std::pow(x.y2, -0.5 * alpha(x.los));
    };
    double interference = 0.0;
    for (std::size_t i = 0; i < uavs.size(); ++i) {
      if (i != serving) {
        interference += power(uavs[i]);
      }
    }
    return power(uavs[serving]) >= cfg_.theta * (interference + cfg_.sigma2);
  }

  ScenarioConfig cfg_;
  LosMode mode_;
  UrbanEnvironment env_;
  LinkGeometry geom_;
  std::vector<double> plos_;
};

struct Counts {
  std::uint64_t covered = 0;
  std::uint64_t associated = 0;
  std::uint64_t serving_los = 0;
};

Counts run_chunked(const McConfig& mc, const std::function<TrialOutcome(Rng&)>& trial)
{
  if (mc.trials == 0) {
    throw std::invalid_argument("Monte Carlo: trials must be >= 1");
  }
  unsigned threads = mc.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : mc.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, mc.trials));

  std::vector<Counts> partial(threads);
  const auto work = [&](unsigned t) {
    const std::uint64_t begin = mc.trials * t / threads;
    const std::uint64_t end = mc.trials * (t + 1) / threads;
    Counts c;
    for (std::uint64_t k = begin; k < end; ++k) {
      Rng rng = substream(mc.seed, k);
      const TrialOutcome o = trial(rng);
      c.covered += o.covered;
      c.associated += o.associated;
      c.serving_los += o.serving_los.value_or(false);
    }
    partial[t] = c;
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work, t);
    }
  }

  Counts total;
  for (const auto& c : partial) {
    total.covered += c.covered;
    total.associated += c.associated;
    total.serving_los += c.serving_los;
  }
  return total;
}

McEstimate summarize(const McConfig& mc, const Counts& c)
{
  McEstimate e;
  e.trials = mc.trials;
  e.seed = mc.seed;
  e.los_mode = mc.los_mode;
  e.covered = c.covered;
  e.associated = c.associated;
  e.serving_los = c.serving_los;
  const double n = static_cast<double>(mc.trials);
  e.p_cov_hat = static_cast<double>(c.covered) / n;
  e.p_assoc_hat = static_cast<double>(c.associated) / n;
  e.p_los_serving_hat = c.associated > 0
                            ? static_cast<double>(c.serving_los) / static_cast<double>(c.associated)
                            : std::numeric_limits<double>::quiet_NaN();
  e.ci95_halfwidth = ci95_halfwidth(e.p_cov_hat, mc.trials);
  return e;
}

} // namespace

std::string_view to_string(LosMode mode)
{
  return mode == LosMode::grid ? "grid" : "bernoulli";
}

LosMode parse_los_mode(std::string_view text)
{
  if (text == "bernoulli") {
    return LosMode::bernoulli;
  }
  if (text == "grid") {
    return LosMode::grid;
  }
  throw std::invalid_argument("unknown LOS mode '" + std::string(text) + "' (bernoulli|grid)");
}

double ci95_halfwidth(double p, std::uint64_t n)
{
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

TrialOutcome run_trial(const ScenarioConfig& cfg, const McConfig& mc, Rng& rng)
{
  return TrialSimulator(cfg, mc.los_mode).full(rng);
}

McEstimate estimate(const ScenarioConfig& cfg, const McConfig& mc)
{
  const TrialSimulator sim(cfg, mc.los_mode);
  return summarize(mc, run_chunked(mc, [&](Rng& rng) { return sim.full(rng); }));
}

McEstimate estimate_conditional(const ScenarioConfig& cfg, const McConfig& mc, bool serving_los)
{
  if (!mc.conditional_r1) {
    throw std::invalid_argument("estimate_conditional: conditional_r1 must be set");
  }
  if (mc.los_mode != LosMode::bernoulli) {
    throw std::invalid_argument("estimate_conditional: only bernoulli LOS mode is supported");
  }
  const double r1 = *mc.conditional_r1;
  const double u = cone_radius(cfg.omega, cfg.gamma);
  if (!(r1 >= 0.0 && r1 <= u)) {
    throw std::invalid_argument("estimate_conditional: r1 must lie in [0, u]");
  }
  const TrialSimulator sim(cfg, LosMode::bernoulli);
  return summarize(mc, run_chunked(mc, [&](Rng& rng) {
                     TrialOutcome o;
                     o.associated = true;
                     o.serving_los = serving_los;
                     o.covered = sim.conditional(rng, r1, serving_los);
                     return o;
                   }));
}

} // namespace uavcov
