#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "uavcov/analytic.hpp"

using namespace uavcov;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

ScenarioConfig table1(double gamma, double lambda_per_km2, double theta_db)
{
  auto c = table1_defaults();
  c.gamma = gamma;
  c.lambda = per_km2_to_per_m2(lambda_per_km2);
  c.theta = db_to_linear(theta_db);
  return c;
}

// Adaptive Gauss-Kronrod over [lo, hi], split at the LOS step edges.
template <class F>
double piecewise(const ScenarioConfig& cfg, F f, double lo, double hi)
{
  double acc = 0.0;
  for (const auto& seg : los_segments(UrbanEnvironment::from(cfg), lo, hi)) {
    acc += gauss_kronrod<double, 61>::integrate(f, seg.lo, seg.hi, 15, 1e-13);
  }
  return acc;
}

// A(s) = 2 pi lambda int_lo^u w(r) (1 - (1 + s x / m)^-m) r dr with x = (r^2 + gamma^2)^(-alpha/2).
double laplace_exponent_oracle(const ScenarioConfig& cfg, bool serving_los, bool interferer_los,
                               double r1, double s)
{
  const auto env = UrbanEnvironment::from(cfg);
  const auto geom = LinkGeometry::from(cfg);
  const double alpha = interferer_los ? cfg.alpha_los : cfg.alpha_nlos;
  const int m = interferer_los ? cfg.m_los : cfg.m_nlos;
  const double lo = interferer_lower_bound(geom, r1, serving_los, interferer_los);
  const auto f = [&](double r) {
    const double pl = p_los(env, cfg.gamma, r);
    const double w = interferer_los ? pl : 1.0 - pl;
    const double x = std::pow(r * r + cfg.gamma * cfg.gamma, -alpha / 2);
    return w * (1.0 - std::pow(1.0 + s * x / m, -m)) * r;
  };
  return 2 * kPi * cfg.lambda * piecewise(cfg, f, lo, geom.u);
}

ScenarioConfig random_config(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto c = table1_defaults();
  c.gamma = 10 + 290 * u01(rng);
  c.lambda = per_km2_to_per_m2(1 + 199 * u01(rng));
  c.omega = 0.5 + 2.5 * u01(rng);
  c.alpha_los = 2.05 + 0.9 * u01(rng);
  c.alpha_nlos = c.alpha_los + 0.3 + 1.5 * u01(rng);
  c.m_los = 1 + static_cast<int>(4 * u01(rng));
  c.m_nlos = 1 + static_cast<int>(2 * u01(rng));
  c.beta = per_km2_to_per_m2(100 + 600 * u01(rng));
  c.delta = 0.1 + 0.7 * u01(rng);
  c.kappa = 10 + 60 * u01(rng);
  c.theta = db_to_linear(-10 + 20 * u01(rng));
  validate(c);
  return c;
}

} // namespace

TEST_CASE("thinned intensity integral")
{
  const auto env = UrbanEnvironment::from(table1_defaults());
  const double pitch = env.step_pitch();

  CHECK(thinned_intensity_integral(env, 100, 40, 40, true) == 0.0);
  CHECK(thinned_intensity_integral(env, 100, 0, pitch, true) ==
        doctest::Approx(pitch * pitch / 2).epsilon(1e-13));
  CHECK(pitch * pitch / 2 == doctest::Approx(3333.333333333).epsilon(1e-12));
  CHECK(thinned_intensity_integral(env, 100, 0, pitch, false) == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 2000);
  for (int i = 0; i < 50; ++i) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) {
      std::swap(lo, hi);
    }
    const double sum = thinned_intensity_integral(env, 100, lo, hi, true) +
                       thinned_intensity_integral(env, 100, lo, hi, false);
    CHECK(sum == doctest::Approx((hi * hi - lo * lo) / 2).epsilon(1e-12));
  }

  // Second segment, one crossing: weight p_los(d = 1).
  const double p1 = p_los_for_crossings(env, 100, 1);
  CHECK(thinned_intensity_integral(env, 100, pitch, 1.5 * pitch, true) ==
        doctest::Approx(p1 * 0.5 * (2.25 - 1.0) * pitch * pitch).epsilon(1e-12));
}

TEST_CASE("serving density near the user")
{
  const auto cfg = table1(100, 25, 0);
  const double lambda = cfg.lambda;
  const double expected = 2 * kPi * lambda * 50 * std::exp(-2 * kPi * lambda * 1250);
  CHECK(expected == doctest::Approx(6.45381272857652e-3).epsilon(1e-12));

  const auto d = serving_density(cfg, 50);
  CHECK(d.f_los == doctest::Approx(expected).epsilon(1e-12));
  CHECK(d.f_nlos == 0.0);
  CHECK(serving_density(cfg, 50, true) == d.f_los);

  auto empty = cfg;
  empty.lambda = 0;
  CHECK(serving_density(empty, 50, true) == 0.0);
  CHECK(serving_density(empty, 500, false) == 0.0);

  // Tall buildings far away: the LOS density is thinned by p_los.
  auto dense = cfg;
  dense.gamma = 20;
  dense.kappa = 200;
  const double far = 0.9 * LinkGeometry::from(dense).u;
  const double pl = p_los(UrbanEnvironment::from(dense), dense.gamma, far);
  CHECK(pl < 1e-2);
  CHECK(serving_density(dense, far, true) <= pl * 2 * kPi * lambda * far);
  CHECK(serving_density(dense, far, false) > serving_density(dense, far, true));
}

TEST_CASE("density integrates to the association probability")
{
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5; ++i) {
    const auto cfg = random_config(rng);
    const auto geom = LinkGeometry::from(cfg);
    const auto f = [&](double r1) {
      const auto d = serving_density(cfg, r1);
      return d.f_los + d.f_nlos;
    };
    const double total = piecewise(cfg, f, 0, geom.u);
    CAPTURE(serialize_config(cfg));
    CHECK(std::abs(total - association_probability(cfg.lambda, geom.u)) < 1e-6);

    const double pls = p_los_serving(cfg);
    CHECK(pls >= 0.0);
    CHECK(pls <= 1.0);
  }
}

TEST_CASE("p_los_serving limits")
{
  auto flat = table1(100, 25, 0);
  flat.kappa = 1e-6;
  flat.delta = 1e-6;
  CHECK(p_los_serving(flat) == doctest::Approx(1.0).epsilon(1e-12));
  for (double r1 : {10.0, 200.0, 600.0}) {
    CHECK(serving_density(flat, r1, false) == 0.0);
  }

  // Cone radius below the first step edge: every in-window link is LOS.
  const auto low = table1(5, 25, 0);
  REQUIRE(LinkGeometry::from(low).u < UrbanEnvironment::from(low).step_pitch());
  CHECK(p_los_serving(low) == 1.0);

  auto none = low;
  none.lambda = 0;
  CHECK_THROWS_AS(p_los_serving(none), std::domain_error);
}

TEST_CASE("Laplace transform sanity")
{
  const auto cfg = table1(100, 25, 0);
  for (bool il : {true, false}) {
    const auto tiny = laplace_derivatives(cfg, true, il, 50, 1e-9, 2);
    CHECK(tiny.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : tiny.values) {
      CHECK(std::isfinite(v));
    }

    double prev = 1.0;
    for (double s : {1e2, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9}) {
      const double l = laplace_derivatives(cfg, true, il, 50, s, 0).values[0];
      CHECK(l > 0.0);
      CHECK(l < prev);
      prev = l;
    }
  }

  auto empty = cfg;
  empty.lambda = 0;
  const auto e = laplace_derivatives(empty, true, true, 50, 1e6, 2);
  CHECK(e.values[0] == 1.0);
  CHECK(e.values[1] == 0.0);
  CHECK(e.values[2] == 0.0);

  CHECK_THROWS(laplace_derivatives(cfg, false, true, 50, 1e6, 1));
  CHECK_THROWS(laplace_derivatives(cfg, true, true, 50, 0.0, 0));
}

TEST_CASE("Laplace closed form against direct quadrature")
{
  const auto cfg = table1(100, 25, 0);
  // Rayleigh NLOS interferers, alpha = 4, around s = 1e6.
  for (double r1 : {50.0, 150.0, 400.0}) {
    for (double s : {1e6, 1e8}) {
      const double a = -std::log(laplace_derivatives(cfg, true, false, r1, s, 0).values[0]);
      const double oracle = laplace_exponent_oracle(cfg, true, false, r1, s);
      CAPTURE(r1);
      CAPTURE(s);
      CHECK(a == doctest::Approx(oracle).epsilon(1e-7));
    }
  }
  // m = 3 LOS interferers with both serving types.
  for (bool sl : {true, false}) {
    const double r1 = 300;
    const double s = serving_laplace_argument(cfg, r1, sl);
    const double a = -std::log(laplace_derivatives(cfg, sl, true, r1, s, 0).values[0]);
    CHECK(a == doctest::Approx(laplace_exponent_oracle(cfg, sl, true, r1, s)).epsilon(1e-7));
  }
}

TEST_CASE("Laplace derivatives against finite differences")
{
  const auto cfg = table1(100, 25, 0);
  // NLOS interferers need a larger argument before L moves away from 1.
  const struct {
    double r1;
    bool il;
    double scale;
  } points[] = {{20, true, 1}, {50, true, 1}, {120, true, 1},
                {50, false, 1e3}, {300, false, 1e3}, {600, false, 1e3}};
  const double h1 = cfg.numerics.fd_step;
  const double h2 = std::sqrt(cfg.numerics.fd_step);
  for (const auto& pt : points) {
    const double s = pt.scale * serving_laplace_argument(cfg, pt.r1, true);
    const auto lap = [&](double x) {
      return laplace_derivatives(cfg, true, pt.il, pt.r1, x, 0).values[0];
    };
    const auto d = laplace_derivatives(cfg, true, pt.il, pt.r1, s, 2);
    const double l0 = lap(s);
    REQUIRE(l0 < 0.9);
    const double d1 = (lap(s * (1 + h1)) - lap(s * (1 - h1))) / (2 * h1 * s);
    const double d2 = (lap(s * (1 + h2)) - 2 * l0 + lap(s * (1 - h2))) / (h2 * h2 * s * s);
    CAPTURE(pt.r1);
    CAPTURE(pt.il);
    CHECK(d.values[0] == l0);
    CHECK(std::abs(d.values[1] / d1 - 1) < 1e-5);
    CHECK(std::abs(d.values[2] / d2 - 1) < 1e-5);
    CHECK(std::abs(d.scaled[1] / (s * d.values[1]) - 1) < 1e-14);
  }
}

TEST_CASE("conditional coverage limits")
{
  auto cfg = table1(100, 25, -120);
  for (bool sl : {true, false}) {
    CHECK(conditional_coverage(cfg, 300, sl) == doctest::Approx(1.0).epsilon(1e-6));
  }

  // Noise only: P(H >= t) for H ~ Gamma(m, 1/m); sigma2 puts t = 1 at r1 = 100.
  cfg = table1(100, 0, 10);
  const double eta = antenna_gain(cfg.omega);
  for (bool los : {true, false}) {
    const double alpha = los ? cfg.alpha_los : cfg.alpha_nlos;
    const double m = los ? cfg.m_los : cfg.m_nlos;
    cfg.sigma2 = cfg.p * eta / (cfg.theta * std::pow(2e4, alpha / 2));
    for (double r1 : {0.0, 100.0, 150.0}) {
      const double t = cfg.theta * std::pow(r1 * r1 + 1e4, alpha / 2) * cfg.sigma2 / (cfg.p * eta);
      const double x = m * t;
      const double tail = los ? std::exp(-x) * (1 + x + x * x / 2) : std::exp(-x);
      CAPTURE(r1);
      CAPTURE(los);
      REQUIRE(tail > 1e-3);
      REQUIRE(tail < 0.99);
      CHECK(std::abs(conditional_coverage(cfg, r1, los) / tail - 1) < 1e-12);
    }
  }
}

TEST_CASE("coverage probability basics")
{
  auto cfg = table1(100, 25, 0);
  const auto r = coverage_probability(cfg);
  CHECK(r.p_cov >= 0.0);
  CHECK(r.p_cov <= r.p_assoc);
  CHECK(r.p_assoc == association_probability(cfg.lambda, LinkGeometry::from(cfg).u));
  CHECK(r.quad.integrals > 0);

  cfg.lambda = 0;
  const auto z = coverage_probability(cfg);
  CHECK(z.p_cov == 0.0);
  CHECK(z.p_assoc == 0.0);
  CHECK(std::isnan(z.p_los_serving));

  const auto low = coverage_probability(table1(100, 25, -60));
  CHECK(low.p_cov == doctest::Approx(low.p_assoc).epsilon(1e-3));
}

TEST_CASE("coverage is non-increasing in the threshold")
{
  for (double gamma : {40.0, 150.0}) {
    for (double lambda : {5.0, 50.0}) {
      double prev = 1.0;
      for (double t : {-5.0, 0.0, 5.0}) {
        const double p = coverage_probability(table1(gamma, lambda, t)).p_cov;
        CHECK(p <= prev);
        prev = p;
      }
    }
  }
}

TEST_CASE("equal exponents make the LOS split immaterial")
{
  auto split = table1(100, 25, 0);
  split.alpha_los = split.alpha_nlos = 3.0;
  split.m_los = split.m_nlos = 2;
  auto flat = split;
  flat.kappa = 1e-6;
  CHECK(coverage_probability(split).p_cov ==
        doctest::Approx(coverage_probability(flat).p_cov).epsilon(1e-6));
}

TEST_CASE("single-population Rayleigh coverage")
{
  auto cfg = table1(100, 25, 0);
  cfg.alpha_los = cfg.alpha_nlos = 3.0;
  cfg.m_los = cfg.m_nlos = 1;
  const double u = LinkGeometry::from(cfg).u;
  const double eta = antenna_gain(cfg.omega);
  const double g2 = cfg.gamma * cfg.gamma;
  const double a = cfg.alpha_los;
  const double lam = cfg.lambda;

  const auto outer = [&](double r) {
    const double s = cfg.theta * std::pow(r * r + g2, a / 2);
    const auto inner = [&](double rho) {
      const double x = s * std::pow(rho * rho + g2, -a / 2);
      return x / (1 + x) * rho;
    };
    const double interf =
        r < u ? gauss_kronrod<double, 61>::integrate(inner, r, u, 15, 1e-13) : 0.0;
    return 2 * kPi * lam * r * std::exp(-kPi * lam * r * r) *
           std::exp(-s * cfg.sigma2 / (cfg.p * eta)) * std::exp(-2 * kPi * lam * interf);
  };
  const double oracle = gauss_kronrod<double, 61>::integrate(outer, 0, u, 15, 1e-12);
  CHECK(coverage_probability(cfg).p_cov == doctest::Approx(oracle).epsilon(1e-6));
}
