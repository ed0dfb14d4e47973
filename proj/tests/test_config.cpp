#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "uavcov/config.hpp"

using namespace uavcov;

namespace {

std::string field_of(const std::string& doc)
{
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

bool close(double a, double b) { return std::abs(a - b) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(b); }

} // namespace

TEST_CASE("table1_defaults carries the evaluation-section parameters")
{
  const auto c = table1_defaults();
  CHECK(c.omega == 2.87);
  CHECK(c.alpha_los == 2.1);
  CHECK(c.alpha_nlos == 4.0);
  CHECK(c.m_los == 3);
  CHECK(c.m_nlos == 1);
  CHECK(c.p == 0.1);
  CHECK(c.sigma2 == 1e-9);
  CHECK(c.beta == doctest::Approx(300e-6).epsilon(1e-15));
  CHECK(c.delta == 0.5);
  CHECK(c.kappa == 50.0);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("parse_config reads a full document and converts units")
{
  const auto c = parse_config(R"({"gamma_m": 100, "lambda_per_km2": 25, "theta_db": 0,
      "omega_rad": 2.87, "p_w": 0.1, "alpha_los": 2.1, "alpha_nlos": 4, "m_los": 3,
      "m_nlos": 1, "sigma2_w": 1e-9, "beta_per_km2": 300, "delta": 0.5, "kappa_m": 50})");
  CHECK(c.gamma == 100.0);
  CHECK(c.lambda == doctest::Approx(2.5e-5).epsilon(1e-15));
  CHECK(c.theta == 1.0);
  CHECK(c.beta == doctest::Approx(300e-6).epsilon(1e-15));
  CHECK(c.omega == 2.87);
  CHECK(c.m_los == 3);
  CHECK(c.numerics == NumericsConfig{});
}

TEST_CASE("parse_config fills absent radio keys from the defaults and honours overrides")
{
  ConfigOverrides o;
  o.gamma_m = 40.0;
  o.theta_db = 10.0;
  const auto c = parse_config(R"({"gamma_m": 100, "lambda_per_km2": 5})", o);
  CHECK(c.gamma == 40.0);
  CHECK(c.theta == doctest::Approx(10.0));
  CHECK(c.lambda == doctest::Approx(5e-6));
  CHECK(c.alpha_nlos == 4.0);
  CHECK(c.kappa == 50.0);
}

TEST_CASE("parse_config numerics block")
{
  const auto c = parse_config(R"({"gamma_m": 1, "lambda_per_km2": 1, "theta_db": 0,
      "numerics": {"quad_rel_tol": 1e-10, "max_quad_depth": 30}})");
  CHECK(c.numerics.quad_rel_tol == 1e-10);
  CHECK(c.numerics.max_quad_depth == 30);
  CHECK(c.numerics.hyp2f1_tol == 1e-12);
  CHECK(field_of(R"({"gamma_m": 1, "lambda_per_km2": 1, "theta_db": 0,
      "numerics": {"fd_step": -1}})") == "numerics.fd_step");
  CHECK(field_of(R"({"gamma_m": 1, "lambda_per_km2": 1, "theta_db": 0,
      "numerics": {"bogus": 1}})") == "numerics.bogus");
}

TEST_CASE("parse_config errors name the offending field")
{
  const std::string base = R"("gamma_m": 100, "lambda_per_km2": 25, "theta_db": 0)";
  CHECK(field_of("{" + base + R"(, "alpha_los": 2.1, "alpha_nlos": 2.0})") == "alpha_nlos");
  CHECK(field_of("{" + base + R"(, "alpha_nlos": 2.1})") == "alpha_nlos");
  CHECK(field_of("{" + base + R"(, "omega_rad": 3.2})") == "omega_rad");
  CHECK(field_of("{" + base + R"(, "omega_rad": 0})") == "omega_rad");
  CHECK(field_of("{" + base + R"(, "m_los": 2.5})") == "m_los");
  CHECK(field_of("{" + base + R"(, "m_nlos": 0})") == "m_nlos");
  CHECK(field_of("{" + base + R"(, "delta": 1.0})") == "delta");
  CHECK(field_of("{" + base + R"(, "kappa_m": "fifty"})") == "kappa_m");
  CHECK(field_of("{" + base + R"(, "lambda": 3})") == "lambda");
  CHECK(field_of(R"({"lambda_per_km2": 25, "theta_db": 0})") == "gamma_m");
  CHECK(field_of(R"({"gamma_m": 10, "theta_db": 0})") == "lambda_per_km2");
  CHECK(field_of(R"({"gamma_m": 10, "lambda_per_km2": 25})") == "theta_db");
  CHECK(field_of("{not json") == "<document>");
  CHECK(field_of("[1, 2]") == "<document>");
}

TEST_CASE("m given as an integral float is accepted")
{
  const auto c = parse_config(R"({"gamma_m": 1, "lambda_per_km2": 1, "theta_db": 0, "m_los": 2.0})");
  CHECK(c.m_los == 2);
}

TEST_CASE("serialize/parse round trip over random valid configs")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ScenarioConfig c = table1_defaults();
    c.gamma = 1 + 499 * u01(rng);
    c.lambda = 1e-4 * u01(rng);
    c.omega = 0.1 + 3.0 * u01(rng);
    c.p = 0.01 + u01(rng);
    c.alpha_los = 2.01 + 2 * u01(rng);
    c.alpha_nlos = c.alpha_los + 0.01 + 2 * u01(rng);
    c.m_los = 1 + static_cast<int>(5 * u01(rng));
    c.m_nlos = 1 + static_cast<int>(5 * u01(rng));
    c.sigma2 = 1e-12 * u01(rng);
    c.beta = 1e-3 * (0.01 + u01(rng));
    c.delta = 0.01 + 0.98 * u01(rng);
    c.kappa = 1 + 100 * u01(rng);
    c.theta = std::pow(10.0, 2 * u01(rng) - 1);
    c.numerics.quad_rel_tol = 1e-9 * (1 + u01(rng));

    const ScenarioConfig back = parse_config(serialize_config(c));
    // Unconverted fields survive bit-exactly; unit-converted ones (per km^2, dB)
    // to within a few ulps.
    CHECK(back.gamma == c.gamma);
    CHECK(back.omega == c.omega);
    CHECK(back.alpha_los == c.alpha_los);
    CHECK(back.alpha_nlos == c.alpha_nlos);
    CHECK(back.m_los == c.m_los);
    CHECK(back.m_nlos == c.m_nlos);
    CHECK(back.kappa == c.kappa);
    CHECK(back.numerics == c.numerics);
    CHECK(close(back.lambda, c.lambda));
    CHECK(close(back.beta, c.beta));
    CHECK(close(back.theta, c.theta));
  }
}

TEST_CASE("dB conversion")
{
  CHECK(db_to_linear(0) == 1.0);
  CHECK(db_to_linear(10) == doctest::Approx(10.0));
  CHECK(db_to_linear(-5) == doctest::Approx(0.31622776601683794));
  CHECK(linear_to_db(100) == doctest::Approx(20.0));
  CHECK(per_km2_to_per_m2(25) == doctest::Approx(2.5e-5));
}
