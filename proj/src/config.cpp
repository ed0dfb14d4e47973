#include "uavcov/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "json.hpp"

namespace uavcov {

namespace {

using nlohmann::json;

const std::set<std::string> kScenarioKeys = {
    "gamma_m",  "lambda_per_km2", "omega_rad",    "p_w",   "alpha_los",
    "alpha_nlos", "m_los",        "m_nlos",       "sigma2_w", "beta_per_km2",
    "delta",    "kappa_m",        "theta_db",     "numerics"};

const std::set<std::string> kNumericsKeys = {"quad_rel_tol", "hyp2f1_tol", "fd_step",
                                             "max_quad_depth"};

double require_number(const json& doc, const std::string& key)
{
  const auto& v = doc.at(key);
  if (!v.is_number()) {
    throw ConfigError(key, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError(key, "must be finite");
  }
  return x;
}

int require_integer(const json& doc, const std::string& key)
{
  const double x = require_number(doc, key);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ConfigError(key, "must be an integer, got " + doc.at(key).dump());
  }
  return static_cast<int>(x);
}

void read_if_present(const json& doc, const std::string& key, double& out)
{
  if (doc.contains(key)) {
    out = require_number(doc, key);
  }
}

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& prefix)
{
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(prefix + key, "unknown key");
    }
  }
}

std::string fmt_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

ScenarioConfig table1_defaults()
{
  ScenarioConfig cfg;
  cfg.omega = 2.87;
  cfg.alpha_los = 2.1;
  cfg.alpha_nlos = 4.0;
  cfg.m_los = 3;
  cfg.m_nlos = 1;
  cfg.p = 0.1;
  cfg.sigma2 = 1e-9;
  cfg.beta = per_km2_to_per_m2(300.0);
  cfg.delta = 0.5;
  cfg.kappa = 50.0;
  cfg.gamma = 100.0;
  cfg.lambda = 0.0;
  cfg.theta = 1.0;
  return cfg;
}

void validate(const ScenarioConfig& cfg)
{
  auto need = [](bool ok, const char* field, const std::string& msg) {
    if (!ok) {
      throw ConfigError(field, msg);
    }
  };
  auto finite = [](double v) { return std::isfinite(v); };

  need(finite(cfg.gamma) && cfg.gamma > 0, "gamma_m", "must be > 0");
  need(finite(cfg.lambda) && cfg.lambda >= 0, "lambda_per_km2", "must be >= 0");
  need(finite(cfg.omega) && cfg.omega > 0 && cfg.omega < std::numbers::pi, "omega_rad",
       "must lie in (0, pi), got " + fmt_double(cfg.omega));
  need(finite(cfg.p) && cfg.p > 0, "p_w", "must be > 0");
  need(finite(cfg.alpha_los) && cfg.alpha_los > 2, "alpha_los", "must be > 2");
  need(finite(cfg.alpha_nlos) && cfg.alpha_nlos > cfg.alpha_los, "alpha_nlos",
       "must exceed alpha_los (" + fmt_double(cfg.alpha_los) + "), got " +
           fmt_double(cfg.alpha_nlos));
  need(cfg.m_los >= 1, "m_los", "must be a positive integer");
  need(cfg.m_nlos >= 1, "m_nlos", "must be a positive integer");
  need(finite(cfg.sigma2) && cfg.sigma2 >= 0, "sigma2_w", "must be >= 0");
  need(finite(cfg.beta) && cfg.beta > 0, "beta_per_km2", "must be > 0");
  need(finite(cfg.delta) && cfg.delta > 0 && cfg.delta < 1, "delta", "must lie in (0, 1)");
  need(finite(cfg.kappa) && cfg.kappa > 0, "kappa_m", "must be > 0");
  need(finite(cfg.theta) && cfg.theta > 0, "theta_db", "must be finite (linear threshold > 0)");

  const auto& n = cfg.numerics;
  need(n.quad_rel_tol > 0, "numerics.quad_rel_tol", "must be > 0");
  need(n.hyp2f1_tol > 0, "numerics.hyp2f1_tol", "must be > 0");
  need(n.fd_step > 0, "numerics.fd_step", "must be > 0");
  need(n.max_quad_depth > 0, "numerics.max_quad_depth", "must be > 0");
}

ScenarioConfig parse_config(std::string_view text, const ConfigOverrides& overrides)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("<document>", "expected a JSON object");
  }
  check_keys(doc, kScenarioKeys, "");

  ScenarioConfig cfg = table1_defaults();
  read_if_present(doc, "omega_rad", cfg.omega);
  read_if_present(doc, "p_w", cfg.p);
  read_if_present(doc, "alpha_los", cfg.alpha_los);
  read_if_present(doc, "alpha_nlos", cfg.alpha_nlos);
  read_if_present(doc, "sigma2_w", cfg.sigma2);
  read_if_present(doc, "delta", cfg.delta);
  read_if_present(doc, "kappa_m", cfg.kappa);
  if (doc.contains("m_los")) {
    cfg.m_los = require_integer(doc, "m_los");
  }
  if (doc.contains("m_nlos")) {
    cfg.m_nlos = require_integer(doc, "m_nlos");
  }
  if (doc.contains("beta_per_km2")) {
    cfg.beta = per_km2_to_per_m2(require_number(doc, "beta_per_km2"));
  }

  auto pick = [&](const char* key, const std::optional<double>& flag) -> double {
    if (flag) {
      if (!std::isfinite(*flag)) {
        throw ConfigError(key, "must be finite");
      }
      return *flag;
    }
    if (!doc.contains(key)) {
      throw ConfigError(key, "required (not fixed by the defaults); give it in the "
                             "document or on the command line");
    }
    return require_number(doc, key);
  };
  cfg.gamma = pick("gamma_m", overrides.gamma_m);
  cfg.lambda = per_km2_to_per_m2(pick("lambda_per_km2", overrides.lambda_per_km2));
  cfg.theta = db_to_linear(pick("theta_db", overrides.theta_db));
  if (overrides.omega_rad) {
    cfg.omega = *overrides.omega_rad;
  }

  if (doc.contains("numerics")) {
    const auto& num = doc.at("numerics");
    if (!num.is_object()) {
      throw ConfigError("numerics", "expected an object");
    }
    check_keys(num, kNumericsKeys, "numerics.");
    auto& n = cfg.numerics;
    try {
      read_if_present(num, "quad_rel_tol", n.quad_rel_tol);
      read_if_present(num, "hyp2f1_tol", n.hyp2f1_tol);
      read_if_present(num, "fd_step", n.fd_step);
      if (num.contains("max_quad_depth")) {
        n.max_quad_depth = require_integer(num, "max_quad_depth");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("numerics." + e.field(), e.what());
    }
  }

  validate(cfg);
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg)
{
  json doc = json::object();
  doc["gamma_m"] = cfg.gamma;
  doc["lambda_per_km2"] = per_m2_to_per_km2(cfg.lambda);
  doc["omega_rad"] = cfg.omega;
  doc["p_w"] = cfg.p;
  doc["alpha_los"] = cfg.alpha_los;
  doc["alpha_nlos"] = cfg.alpha_nlos;
  doc["m_los"] = cfg.m_los;
  doc["m_nlos"] = cfg.m_nlos;
  doc["sigma2_w"] = cfg.sigma2;
  doc["beta_per_km2"] = per_m2_to_per_km2(cfg.beta);
  doc["delta"] = cfg.delta;
  doc["kappa_m"] = cfg.kappa;
  doc["theta_db"] = linear_to_db(cfg.theta);
  doc["numerics"] = {{"quad_rel_tol", cfg.numerics.quad_rel_tol},
                     {"hyp2f1_tol", cfg.numerics.hyp2f1_tol},
                     {"fd_step", cfg.numerics.fd_step},
                     {"max_quad_depth", cfg.numerics.max_quad_depth}};
  return doc.dump(2);
}

} // namespace uavcov
