#include "uavcov/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "uavcov/errors.hpp"

namespace uavcov::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerics = 3;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_double(std::string_view text)
{
  while (!text.empty() && text.front() == ' ') {
    text.remove_prefix(1);
  }
  while (!text.empty() && text.back() == ' ') {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a finite number: '" + std::string(text) + "'");
  }
  return v;
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') {
      q += '"';
    }
    q += c;
  }
  return q + '"';
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("<config>", "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

unsigned resolve_threads(unsigned requested)
{
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

std::string_view to_string(Axis axis)
{
  switch (axis) {
  case Axis::gamma:
    return "gamma";
  case Axis::lambda:
    return "lambda";
  case Axis::omega:
    return "omega";
  case Axis::theta_db:
    return "theta_db";
  }
  return "?";
}

Axis parse_axis(std::string_view text)
{
  if (text == "gamma") {
    return Axis::gamma;
  }
  if (text == "lambda") {
    return Axis::lambda;
  }
  if (text == "omega") {
    return Axis::omega;
  }
  if (text == "theta_db") {
    return Axis::theta_db;
  }
  throw std::invalid_argument("unknown axis '" + std::string(text) + "'");
}

std::string format_number(double v)
{
  if (!std::isfinite(v)) {
    return {};
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> parse_values(std::string_view text)
{
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
      throw std::invalid_argument("range must be lo:hi:step");
    }
    const double lo = parse_double(text.substr(0, c1));
    const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(text.substr(c2 + 1));
    if (!(step > 0.0) || hi < lo) {
      throw std::invalid_argument("range needs step > 0 and hi >= lo");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (n > 1000000) {
      throw std::invalid_argument("range has too many points");
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(lo + static_cast<double>(i) * step);
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    out.push_back(parse_double(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, Axis axis, double value)
{
  ScenarioConfig cfg = base;
  switch (axis) {
  case Axis::gamma:
    cfg.gamma = value;
    break;
  case Axis::lambda:
    cfg.lambda = per_km2_to_per_m2(value);
    break;
  case Axis::omega:
    cfg.omega = value;
    break;
  case Axis::theta_db:
    cfg.theta = db_to_linear(value);
    break;
  }
  validate(cfg);
  return cfg;
}

SweepRow evaluate_point(const ScenarioConfig& base, Axis axis, double value, bool with_mc,
                        const McConfig& mc)
{
  SweepRow row;
  row.axis = axis;
  row.axis_value = value;
  row.cfg = apply_axis(base, axis, value);
  try {
    const AnalyticResult a = coverage_probability(row.cfg);
    row.p_cov_analytic = a.p_cov;
    row.p_assoc = a.p_assoc;
    row.p_los_serving = a.p_los_serving;
  } catch (const std::exception& e) {
    row.p_cov_analytic = row.p_assoc = row.p_los_serving = kNaN;
    row.error = e.what();
  }
  if (with_mc) {
    try {
      row.mc = estimate(row.cfg, mc);
    } catch (const std::exception& e) {
      row.error += row.error.empty() ? "" : "; ";
      row.error += e.what();
    }
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
  if (spec.values.empty()) {
    throw ConfigError(std::string(to_string(spec.axis)), "sweep has no values");
  }
  for (double v : spec.values) {
    apply_axis(spec.base, spec.axis, v);
  }
  McConfig mc = spec.mc;
  mc.threads = 1;

  std::vector<SweepRow> rows(spec.values.size());
  const unsigned workers =
      std::min<unsigned>(resolve_threads(spec.threads), static_cast<unsigned>(rows.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = evaluate_point(spec.base, spec.axis, spec.values[i], spec.with_mc, mc);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back(work);
    }
  }
  return rows;
}

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const SweepRow& row)
{
  const auto& c = row.cfg;
  os << to_string(row.axis) << ',' << format_number(row.axis_value) << ','
     << format_number(c.gamma) << ',' << format_number(per_m2_to_per_km2(c.lambda)) << ','
     << format_number(c.omega) << ',' << format_number(linear_to_db(c.theta)) << ','
     << format_number(row.p_cov_analytic) << ',' << format_number(row.p_assoc) << ','
     << format_number(row.p_los_serving) << ',';
  if (row.mc) {
    os << format_number(row.mc->p_cov_hat) << ',' << format_number(row.mc->ci95_halfwidth) << ','
       << row.mc->trials << ',' << row.mc->seed << ',' << to_string(row.mc->los_mode) << ',';
  } else {
    os << ",,,,,";
  }
  os << csv_field(row.error) << '\n';
}

double height_percentile(double gamma, double kappa)
{
  return -std::expm1(-gamma * gamma / (2.0 * kappa * kappa));
}

OptimalHeight optimal_height(const ScenarioConfig& base, double lo, double hi, int coarse_points,
                             int max_evals, double ripple_tol, double gamma_tol)
{
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ConfigError("gamma_m", "height range needs 0 < lo < hi");
  }
  if (coarse_points < 3 || coarse_points > max_evals) {
    throw std::invalid_argument("need 3 <= coarse points <= evaluation budget");
  }
  apply_axis(base, Axis::gamma, lo);
  apply_axis(base, Axis::gamma, hi);

  OptimalHeight best;
  auto eval = [&](double g) {
    ++best.evaluations;
    const double v = coverage_probability(apply_axis(base, Axis::gamma, g)).p_cov;
    if (best.evaluations == 1 || v > best.p_cov) {
      best.p_cov = v;
      best.gamma = g;
    }
    return v;
  };

  const auto n = static_cast<std::size_t>(coarse_points);
  std::vector<double> g(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    p[i] = eval(g[i]);
  }
  const auto imax = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  best.at_endpoint = imax == 0 || imax + 1 == n;

  int peaks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || p[i] >= p[i - 1];
    const bool right_ok = i + 1 == n || p[i] > p[i + 1];
    if (!left_ok || !right_ok) {
      continue;
    }
    double left_min = p[i];
    bool has_left = false;
    for (std::size_t j = i; j-- > 0 && p[j] <= p[i];) {
      left_min = std::min(left_min, p[j]);
      has_left = true;
    }
    double right_min = p[i];
    bool has_right = false;
    for (std::size_t j = i + 1; j < n && p[j] <= p[i]; ++j) {
      right_min = std::min(right_min, p[j]);
      has_right = true;
    }
    double col = has_left && has_right ? std::max(left_min, right_min)
                                       : (has_left ? left_min : right_min);
    if (p[i] - col > ripple_tol) {
      ++peaks;
    }
  }
  best.multimodal = peaks > 1;

  double a = g[imax == 0 ? 0 : imax - 1];
  double b = g[std::min(imax + 1, n - 1)];
  const int budget = max_evals - best.evaluations;
  if (budget <= 0) {
    return best;
  }
  if (best.multimodal) {
    const int fine = std::min(budget, 41);
    for (int k = 1; k <= fine; ++k) {
      eval(a + (b - a) * k / (fine + 1));
    }
    return best;
  }

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = eval(x1);
  double f2 = budget >= 2 ? eval(x2) : -1.0;
  while (b - a > gamma_tol && best.evaluations < max_evals) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = eval(x2);
    }
  }
  return best;
}

namespace {

struct Options {
  std::string config_path;
  std::optional<double> gamma;
  std::optional<double> lambda_per_km2;
  std::optional<double> theta_db;
  std::optional<double> omega_rad;
  std::optional<double> omega_deg;
  bool mc = false;
  std::uint64_t trials = 200000;
  std::uint64_t seed = 1;
  std::string los_mode = "bernoulli";
  std::string out_path;
  unsigned threads = 1;

  // sweep
  std::string axis = "gamma";
  std::string values;
  std::string preset;

  // optimal-height
  double gamma_min = 10.0;
  double gamma_max = 300.0;
  int coarse = 30;
  int max_evals = 80;
  double ripple_tol = 1e-3;

  // validate
  std::string gammas = "40,100,200";
  std::string lambdas = "25,100";
  std::string thetas = "-5,5";
  double abs_tol = 0.015;
  double corrupt = 0.0;

  // los-curve
  std::optional<double> sigmoid_a;
  std::optional<double> sigmoid_b;
};

void add_common(CLI::App* app, Options& o)
{
  app->add_option("--config", o.config_path, "Scenario JSON document");
  app->add_option("--gamma", o.gamma, "UAV height [m]");
  app->add_option("--lambda-per-km2", o.lambda_per_km2, "UAV density [1/km^2]");
  app->add_option("--theta-db", o.theta_db, "SINR threshold [dB]");
  auto* rad = app->add_option("--omega-rad", o.omega_rad, "Antenna beamwidth [rad]");
  app->add_option("--omega-deg", o.omega_deg, "Antenna beamwidth [deg]")->excludes(rad);
  app->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Monte Carlo seed");
  app->add_option("--los-mode", o.los_mode, "bernoulli or grid")
      ->check(CLI::IsMember({"bernoulli", "grid"}));
  app->add_option("--out", o.out_path, "Write CSV here instead of stdout");
  app->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
}

ConfigOverrides overrides_of(const Options& o)
{
  ConfigOverrides ov;
  ov.gamma_m = o.gamma;
  ov.lambda_per_km2 = o.lambda_per_km2;
  ov.theta_db = o.theta_db;
  ov.omega_rad = o.omega_rad;
  if (o.omega_deg) {
    ov.omega_rad = *o.omega_deg * std::numbers::pi / 180.0;
  }
  return ov;
}

ScenarioConfig load(const Options& o, const ConfigOverrides& ov)
{
  const std::string text = o.config_path.empty() ? std::string("{}") : read_file(o.config_path);
  return parse_config(text, ov);
}

McConfig mc_of(const Options& o)
{
  McConfig mc;
  mc.trials = o.trials;
  mc.seed = o.seed;
  mc.los_mode = parse_los_mode(o.los_mode);
  mc.threads = o.threads;
  return mc;
}

void emit(const Options& o, std::ostream& out, const std::string& csv)
{
  if (o.out_path.empty()) {
    out << csv;
    out.flush();
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) {
    throw ConfigError("--out", "cannot write " + o.out_path);
  }
  f << csv;
}

int cmd_coverage(const Options& o, std::ostream& out)
{
  const ScenarioConfig cfg = load(o, overrides_of(o));
  const SweepRow row = evaluate_point(cfg, Axis::gamma, cfg.gamma, o.mc, mc_of(o));
  std::ostringstream csv;
  write_csv_header(csv);
  write_csv_row(csv, row);
  emit(o, out, csv.str());
  return row.error.empty() ? kExitOk : kExitNumerics;
}

struct PresetFamily {
  ConfigOverrides fixed;
};

std::vector<PresetFamily> preset_families(const std::string& name)
{
  auto fam = [](double lambda, double theta, std::optional<double> omega) {
    PresetFamily f;
    f.fixed.lambda_per_km2 = lambda;
    f.fixed.theta_db = theta;
    f.fixed.omega_rad = omega;
    return f;
  };
  if (name == "fig2") {
    return {fam(25, -5, {}), fam(25, 0, {}), fam(25, 5, {})};
  }
  if (name == "fig3") {
    return {fam(5, 0, {}), fam(50, 0, {}), fam(100, 0, {})};
  }
  if (name == "fig5") {
    return {fam(50, 0, 1.0), fam(50, 0, 2.0), fam(50, 0, 2.87)};
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

int cmd_sweep(const Options& o, std::ostream& out)
{
  std::vector<SweepSpec> specs;
  if (!o.preset.empty()) {
    const std::vector<double> gammas = parse_values(o.values.empty() ? "10:300:10" : o.values);
    for (const auto& fam : preset_families(o.preset)) {
      ConfigOverrides ov = overrides_of(o);
      ov.lambda_per_km2 = fam.fixed.lambda_per_km2;
      ov.theta_db = fam.fixed.theta_db;
      if (fam.fixed.omega_rad) {
        ov.omega_rad = fam.fixed.omega_rad;
      }
      ov.gamma_m = gammas.front();
      SweepSpec s;
      s.axis = Axis::gamma;
      s.values = gammas;
      s.base = load(o, ov);
      specs.push_back(std::move(s));
    }
  } else {
    if (o.values.empty()) {
      throw std::invalid_argument("sweep needs --values or --preset");
    }
    SweepSpec s;
    s.axis = parse_axis(o.axis);
    s.values = parse_values(o.values);
    ConfigOverrides ov = overrides_of(o);
    switch (s.axis) {
    case Axis::gamma:
      ov.gamma_m = ov.gamma_m.value_or(s.values.front());
      break;
    case Axis::lambda:
      ov.lambda_per_km2 = ov.lambda_per_km2.value_or(s.values.front());
      break;
    case Axis::theta_db:
      ov.theta_db = ov.theta_db.value_or(s.values.front());
      break;
    case Axis::omega:
      break;
    }
    s.base = load(o, ov);
    specs.push_back(std::move(s));
  }

  std::ostringstream csv;
  write_csv_header(csv);
  bool failed = false;
  for (auto& s : specs) {
    s.with_mc = o.mc;
    s.mc = mc_of(o);
    s.threads = o.threads;
    for (const auto& row : run_sweep(s)) {
      failed = failed || !row.error.empty();
      write_csv_row(csv, row);
    }
  }
  emit(o, out, csv.str());
  return failed ? kExitNumerics : kExitOk;
}

int cmd_optimal_height(const Options& o, std::ostream& out, std::ostream& err)
{
  ConfigOverrides ov = overrides_of(o);
  ov.gamma_m = o.gamma_min;
  const ScenarioConfig cfg = load(o, ov);
  const OptimalHeight r =
      optimal_height(cfg, o.gamma_min, o.gamma_max, o.coarse, o.max_evals, o.ripple_tol);
  if (r.at_endpoint) {
    err << "warning: maximum at the end of the height range (gamma = " << format_number(r.gamma)
        << " m)\n";
  }
  if (r.multimodal) {
    err << "warning: several local maxima on the coarse grid; refined on a fine grid\n";
  }
  std::ostringstream csv;
  csv << "gamma_m,p_cov_analytic,lambda_per_km2,omega_rad,theta_db,at_endpoint,multimodal,"
         "evaluations\n";
  csv << format_number(r.gamma) << ',' << format_number(r.p_cov) << ','
      << format_number(per_m2_to_per_km2(cfg.lambda)) << ',' << format_number(cfg.omega) << ','
      << format_number(linear_to_db(cfg.theta)) << ',' << int(r.at_endpoint) << ','
      << int(r.multimodal) << ',' << r.evaluations << '\n';
  emit(o, out, csv.str());
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err)
{
  const auto gammas = parse_values(o.gammas);
  const auto lambdas = parse_values(o.lambdas);
  const auto thetas = parse_values(o.thetas);
  ConfigOverrides ov = overrides_of(o);
  ov.gamma_m = gammas.front();
  ov.lambda_per_km2 = lambdas.front();
  ov.theta_db = thetas.front();
  const ScenarioConfig base = load(o, ov);
  const McConfig mc = mc_of(o);

  std::vector<ScenarioConfig> grid;
  for (double g : gammas) {
    for (double l : lambdas) {
      for (double t : thetas) {
        grid.push_back(
            apply_axis(apply_axis(apply_axis(base, Axis::gamma, g), Axis::lambda, l),
                       Axis::theta_db, t));
      }
    }
  }

  std::ostringstream csv;
  csv << "gamma_m,lambda_per_km2,theta_db,p_cov_analytic,p_cov_mc,mc_ci95,abs_diff,tolerance,"
         "result,low_power,error\n";
  int passed = 0, failed = 0, errors = 0, low_power = 0;
  for (const auto& cfg : grid) {
    double analytic = kNaN, diff = kNaN, tol = kNaN;
    McEstimate est;
    std::string result = "ERROR", error;
    bool weak = false;
    try {
      analytic = coverage_probability(cfg).p_cov + o.corrupt;
      est = estimate(cfg, mc);
      diff = std::abs(analytic - est.p_cov_hat);
      tol = std::max(o.abs_tol, 3.0 * est.ci95_halfwidth);
      weak = 3.0 * est.ci95_halfwidth > o.abs_tol;
      result = diff <= tol ? "PASS" : "FAIL";
    } catch (const std::exception& e) {
      error = e.what();
    }
    (result == "PASS" ? passed : result == "FAIL" ? failed : errors)++;
    low_power += weak;
    csv << format_number(cfg.gamma) << ',' << format_number(per_m2_to_per_km2(cfg.lambda)) << ','
        << format_number(linear_to_db(cfg.theta)) << ',' << format_number(analytic) << ','
        << (error.empty() ? format_number(est.p_cov_hat) : "") << ','
        << (error.empty() ? format_number(est.ci95_halfwidth) : "") << ','
        << format_number(diff) << ',' << format_number(tol) << ',' << result << ','
        << int(weak) << ',' << csv_field(error) << '\n';
  }
  emit(o, out, csv.str());
  err << "validate: " << passed << '/' << grid.size() << " points PASS";
  if (failed) {
    err << ", " << failed << " FAIL";
  }
  if (errors) {
    err << ", " << errors << " ERROR";
  }
  err << '\n';
  if (low_power) {
    err << "warning: " << low_power
        << " point(s) are low-power comparisons (3 * ci95 exceeds abs_tol)\n";
  }
  if (errors) {
    return kExitNumerics;
  }
  return failed ? kExitValidation : kExitOk;
}

int cmd_los_curve(const Options& o, std::ostream& out)
{
  if (o.sigmoid_a.has_value() != o.sigmoid_b.has_value()) {
    throw std::invalid_argument("--sigmoid-a and --sigmoid-b go together");
  }
  const auto gammas = parse_values(o.values.empty() ? "5:300:5" : o.values);
  ConfigOverrides ov = overrides_of(o);
  ov.gamma_m = gammas.front();
  ov.theta_db = ov.theta_db.value_or(0.0);
  const ScenarioConfig base = load(o, ov);
  const McConfig mc = mc_of(o);

  std::ostringstream csv;
  csv << "gamma_m,height_percentile,p_los_serving,p_los_serving_mc,mc_ci95,p_los_sigmoid,trials,"
         "seed,los_mode\n";
  for (double g : gammas) {
    const ScenarioConfig cfg = apply_axis(base, Axis::gamma, g);
    const bool any = cfg.lambda > 0.0;
    csv << format_number(g) << ',' << format_number(height_percentile(g, cfg.kappa)) << ','
        << format_number(any ? p_los_serving(cfg) : kNaN) << ',';
    if (o.mc) {
      const McEstimate est = estimate(cfg, mc);
      csv << format_number(est.p_los_serving_hat) << ','
          << format_number(est.associated ? ci95_halfwidth(est.p_los_serving_hat, est.associated)
                                          : kNaN)
          << ',';
    } else {
      csv << ",,";
    }
    csv << format_number(o.sigmoid_a && any ? p_los_serving_sigmoid(cfg, *o.sigmoid_a,
                                                                     *o.sigmoid_b)
                                            : kNaN)
        << ',';
    if (o.mc) {
      csv << mc.trials << ',' << mc.seed << ',' << to_string(mc.los_mode) << '\n';
    } else {
      csv << ",,\n";
    }
  }
  emit(o, out, csv.str());
  return kExitOk;
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Coverage probability of a UAV network over an urban building grid", "uavcov"};
  app.require_subcommand(1);
  Options o;

  auto* coverage = app.add_subcommand("coverage", "Evaluate one scenario");
  add_common(coverage, o);
  coverage->add_flag("--mc", o.mc, "Also run Monte Carlo");

  auto* sweep = app.add_subcommand("sweep", "Evaluate along one parameter axis");
  add_common(sweep, o);
  sweep->add_flag("--mc", o.mc, "Also run Monte Carlo at every point");
  sweep->add_option("--axis", o.axis, "gamma, lambda, omega or theta_db")
      ->check(CLI::IsMember({"gamma", "lambda", "omega", "theta_db"}));
  sweep->add_option("--values", o.values, "lo:hi:step or a comma-separated list");
  sweep->add_option("--preset", o.preset, "Figure families over gamma")
      ->check(CLI::IsMember({"fig2", "fig3", "fig5"}));

  auto* opt = app.add_subcommand("optimal-height", "Height that maximises coverage");
  add_common(opt, o);
  opt->add_option("--gamma-min", o.gamma_min, "Lower end of the height range [m]");
  opt->add_option("--gamma-max", o.gamma_max, "Upper end of the height range [m]");
  opt->add_option("--coarse", o.coarse, "Coarse grid points");
  opt->add_option("--max-evals", o.max_evals, "Evaluation budget");
  opt->add_option("--ripple-tol", o.ripple_tol, "Prominence that counts as a separate maximum");

  auto* val = app.add_subcommand("validate", "Compare analytic coverage with Monte Carlo");
  add_common(val, o);
  val->add_option("--gammas", o.gammas, "Heights [m]");
  val->add_option("--lambdas", o.lambdas, "Densities [1/km^2]");
  val->add_option("--thetas", o.thetas, "Thresholds [dB]");
  val->add_option("--abs-tol", o.abs_tol, "Absolute tolerance floor");
  val->add_option("--corrupt-analytic", o.corrupt)->group("");

  auto* los = app.add_subcommand("los-curve", "LOS probability of the serving link over height");
  add_common(los, o);
  los->add_flag("--mc", o.mc, "Add the Monte Carlo estimate");
  los->add_option("--values", o.values, "Heights, lo:hi:step or a list");
  los->add_option("--sigmoid-a", o.sigmoid_a, "Sigmoid LOS model parameter a");
  los->add_option("--sigmoid-b", o.sigmoid_b, "Sigmoid LOS model parameter b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (coverage->parsed()) {
      return cmd_coverage(o, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(o, out);
    }
    if (opt->parsed()) {
      return cmd_optimal_height(o, out, err);
    }
    if (val->parsed()) {
      return cmd_validate(o, out, err);
    }
    return cmd_los_curve(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericsError& e) {
    err << "numerics error: " << e.what() << '\n';
    return kExitNumerics;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerics;
  }
}

} // namespace uavcov::cli
