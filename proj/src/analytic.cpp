#include "uavcov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavcov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClampTol = 1e-9;

// Scenario-wide quantities shared by every r1 evaluation.
class Model {
public:
  explicit Model(const ScenarioConfig& cfg)
      : cfg_(cfg), env_(UrbanEnvironment::from(cfg)), geom_(LinkGeometry::from(cfg))
  {
    const int max_d = buildings_crossed(env_, geom_.u) + 2;
    plos_.reserve(static_cast<std::size_t>(max_d) + 1);
    for (int d = 0; d <= max_d; ++d) {
      plos_.push_back(p_los_for_crossings(env_, cfg.gamma, d));
    }
  }

  const ScenarioConfig& cfg() const { return cfg_; }
  const UrbanEnvironment& env() const { return env_; }
  const LinkGeometry& geom() const { return geom_; }

  double plos(int d) const
  {
    return d < static_cast<int>(plos_.size()) ? plos_[static_cast<std::size_t>(d)]
                                              : p_los_for_crossings(env_, cfg_.gamma, d);
  }
  double weight(int d, bool los) const { return los ? plos(d) : 1.0 - plos(d); }

  double thinned(double lo, double hi, bool los) const
  {
    double acc = 0.0;
    for (const auto& seg : los_segments(env_, lo, hi)) {
      acc += weight(seg.crossings, los) * 0.5 * (seg.hi * seg.hi - seg.lo * seg.lo);
    }
    return acc;
  }

  // Density of (R1 = r1, type) given the LOS probability p1 at r1.
  double density(double r1, double p1, bool serving_los) const
  {
    const double w = serving_los ? p1 : 1.0 - p1;
    if (w == 0.0 || cfg_.lambda == 0.0) {
      return 0.0;
    }
    const double other = serving_los ? bound_nlos_given_los_serving(r1, geom_)
                                     : bound_los_given_nlos_serving(r1, geom_);
    const double mass = thinned(0.0, r1, serving_los) + thinned(0.0, other, !serving_los);
    return w * kTwoPi * cfg_.lambda * r1 * std::exp(-kTwoPi * cfg_.lambda * mass);
  }

  LaplaceDerivatives laplace(bool serving_los, bool interferer_los, double r1, double s,
                             int order) const;

  double conditional(double r1, bool serving_los) const;

private:
  ScenarioConfig cfg_;
  UrbanEnvironment env_;
  LinkGeometry geom_;
  std::vector<double> plos_;
};

double binomial(int n, int k)
{
  double out = 1.0;
  for (int i = 1; i <= k; ++i) {
    out = out * (n - k + i) / i;
  }
  return out;
}

LaplaceDerivatives Model::laplace(bool serving_los, bool interferer_los, double r1, double s,
                                  int order) const
{
  const int m = interferer_los ? cfg_.m_los : cfg_.m_nlos;
  const double alpha = interferer_los ? cfg_.alpha_los : cfg_.alpha_nlos;
  const double g2 = cfg_.gamma * cfg_.gamma;
  const double lo = interferer_lower_bound(geom_, r1, serving_los, interferer_los);
  const auto segs = los_segments(env_, lo, geom_.u);
  const double tol = cfg_.numerics.hyp2f1_tol;

  // Zeroth order: integral of (1 - g) r dr in closed form,
  // (1/2) sum_k C(m,k) (-1)^(k+1) [Y 2F1(k, 2/alpha; 1 + 2/alpha; -m Y^(alpha/2) / s)]_lo^hi.
  const double b = 2.0 / alpha;
  const auto primitive = [&](double r) {
    const double y2 = r * r + g2;
    const double z = -m * std::pow(y2, 0.5 * alpha) / s;
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      acc += sign * binomial(m, k) * y2 * hyp2f1(k, b, 1.0 + b, z, tol);
    }
    return 0.5 * acc;
  };

  double a0 = 0.0;
  for (const auto& seg : segs) {
    const double w = weight(seg.crossings, interferer_los);
    if (w == 0.0) {
      continue;
    }
    a0 += w * (primitive(seg.hi) - primitive(seg.lo));
  }
  a0 *= kTwoPi * cfg_.lambda;

  // s^k A^(k)(s) = (-1)^(k+1) 2 pi lambda (m)_k sum_j w_j int x^k (1+x)^-(m+k) r dr,
  // x = (s/m)(r^2 + gamma^2)^(-alpha/2).
  std::vector<double> scaled_a(static_cast<std::size_t>(order), 0.0);
  for (int k = 1; k <= order; ++k) {
    double acc = 0.0;
    for (const auto& seg : segs) {
      const double w = weight(seg.crossings, interferer_los);
      if (w == 0.0) {
        continue;
      }
      const auto integrand = [&](double r) {
        const double x = (s / m) * std::pow(r * r + g2, -0.5 * alpha);
        return std::pow(x, k) * std::pow(1.0 + x, -(m + k)) * r;
      };
      QuadratureResult q;
      try {
        q = integrate(integrand, seg.lo, seg.hi, cfg_.numerics.quad_rel_tol,
                      cfg_.numerics.max_quad_depth);
      } catch (const NumericsError& e) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "laplace derivative (r1=" << r1 << ", s=" << s << ", order=" << k
            << "): " << e.what();
        throw NumericsError(msg.str());
      }
      acc += w * q.value;
    }
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    scaled_a[static_cast<std::size_t>(k - 1)] = sign * kTwoPi * cfg_.lambda * pochhammer(m, k) * acc;
  }

  LaplaceDerivatives out;
  out.order = order;
  out.s = s;
  const double l0 = std::exp(-a0);
  std::vector<double> neg(scaled_a.size());
  std::transform(scaled_a.begin(), scaled_a.end(), neg.begin(), [](double v) { return -v; });
  for (int n = 0; n <= order; ++n) {
    const double sc = l0 * complete_bell(std::span<const double>(neg.data(), static_cast<std::size_t>(n)));
    out.scaled.push_back(sc);
    out.values.push_back(sc / std::pow(s, n));
  }
  return out;
}

double Model::conditional(double r1, bool serving_los) const
{
  const int m = serving_los ? cfg_.m_los : cfg_.m_nlos;
  const double s = serving_laplace_argument(cfg_, r1, serving_los);
  const int order = m - 1;
  const auto ll = laplace(serving_los, true, r1, s, order);
  const auto ln = laplace(serving_los, false, r1, s, order);
  const double nu = s * cfg_.sigma2 / (cfg_.p * geom_.eta);
  const double noise = std::exp(-nu);

  // sum_n (-1)^n / n! sum_{iL+iN+is=n} n!/(iL! iN! is!) (-nu)^is e^-nu s^iL L_L^(iL) s^iN L_N^(iN)
  std::vector<double> fact(static_cast<std::size_t>(m) + 1, 1.0);
  for (int i = 1; i <= m; ++i) {
    fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
  }
  double total = 0.0;
  for (int n = 0; n < m; ++n) {
    double inner = 0.0;
    for (int il = 0; il <= n; ++il) {
      for (int in = 0; in <= n - il; ++in) {
        const int is = n - il - in;
        const double multinom = fact[static_cast<std::size_t>(n)] /
                                (fact[static_cast<std::size_t>(il)] * fact[static_cast<std::size_t>(in)] *
                                 fact[static_cast<std::size_t>(is)]);
        inner += multinom * std::pow(-nu, is) * noise * ll.scaled[static_cast<std::size_t>(il)] *
                 ln.scaled[static_cast<std::size_t>(in)];
      }
    }
    total += ((n % 2 == 0) ? 1.0 : -1.0) / fact[static_cast<std::size_t>(n)] * inner;
  }

  if (total < 0.0 && total >= -kClampTol) {
    return 0.0;
  }
  if (total > 1.0 && total <= 1.0 + kClampTol) {
    return 1.0;
  }
  if (!(total >= 0.0 && total <= 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "conditional coverage out of [0,1]: " << total << " at r1=" << r1
        << (serving_los ? " (LOS serving)" : " (NLOS serving)");
    throw NumericsError(msg.str());
  }
  return total;
}

} // namespace

double thinned_intensity_integral(const UrbanEnvironment& env, double gamma, double lo, double hi,
                                  bool los)
{
  double acc = 0.0;
  for (const auto& seg : los_segments(env, lo, hi)) {
    const double p = p_los_for_crossings(env, gamma, seg.crossings);
    acc += (los ? p : 1.0 - p) * 0.5 * (seg.hi * seg.hi - seg.lo * seg.lo);
  }
  return acc;
}

ServingDensity serving_density(const ScenarioConfig& cfg, double r1)
{
  const Model model(cfg);
  const double p1 = p_los(model.env(), cfg.gamma, r1);
  return {r1, model.density(r1, p1, true), model.density(r1, p1, false)};
}

double serving_density(const ScenarioConfig& cfg, double r1, bool serving_los)
{
  const auto d = serving_density(cfg, r1);
  return serving_los ? d.f_los : d.f_nlos;
}

namespace {

// Integral of f_los (los = true) or f_nlos over [0, u], split at the LOS steps.
double integrate_density(const Model& model, bool los)
{
  double acc = 0.0;
  for (const auto& seg : los_segments(model.env(), 0.0, model.geom().u)) {
    const double p1 = model.plos(seg.crossings);
    if ((los ? p1 : 1.0 - p1) == 0.0) {
      continue;
    }
    const auto f = [&](double r1) { return model.density(r1, p1, los); };
    acc += integrate(f, seg.lo, seg.hi, model.cfg().numerics.quad_rel_tol,
                     model.cfg().numerics.max_quad_depth)
               .value;
  }
  return acc;
}

} // namespace

double p_los_serving(const ScenarioConfig& cfg)
{
  if (!(cfg.lambda > 0.0)) {
    throw std::domain_error("p_los_serving: lambda = 0, no association possible");
  }
  const Model model(cfg);
  const double ratio =
      integrate_density(model, true) / association_probability(cfg.lambda, model.geom().u);
  return std::min(1.0, ratio);
}

double p_los_serving_sigmoid(const ScenarioConfig& cfg, double a, double b)
{
  if (!(cfg.lambda > 0.0)) {
    throw std::domain_error("p_los_serving_sigmoid: lambda = 0, no association possible");
  }
  const LinkGeometry geom = LinkGeometry::from(cfg);
  const double tol = cfg.numerics.quad_rel_tol;
  const int depth = cfg.numerics.max_quad_depth;
  const auto q = [&](double r) { return p_los_sigmoid(a, b, cfg.gamma, r); };
  const auto mass = [&](double hi, bool los) {
    if (!(hi > 0.0)) {
      return 0.0;
    }
    const auto f = [&](double r) { return (los ? q(r) : 1.0 - q(r)) * r; };
    return integrate(f, 0.0, hi, tol, depth).value;
  };
  const auto f_los = [&](double r1) {
    const double bn = bound_nlos_given_los_serving(r1, geom);
    return q(r1) * kTwoPi * cfg.lambda * r1 *
           std::exp(-kTwoPi * cfg.lambda * (mass(r1, true) + mass(bn, false)));
  };
  return std::min(1.0, integrate(f_los, 0.0, geom.u, tol, depth).value /
                           association_probability(cfg.lambda, geom.u));
}

double interferer_lower_bound(const LinkGeometry& geom, double r1, bool serving_los,
                              bool interferer_los)
{
  if (serving_los == interferer_los) {
    return r1;
  }
  return serving_los ? bound_nlos_given_los_serving(r1, geom)
                     : bound_los_given_nlos_serving(r1, geom);
}

double serving_laplace_argument(const ScenarioConfig& cfg, double r1, bool serving_los)
{
  const int m = serving_los ? cfg.m_los : cfg.m_nlos;
  const double alpha = serving_los ? cfg.alpha_los : cfg.alpha_nlos;
  return m * cfg.theta * std::pow(r1 * r1 + cfg.gamma * cfg.gamma, 0.5 * alpha);
}

LaplaceDerivatives laplace_derivatives(const ScenarioConfig& cfg, bool serving_los,
                                       bool interferer_los, double r1, double s, int order)
{
  const int m_serving = serving_los ? cfg.m_los : cfg.m_nlos;
  if (order < 0 || order > m_serving - 1) {
    throw std::invalid_argument("laplace_derivatives: order must lie in [0, m_serving - 1]");
  }
  if (!(s > 0.0)) {
    throw std::invalid_argument("laplace_derivatives: s must be > 0");
  }
  return Model(cfg).laplace(serving_los, interferer_los, r1, s, order);
}

double conditional_coverage(const ScenarioConfig& cfg, double r1, bool serving_los)
{
  return Model(cfg).conditional(r1, serving_los);
}

AnalyticResult coverage_probability(const ScenarioConfig& cfg)
{
  AnalyticResult out;
  const Model model(cfg);
  const double u = model.geom().u;
  out.p_assoc = association_probability(cfg.lambda, u);
  if (cfg.lambda == 0.0) {
    out.p_los_serving = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const double tol = cfg.numerics.quad_rel_tol;
  const int depth = cfg.numerics.max_quad_depth;
  double p_cov = 0.0;
  double los_mass = 0.0;
  for (const auto& seg : los_segments(model.env(), 0.0, u)) {
    const double p1 = model.plos(seg.crossings);
    const auto integrand = [&](double r1) {
      double acc = 0.0;
      if (p1 > 0.0) {
        const double f = model.density(r1, p1, true);
        if (f > 0.0) {
          acc += model.conditional(r1, true) * f;
        }
      }
      if (p1 < 1.0) {
        const double f = model.density(r1, p1, false);
        if (f > 0.0) {
          acc += model.conditional(r1, false) * f;
        }
      }
      return acc;
    };
    try {
      const auto q = integrate(integrand, seg.lo, seg.hi, tol, depth);
      out.quad.add(q);
      p_cov += q.value;
      if (p1 > 0.0) {
        const auto fl = [&](double r1) { return model.density(r1, p1, true); };
        los_mass += integrate(fl, seg.lo, seg.hi, tol, depth).value;
      }
    } catch (const NumericsError& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "coverage integral over r1 in [" << seg.lo << ", " << seg.hi << "]: " << e.what();
      throw NumericsError(msg.str());
    }
  }
  out.p_cov = p_cov;
  out.p_los_serving = out.p_assoc > 0.0 ? los_mass / out.p_assoc
                                        : std::numeric_limits<double>::quiet_NaN();
  return out;
}

} // namespace uavcov
