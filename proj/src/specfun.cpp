#include "uavcov/specfun.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace uavcov {

namespace {

constexpr long kSeriesCap = 2'000'000;

[[noreturn]] void fail(const char* what, double a, double b, double c, double z)
{
  std::ostringstream msg;
  msg.precision(17);
  msg << "hyp2f1(" << a << ", " << b << "; " << c << "; " << z << "): " << what;
  throw NumericsError(msg.str());
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double rgamma(double x) { return is_nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

// Direct Gauss series at |x| < 1. The stopping rule accounts for a geometric
// tail with ratio |x|.
double series(double a, double b, double c, double x, double tol, double a0, double b0, double c0,
              double z0)
{
  double term = 1.0;
  double sum = 1.0;
  const double tail = 1.0 - std::abs(x);
  for (long n = 0; n < kSeriesCap; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    sum += term;
    if (term == 0.0) {
      return sum;
    }
    // Terms can still grow while n < |a|, |b|; only stop once they shrink.
    if (std::abs(term) <= tol * tail * std::abs(sum) && (n + 1.0) > std::abs(a) &&
        (n + 1.0) > std::abs(b)) {
      return sum;
    }
  }
  fail("series did not converge", a0, b0, c0, z0);
}

double via_pfaff(double a, double b, double c, double z, double tol)
{
  // 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1))
  return std::pow(1.0 - z, -a) * series(a, c - b, c, z / (z - 1.0), tol, a, b, c, z);
}

} // namespace

double hyp2f1(double a, double b, double c, double z, double tol)
{
  if (!(c > 0.0)) {
    throw std::invalid_argument("hyp2f1: c must be > 0, got " + std::to_string(c));
  }
  if (!(z <= 0.0)) {
    throw std::invalid_argument("hyp2f1: z must be <= 0, got " + std::to_string(z));
  }
  if (z == 0.0) {
    return 1.0;
  }
  if (z >= -0.5) {
    return series(a, b, c, z, tol, a, b, c, z);
  }
  const double amb = a - b;
  const bool near_integer_gap = std::abs(amb - std::round(amb)) < 1e-6;
  if (z >= -10.0 || near_integer_gap || is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return via_pfaff(a, b, c, z, tol);
  }

  // Connection formula for large |z|:
  //   2F1(a,b;c;z) = G(c)G(b-a)/(G(b)G(c-a)) (-z)^-a 2F1(a, a-c+1; a-b+1; 1/z)
  //                + G(c)G(a-b)/(G(a)G(c-b)) (-z)^-b 2F1(b, b-c+1; b-a+1; 1/z)
  const double w = 1.0 / z;
  const double gc = std::tgamma(c);
  const double k1 = gc * std::tgamma(b - a) * rgamma(b) * rgamma(c - a);
  const double k2 = gc * std::tgamma(a - b) * rgamma(a) * rgamma(c - b);
  double t1 = 0.0;
  double t2 = 0.0;
  if (k1 != 0.0) {
    t1 = k1 * std::pow(-z, -a) * series(a, a - c + 1.0, a - b + 1.0, w, tol, a, b, c, z);
  }
  if (k2 != 0.0) {
    t2 = k2 * std::pow(-z, -b) * series(b, b - c + 1.0, b - a + 1.0, w, tol, a, b, c, z);
  }
  const double result = t1 + t2;
  if (!std::isfinite(result)) {
    fail("connection formula produced a non-finite value", a, b, c, z);
  }
  return result;
}

double pochhammer(double x, int k)
{
  if (k < 0) {
    throw std::invalid_argument("pochhammer: k must be >= 0");
  }
  double out = 1.0;
  for (int i = 0; i < k; ++i) {
    out *= x + i;
  }
  return out;
}

double complete_bell(std::span<const double> x)
{
  const std::size_t n = x.size();
  std::vector<double> bell(n + 1, 0.0);
  bell[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    // B_{k+1} = sum_i C(k,i) B_{k-i} x_{i+1}
    double binom = 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      acc += binom * bell[k - i] * x[i];
      binom = binom * static_cast<double>(k - i) / static_cast<double>(i + 1);
    }
    bell[k + 1] = acc;
  }
  return bell[n];
}

} // namespace uavcov
