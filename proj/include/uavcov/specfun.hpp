#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "uavcov/errors.hpp"

namespace uavcov {

/// Gauss hypergeometric 2F1(a, b; c; z) for real z <= 0 and c > 0.
///
/// |z| <= 1/2 sums the series directly. Up to |z| = 10 the Pfaff
/// transformation maps z to z/(z-1) in [1/3, 10/11]. Beyond that the 1/z
/// connection formula is used (series in 1/z, |1/z| < 0.1), falling back to
/// Pfaff when a - b is too close to an integer for the gamma-function
/// coefficients to be usable.
///
/// Throws NumericsError carrying (a, b, c, z) if a series does not reach
/// `tol` within its iteration cap.
double hyp2f1(double a, double b, double c, double z, double tol = 1e-12);

/// Rising factorial x (x+1) ... (x+k-1); 1 for k = 0.
double pochhammer(double x, int k);

/// Complete Bell polynomial B_n(x_1, ..., x_n), n = x.size(). With
/// x_k = A^(k)(s), d^n/ds^n exp(A(s)) = exp(A(s)) * B_n(x).
double complete_bell(std::span<const double> x);

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t subdivisions = 0;
};

namespace detail {

// 21-point Kronrod rule with embedded 10-point Gauss rule (QUADPACK qk21).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b, int depth)
{
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  double fv1[10];
  double fv2[10];
  const double fc = f(centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, resk * hlgth, err, depth};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (21-point) quadrature of f over [lo, hi].
/// Bisects the panel with the largest error until the total error estimate
/// is at most max(rel_tol*|value|, abs_floor). Discontinuities of f must be
/// split off by the caller.
///
/// Throws NumericsError naming the worst panel if it would need to be split
/// beyond `max_depth` bisections.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, double rel_tol, int max_depth = 50,
                           double abs_floor = 1e-14)
{
  if (!(hi > lo)) {
    return {};
  }
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::gk21(f, lo, hi, 0));
  double value = heap.top().value;
  double error = heap.top().error;
  std::size_t splits = 0;

  while (error > std::max(rel_tol * std::abs(value), abs_floor)) {
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= max_depth || !(mid > worst.a && mid < worst.b)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrate: tolerance " << rel_tol << " not reached on [" << lo << ", " << hi
          << "]; worst subinterval [" << worst.a << ", " << worst.b << "] error " << worst.error
          << " at depth " << worst.depth;
      throw NumericsError(msg.str());
    }
    heap.pop();
    const detail::Panel left = detail::gk21(f, worst.a, mid, worst.depth + 1);
    const detail::Panel right = detail::gk21(f, mid, worst.b, worst.depth + 1);
    heap.push(left);
    heap.push(right);
    ++splits;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }

  // Re-sum to drop accumulated update round-off.
  QuadratureResult out;
  out.subdivisions = splits;
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.abs_error_estimate += heap.top().error;
    heap.pop();
  }
  return out;
}

} // namespace uavcov
