#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "finiteband/error.hpp"
#include "finiteband/linalg.hpp"

namespace finiteband {

struct QuadOptions {
  double tol = 1e-9;  // successive doublings must agree to this (absolute)
  int initial_nodes = 16;
  int max_nodes = 1 << 20;
};

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Complex& v) { return std::abs(v); }
inline double magnitude(const CMatrix& v) { return v.norm(); }
}  // namespace detail

// Integral of h over (a, b) when h has at most inverse-square-root endpoint behaviour.
// First-kind Gauss-Chebyshev in the weight 1/sqrt((t-a)(b-t)); node count doubles until stable.
template <class Fn>
auto gauss_chebyshev(Fn&& h, double a, double b, const QuadOptions& opt = {}) {
  using T = decltype(h(a));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto rule = [&](int n) {
    T acc = h(mid) * 0.0;
    for (int k = 1; k <= n; ++k) {
      const double c = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
      const double t = mid + half * c;
      const double w = half * std::sqrt((1.0 - c) * (1.0 + c));
      acc += h(t) * w;
    }
    return T(acc * (std::numbers::pi / n));
  };
  int n = opt.initial_nodes;
  T prev = rule(n);
  while (n < opt.max_nodes) {
    n *= 2;
    T cur = rule(n);
    if (detail::magnitude(T(cur - prev)) < opt.tol) return cur;
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNotConverged, "node doubling did not settle");
}

// Integral over [a, inf) through lambda = a + t/(1-t).
template <class Fn>
auto gauss_chebyshev_right_tail(Fn&& h, double a, const QuadOptions& opt = {}) {
  auto mapped = [&](double t) {
    const double s = 1.0 - t;
    return h(a + t / s) * (1.0 / (s * s));
  };
  return gauss_chebyshev(mapped, 0.0, 1.0, opt);
}

// Integral over (-inf, b] through lambda = b - t/(1-t).
template <class Fn>
auto gauss_chebyshev_left_tail(Fn&& h, double b, const QuadOptions& opt = {}) {
  auto mapped = [&](double t) {
    const double s = 1.0 - t;
    return h(b - t / s) * (1.0 / (s * s));
  };
  return gauss_chebyshev(mapped, 0.0, 1.0, opt);
}

}  // namespace finiteband
