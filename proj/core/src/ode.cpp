#include "finiteband/ode.hpp"

#include <algorithm>
#include <cmath>

#include "finiteband/error.hpp"

namespace finiteband {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double error_norm(const CMatrix& err, const CMatrix& y0, const CMatrix& y1, const OdeOptions& opt) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    acc += std::norm(err(i)) / (sc * sc);
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

CMatrix dopri5(const OdeRhs& f, CMatrix y, double x0, double x1, const OdeOptions& opt, OdeStats* stats) {
  if (x1 == x0) return y;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  double h = opt.initial_step > 0 ? std::min(opt.initial_step, span) : span / 100.0;
  double x = x0;
  CMatrix k1 = f(x, y);
  long steps = 0;
  while (dir * (x1 - x) > 0) {
    if (++steps > opt.max_steps) throw Error(ErrorCode::NoConvergence, "ODE step budget exhausted");
    const bool last = h >= dir * (x1 - x);
    const double hs = last ? x1 - x : dir * h;
    const CMatrix k2 = f(x + c2 * hs, y + hs * (a21 * k1));
    const CMatrix k3 = f(x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const CMatrix k4 = f(x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const CMatrix k5 = f(x + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const CMatrix k6 = f(x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const CMatrix ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const CMatrix k7 = f(x + hs, ynew);
    const CMatrix err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, ynew, opt);
    if (!std::isfinite(en)) throw Error(ErrorCode::NoConvergence, "ODE state became non-finite");
    if (en <= 1.0) {
      x = last ? x1 : x + hs;
      y = ynew;
      k1 = k7;
      if (stats) ++stats->accepted;
      if (last) {
        if (stats) stats->last_step = std::abs(hs) * std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
        break;
      }
    } else if (stats) {
      ++stats->rejected;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h = std::abs(hs) * fac;
    if (h < 1e-14 * std::max(1.0, std::abs(x))) throw Error(ErrorCode::NoConvergence, "ODE step size underflow");
  }
  return y;
}

std::vector<CMatrix> dopri5_dense(const OdeRhs& f, const CMatrix& y0, double x0, const std::vector<double>& xs,
                                  const OdeOptions& opt) {
  std::vector<CMatrix> out;
  CMatrix y = y0;
  double x = x0;
  OdeOptions o = opt;
  for (double target : xs) {
    OdeStats st;
    y = dopri5(f, y, x, target, o, &st);
    if (st.last_step > 0) o.initial_step = st.last_step;
    x = target;
    out.push_back(y);
  }
  return out;
}

}  // namespace finiteband
