#include "finiteband/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "finiteband/error.hpp"
#include "finiteband/quadrature.hpp"

namespace finiteband {

EllipticCurve curve_from_roots(double e1, double e2, double e3) {
  if (!(e1 > e2 && e2 > e3)) throw Error(ErrorCode::DomainError, "curve roots must satisfy e1 > e2 > e3");
  const double scale = std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
  if (std::abs(e1 + e2 + e3) > 1e-12 * scale) throw Error(ErrorCode::DomainError, "curve roots must sum to zero");

  EllipticCurve c;
  c.e1 = e1;
  c.e2 = e2;
  c.e3 = e3;
  c.g2 = 2.0 * (e1 * e1 + e2 * e2 + e3 * e3);
  c.g3 = 4.0 * e1 * e2 * e3;

  QuadOptions q;
  q.tol = 1e-15;
  auto cubic = [&](double t) { return 4.0 * (t - e1) * (t - e2) * (t - e3); };
  c.omega1 = gauss_chebyshev_right_tail([&](double t) { return 1.0 / std::sqrt(cubic(t)); }, e1, q);
  c.omega3_im = gauss_chebyshev_left_tail([&](double t) { return 1.0 / std::sqrt(-cubic(t)); }, e3, q);
  return c;
}

EllipticCurve curve_from_bands(const BandStructure& b) {
  if (b.n() != 1) throw Error(ErrorCode::InvalidBands, "elliptic construction needs exactly one gap");
  const auto& E = b.edges();
  const double s = b.sum_edges() / 3.0;
  return curve_from_roots(s - E[0], s - E[1], s - E[2]);
}

Weierstrass::Weierstrass(const EllipticCurve& c) : curve_(c) {
  laurent_.assign(40, 0.0);
  laurent_[2] = c.g2 / 20.0;
  laurent_[3] = c.g3 / 28.0;
  for (int k = 4; k < 40; ++k) {
    double s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += laurent_[static_cast<std::size_t>(m)] * laurent_[static_cast<std::size_t>(k - m)];
    laurent_[static_cast<std::size_t>(k)] = 3.0 * s / ((2.0 * k + 1.0) * (k - 3.0));
  }
  pole_margin_ = 1e-6 * 2.0 * c.omega1;
}

// Laurent series at a small argument, lifted by repeated argument doubling.
void Weierstrass::near_zero(Complex v, Complex& p, Complex& dp) const {
  const double rho = 0.25 * std::min(curve_.omega1, curve_.omega3_im);
  int halvings = 0;
  Complex w = v;
  while (std::abs(w) > rho) {
    w *= 0.5;
    ++halvings;
  }
  const Complex w2 = w * w;
  Complex sp = 0.0, sdp = 0.0, pw = w2;  // pw = w^{2k-2}
  for (int k = 2; k < 40; ++k) {
    const Complex term = laurent_[static_cast<std::size_t>(k)] * pw;
    sp += term;
    sdp += (2.0 * k - 2.0) * term / w;
    pw *= w2;
  }
  p = 1.0 / w2 + sp;
  dp = -2.0 / (w2 * w) + sdp;

  const double g2 = curve_.g2, g3 = curve_.g3;
  for (int i = 0; i < halvings; ++i) {
    const Complex P = p, P2 = P * P, P3 = P2 * P;
    const Complex W = 4.0 * P3 - g2 * P - g3;
    const Complex num_p = (P2 + g2 / 4.0) * (P2 + g2 / 4.0) + 2.0 * g3 * P;
    const Complex num_d = 8.0 * P3 * P3 - 10.0 * g2 * P2 * P2 - 40.0 * g3 * P3 - 2.5 * g2 * g2 * P2 -
                          2.0 * g2 * g3 * P + g2 * g2 * g2 / 8.0 - 4.0 * g3 * g3;
    p = num_p / W;
    dp = num_d / (4.0 * dp * W);
  }
}

WpValue Weierstrass::eval(Complex u) const {
  const double w1 = curve_.omega1, w3 = curve_.omega3_im;
  double x = std::remainder(u.real(), 2.0 * w1);  // in [-w1, w1]
  double y = std::remainder(u.imag(), 2.0 * w3);

  // nearest point of the half-lattice {0, w1, w3, w1+w3} modulo periods
  const double hx = std::abs(x) > 0.5 * w1 ? std::copysign(w1, x) : 0.0;
  const double hy = std::abs(y) > 0.5 * w3 ? std::copysign(w3, y) : 0.0;
  const Complex v(x - hx, y - hy);
  const bool sx = hx != 0.0, sy = hy != 0.0;

  Complex p, dp;
  if (!sx && !sy) {
    if (std::abs(v) < pole_margin_) throw Error(ErrorCode::DomainError, "argument at a lattice pole");
    near_zero(v, p, dp);
  } else {
    double eh, ea, eb;
    if (sx && !sy) { eh = curve_.e1; ea = curve_.e2; eb = curve_.e3; }
    else if (!sx && sy) { eh = curve_.e3; ea = curve_.e1; eb = curve_.e2; }
    else { eh = curve_.e2; ea = curve_.e1; eb = curve_.e3; }
    const double c = (eh - ea) * (eh - eb);
    if (std::abs(v) < 1e-5 * std::min(w1, w3)) {
      const Complex v2 = v * v;
      p = eh + c * (v2 + eh * v2 * v2);
      dp = c * (2.0 * v + 4.0 * eh * v2 * v);
    } else {
      Complex pv, dpv;
      near_zero(v, pv, dpv);
      const Complex d = pv - eh;
      p = eh + c / d;
      dp = -c * dpv / (d * d);
    }
  }
  return {p, dp, 6.0 * p * p - curve_.g2 / 2.0, 12.0 * p * dp};
}

std::vector<Complex> Weierstrass::derivatives(Complex u, int order) const {
  const WpValue v = eval(u);
  // Taylor coefficients from p'' = 6 p^2 - g2/2
  std::vector<Complex> a(static_cast<std::size_t>(std::max(order, 1) + 1), 0.0);
  a[0] = v.p;
  a[1] = v.dp;
  for (int k = 0; k + 2 <= order; ++k) {
    Complex conv = 0.0;
    for (int i = 0; i <= k; ++i) conv += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(k - i)];
    Complex rhs = 6.0 * conv - (k == 0 ? curve_.g2 / 2.0 : 0.0);
    a[static_cast<std::size_t>(k + 2)] = rhs / ((k + 1.0) * (k + 2.0));
  }
  std::vector<Complex> out;
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    out.push_back(a[static_cast<std::size_t>(k)] * fact);
  }
  return out;
}

}  // namespace finiteband
