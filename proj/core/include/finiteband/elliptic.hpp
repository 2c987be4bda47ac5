#pragma once

#include <vector>

#include "finiteband/branch_cut.hpp"
#include "finiteband/linalg.hpp"

namespace finiteband {

// Real curve y^2 = 4t^3 - g2 t - g3 with roots e1 > e2 > e3; rectangular period lattice.
struct EllipticCurve {
  double e1 = 0, e2 = 0, e3 = 0;
  double g2 = 0, g3 = 0;
  double omega1 = 0;     // real half-period
  double omega3_im = 0;  // omega3 = i * omega3_im
  Complex omega3() const { return {0.0, omega3_im}; }
  double period() const { return 2.0 * omega1; }
};

EllipticCurve curve_from_roots(double e1, double e2, double e3);
// One-gap spectrum: s = (E0+E1+E2)/3, e1 = s-E0, e2 = s-E1, e3 = s-E2.
EllipticCurve curve_from_bands(const BandStructure& b);

struct WpValue {
  Complex p, dp, ddp, dddp;
};

class Weierstrass {
 public:
  explicit Weierstrass(const EllipticCurve& c);
  const EllipticCurve& curve() const { return curve_; }

  // DomainError within pole_margin of a lattice point.
  WpValue eval(Complex u) const;
  // Derivatives p^{(k)}(u), k = 0..order.
  std::vector<Complex> derivatives(Complex u, int order) const;

 private:
  void near_zero(Complex w, Complex& p, Complex& dp) const;
  EllipticCurve curve_;
  std::vector<double> laurent_;  // c_k, k >= 2, index k
  double pole_margin_;
};

}  // namespace finiteband
