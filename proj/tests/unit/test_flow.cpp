#include <gtest/gtest.h>

#include "finiteband/error.hpp"
#include "finiteband/flow.hpp"
#include "finiteband/ode.hpp"
#include "support.hpp"

using namespace finiteband;

namespace {

const BandStructure kBands({0.0, 1.0, 2.0});

HochstadtPotential scalar_lame(double alpha = 0.4) { return HochstadtPotential({{0.0, 1.0, 2.0}, {alpha}, {}}); }
HochstadtPotential matrix_lame() { return HochstadtPotential({{0.0, 1.0, 2.0}, {0.3, 1.2}, random_unitary(2, 31)}); }

double binomial_half(int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= (0.5 - j) / (j + 1);
  return c;
}

}  // namespace

TEST(Dopri5, ExponentialForwardAndBackward) {
  auto f = [](double, const CMatrix& y) -> CMatrix { return Complex(0.3, 2.0) * y; };
  const CMatrix y0 = CMatrix::Constant(1, 1, 1.0);
  const Complex fwd = dopri5(f, y0, 0.0, 3.0)(0, 0);
  EXPECT_LT(std::abs(fwd - std::exp(Complex(0.9, 6.0))), 1e-9);
  const Complex back = dopri5(f, y0, 0.0, -2.0)(0, 0);
  EXPECT_LT(std::abs(back - std::exp(Complex(-0.6, -4.0))), 1e-9);
  const auto dense = dopri5_dense(f, y0, 0.0, {0.5, 1.0, 1.5});
  EXPECT_LT(std::abs(dense[2](0, 0) - std::exp(Complex(0.45, 3.0))), 1e-9);
}

TEST(Fundamental, ZeroPotentialBelowSpectrum) {
  const ConstantPotential q(0.0, 1);
  const auto xs = fbtest::linspace(-1.0, 2.0, 7);
  const auto fs = integrate_fundamental(q, -1.0, 0.5, xs);
  for (const auto& s : fs.samples) {
    EXPECT_LT(std::abs(s.theta(0, 0) - std::cosh(s.x - 0.5)), 1e-9);
    EXPECT_LT(std::abs(s.phi(0, 0) - std::sinh(s.x - 0.5)), 1e-9);
    EXPECT_LT(std::abs(s.dtheta(0, 0) - std::sinh(s.x - 0.5)), 1e-9);
  }
}

TEST(Fundamental, ZeroEffectiveEnergy) {
  const ConstantPotential q(-1.5, 2);
  const auto fs = integrate_fundamental(q, -1.5, 0.0, {0.0, 1.0, 3.0});
  for (const auto& s : fs.samples) {
    EXPECT_LT((s.theta - CMatrix::Identity(2, 2)).norm(), 1e-12);
    EXPECT_LT((s.phi - s.x * CMatrix::Identity(2, 2)).norm(), 1e-10);
  }
}

TEST(Fundamental, WronskianConserved) {
  const auto q = scalar_lame();
  const auto xs = fbtest::linspace(0.0, 5.0, 11);
  const auto fs = integrate_fundamental(q, Complex(0.7, 0.3), 0.0, xs);
  for (const auto& s : fs.samples) {
    const Complex det = s.theta(0, 0) * s.dphi(0, 0) - s.phi(0, 0) * s.dtheta(0, 0);
    EXPECT_LT(std::abs(det - 1.0), 1e-9);
  }
  const auto qm = matrix_lame();
  const Complex z(1.3, 0.8);
  const auto a = integrate_fundamental(qm, z, 0.0, xs), b = integrate_fundamental(qm, std::conj(z), 0.0, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_LT(symplectic_defect(a.samples[i], b.samples[i]), 1e-9 * (1 + xs[i]));
}

TEST(WeylSolutions, BorgDecayBelowSpectrum) {
  const double e0 = 0.5;
  const ConstantPotential q(e0, 2);
  const auto quad = closed_form_pencils_n0(2, BandStructure({e0}));
  const Complex z = -1.0;
  const auto fs = integrate_fundamental(q, z, 0.0, {0.0, 1.0, 2.0, 4.0});
  const auto sols = weyl_solutions(fs, weyl_m(quad, Complex(z.real(), 0.0), Sign::Plus));
  for (const auto& s : sols)
    EXPECT_LT((s.psi - std::exp(-std::sqrt(e0 - z.real()) * s.x) * CMatrix::Identity(2, 2)).norm(), 1e-8);
}

TEST(WeylSolutions, LogDerivativeMatchesTranslatedWeylMatrix) {
  const auto q = matrix_lame();
  const Complex z(0.4, 0.9);
  const auto xs = fbtest::linspace(0.0, 2.0, 5);
  const auto fs = integrate_fundamental(q, z, 0.0, xs);
  const auto m0 = weyl_m(closed_form_pencils(q.jet(0.0, 2), kBands), z, Sign::Plus);
  const auto sols = weyl_solutions(fs, m0);
  for (const auto& s : sols) {
    const CMatrix ratio = s.dpsi * checked_inverse(s.psi);
    const CMatrix mx = weyl_m(closed_form_pencils(q.jet(s.x, 2), kBands), z, Sign::Plus);
    EXPECT_LT((ratio - mx).norm(), 1e-8 * std::max(1.0, mx.norm())) << s.x;
  }
  EXPECT_LT(sols.back().psi.norm(), sols.front().psi.norm());
}

TEST(EvolvePencils, BorgIsStationary) {
  const auto q0 = closed_form_pencils_n0(2, BandStructure({-1.0}));
  const auto out = evolve_pencils(q0, 0.0, {1.0, 2.0});
  for (const auto& s : out) {
    EXPECT_LT((s.Q + CMatrix::Identity(2, 2)).norm(), 1e-14);
    EXPECT_EQ(s.quad.G1.degree(), -1);
  }
}

TEST(EvolvePencils, ScalarMatchesLame) {
  const auto q = scalar_lame();
  const double T = q.period();
  const auto q0 = closed_form_pencils(q.jet(0.0, 2), kBands);
  const auto xs = fbtest::linspace(T / 40, T, 40);
  const auto out = evolve_pencils(q0, 0.0, xs);
  for (const auto& s : out) {
    EXPECT_LT((s.Q - q.value(s.x)).norm(), 1e-7) << s.x;
    EXPECT_LT(s.drift, 1e-7);
  }
}

TEST(EvolvePencils, MatrixMatchesLameAndKeepsSymmetry) {
  const auto q = matrix_lame();
  const auto q0 = closed_form_pencils(q.jet(0.2, 2), kBands);
  const auto out = evolve_pencils(q0, 0.2, fbtest::linspace(0.3, 0.2 + q.period(), 25));
  for (const auto& s : out) {
    EXPECT_LT((s.Q - q.value(s.x)).norm(), 1e-7);
    const Complex z(0.3, 1.7);
    EXPECT_LT((s.quad.F(std::conj(z)).adjoint() - s.quad.F(z)).norm(), 1e-10);
    const auto closed = closed_form_pencils(q.jet(s.x, 2), kBands);
    EXPECT_LT((s.quad.H(z) - closed.H(z)).norm(), 1e-7);
  }
}

TEST(TransportPencils, AgreesWithFlow) {
  const auto q = matrix_lame();
  const auto q0 = closed_form_pencils(q.jet(0.0, 2), kBands);
  const auto xs = fbtest::linspace(0.25, 2.5, 10);
  const auto flow = evolve_pencils(q0, 0.0, xs);
  const auto tr = transport_pencils(q0, q, 0.0, xs);
  ASSERT_EQ(tr.size(), flow.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& a = tr[i];
    const auto& b = flow[i].quad;
    for (int k = 0; k <= 2; ++k) EXPECT_LT((a.H.coeff_or_zero(k) - b.H.coeff_or_zero(k)).norm(), 1e-7);
    for (int k = 0; k <= 1; ++k) EXPECT_LT((a.F.coeff_or_zero(k) - b.F.coeff_or_zero(k)).norm(), 1e-7);
    EXPECT_LT((a.G1.coeff_or_zero(0) - b.G1.coeff_or_zero(0)).norm(), 1e-7);
    EXPECT_LT((a.G2.coeff_or_zero(0) - b.G2.coeff_or_zero(0)).norm(), 1e-7);
  }
}

TEST(Riccati, BorgIsExact) {
  const ConstantPotential q(-2.0, 2);
  const auto quad = closed_form_pencils_n0(2, BandStructure({-2.0}));
  const Complex z(0.3, 0.4);
  auto m = [&](double) { return weyl_m(quad, z, Sign::Plus); };
  EXPECT_LT(riccati_residual(m, q, z, 0.0, 1e-3), 1e-14);
}

TEST(Riccati, OneGapAndWrongSign) {
  const auto q = matrix_lame();
  const Complex z(0.0, 1.0);
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    auto m = [&](double x) { return weyl_m(closed_form_pencils(q.jet(x, 2), kBands), z, s); };
    auto flipped = [&](double x) {
      auto quad = closed_form_pencils(q.jet(x, 2), kBands);
      quad.G1 = quad.G1.scaled(-1.0);
      quad.G2 = quad.G2.scaled(-1.0);
      return weyl_m(quad, z, s);
    };
    for (double x : {0.1, 0.9, 2.0}) {
      EXPECT_LT(riccati_residual(m, q, z, x, 1e-4 * q.period()), 1e-7);
      EXPECT_GT(riccati_residual(flipped, q, z, x, 1e-4 * q.period()), 1e-3);
    }
  }
}

TEST(Riccati, GridVariantMatchesPointwise) {
  const auto q = scalar_lame();
  const Complex z(-1.0, 0.5);
  const auto xs = fbtest::linspace(0.0, 0.01, 11);
  std::vector<CMatrix> mv, qv;
  for (double x : xs) {
    mv.push_back(weyl_m(closed_form_pencils(q.jet(x, 2), kBands), z, Sign::Minus));
    qv.push_back(q.value(x));
  }
  const auto r = riccati_residual_grid(mv, qv, xs, z);
  EXPECT_EQ(r.size(), 7u);
  for (double v : r) EXPECT_LT(v, 1e-7);
}

TEST(Asymptotics, FirstCoefficients) {
  const auto q = matrix_lame();
  const auto j = q.jet(0.5, 3);
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    const double sg = sign_value(s);
    const auto M = asymptotic_m_coeffs(j, 3, s);
    EXPECT_LT((M[0] + sg * 0.5 * I_UNIT * j[0]).norm(), 1e-14);
    EXPECT_LT((M[1] - 0.25 * j[1]).norm(), 1e-14);
    EXPECT_LT((M[2] - sg * (I_UNIT / 8.0) * (j[2] - j[0] * j[0])).norm(), 1e-12);
  }
}

TEST(Asymptotics, ConstantPotentialBinomialSeries) {
  const double e0 = 0.7;
  const ConstantPotential q(e0, 1);
  const auto M = asymptotic_m_coeffs(q.jet(0.0, 8), 8, Sign::Plus);
  for (int k = 1; k <= 8; ++k) {
    const Complex expected = (k % 2 == 1) ? I_UNIT * binomial_half((k + 1) / 2) * std::pow(-e0, (k + 1) / 2) : 0.0;
    EXPECT_LT(std::abs(M[static_cast<std::size_t>(k - 1)](0, 0) - expected), 1e-14) << k;
  }
}

TEST(Asymptotics, SignsAlternate) {
  const auto j = matrix_lame().jet(1.1, 6);
  const auto p = asymptotic_m_coeffs(j, 6, Sign::Plus), m = asymptotic_m_coeffs(j, 6, Sign::Minus);
  for (int k = 1; k <= 6; ++k) {
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    EXPECT_LT((m[static_cast<std::size_t>(k - 1)] - s * p[static_cast<std::size_t>(k - 1)]).norm(), 1e-12);
  }
}

TEST(Asymptotics, TailDecaysFasterThanPartialSumOrder) {
  const auto q = matrix_lame();
  const auto quad = closed_form_pencils(q.jet(0.6, 2), kBands);
  const auto M = asymptotic_m_coeffs(q.jet(0.6, 4), 4, Sign::Plus);
  std::vector<double> lt, lr;
  for (double t : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const Complex z(0.0, t);
    const double r = (weyl_m_subleading(quad, z, Sign::Plus) - asymptotic_partial_sum(M, z)).norm();
    lt.push_back(std::log(t));
    lr.push_back(std::log(r));
  }
  const double slope = (lr.back() - lr.front()) / (lt.back() - lt.front());
  EXPECT_LT(slope, -2.0 + 0.1);
}

TEST(Floquet, ConstantPotentialSingleEdge) {
  const ConstantPotential q(0.0, 1);
  const auto edges = floquet_band_edges(q, 1.0, -1.0, 5.0);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_NEAR(edges[0].lambda, 0.0, 1e-8);
  EXPECT_FALSE(edges[0].touching);
  EXPECT_LT(std::abs(floquet_discriminant(q, 1.0, 4.0)), 2.0);
}

TEST(Floquet, LameEdgesRecoverBands) {
  const auto q = scalar_lame(0.0);
  const auto edges = floquet_band_edges(q, q.period(), -0.5, 3.5);
  std::vector<double> simple;
  for (const auto& e : edges) {
    EXPECT_NEAR(std::abs(e.discriminant), 2.0, 1e-8);
    if (!e.touching) simple.push_back(e.lambda);
  }
  ASSERT_EQ(simple.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(simple[static_cast<std::size_t>(k)], static_cast<double>(k), 1e-6);
  EXPECT_LT(std::abs(floquet_discriminant(q, q.period(), 0.5)), 2.0);
  EXPECT_GT(std::abs(floquet_discriminant(q, q.period(), 1.5)), 2.0);
}

TEST(Floquet, Errors) {
  const ConstantPotential q(0.0, 1);
  EXPECT_THROW(floquet_band_edges(q, 1.0, 1.0, 1.0), Error);
  EXPECT_THROW(floquet_discriminant(ConstantPotential(0.0, 2), 1.0, 0.0), Error);
}

TEST(Shooting, ReproducesClosedFormWeylMatrices) {
  const auto q = matrix_lame();
  const auto quad = closed_form_pencils(q.jet(0.3, 2), kBands);
  const Complex z(0.5, 1.0);
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    const CMatrix shot = weyl_m_shooting(q, z, 0.3, s, 30.0);
    EXPECT_LT((shot - weyl_m(quad, z, s)).norm(), 1e-7);
  }
}

TEST(Shooting, BumpPotentialIsNotReflectionless) {
  const GaussianBumpPotential q(0.0, {1.5, -1.0});
  const BandStructure b({0.0});
  const ReflectionlessReport rep = reflectionless_check(
      [&](Complex z) { return weyl_m_shooting(q, z, 0.0, Sign::Plus, 10.0); },
      [&](Complex z) { return weyl_m_shooting(q, z, 0.0, Sign::Minus, 10.0); }, b, {1.0, 2.0});
  EXPECT_GT(rep.max_defect, 1e-2);
}
