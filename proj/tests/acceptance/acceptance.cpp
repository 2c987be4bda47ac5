// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "finiteband/error.hpp"
#include "finiteband/flow.hpp"
#include "finiteband/kdv.hpp"
#include "finiteband/pencil.hpp"
#include "finiteband/potential.hpp"
#include "finiteband/weyl.hpp"
#include "support.hpp"

using namespace finiteband;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const BandStructure kBands({0.0, 1.0, 2.0});
constexpr std::uint64_t kSeed = 20240611;

HochstadtPotential scalar_lame() { return HochstadtPotential({{0.0, 1.0, 2.0}, {0.0}, {}}); }
HochstadtPotential matrix_lame() {
  return HochstadtPotential({{0.0, 1.0, 2.0}, {0.3, 1.1}, random_unitary(2, kSeed)});
}

std::vector<double> period_grid(const HochstadtPotential& q, std::size_t n) {
  return fbtest::linspace(0.0, q.period(), n);
}

PencilQuadruple pencils_at(const Potential& q, double x, const BandStructure& b) {
  return closed_form_pencils(q.jet(x, 2), b);
}

double max_riccati(const Potential& q, const std::vector<double>& xs, double h, bool flip) {
  double worst = 0.0;
  for (Complex z : {Complex(0.0, 1.0), Complex(-1.0, 0.5)})
    for (Sign s : {Sign::Plus, Sign::Minus}) {
      auto m = [&](double x) {
        auto quad = pencils_at(q, x, kBands);
        if (flip) {
          quad.G1 = quad.G1.scaled(-1.0);
          quad.G2 = quad.G2.scaled(-1.0);
        }
        return weyl_m(quad, z, s);
      };
      for (double x : xs) worst = std::max(worst, riccati_residual(m, q, z, x, h));
    }
  return worst;
}

double max_ledger(const Potential& q, const std::vector<double>& xs, std::size_t nz) {
  std::mt19937_64 rng(kSeed);
  std::vector<Complex> zs;
  for (std::size_t i = 0; i < nz; ++i) zs.push_back(fbtest::random_disk_point(rng, 20.0));
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, check_quadruple(pencils_at(q, x, kBands), zs).max_residual());
  return worst;
}

double max_skdv(const Potential& q, const std::vector<double>& xs, const BandStructure& b) {
  const auto c = c_coeffs(b, 1);
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, skdv_exact(q.jet(x, 3), c, 1).norm());
  return worst;
}

Outcome borg_reproduction() {
  const double e0 = -2.0;
  const BandStructure b({e0});
  const auto xs = fbtest::linspace(-3.0, 3.0, 31);
  const auto prof = borg_potential(e0, 3, xs);
  bool exact = true;
  for (const auto& q : prof.Q) exact = exact && (q == e0 * CMatrix::Identity(3, 3));
  const auto quad = closed_form_pencils_n0(3, b);
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Complex z = fbtest::random_disk_point(rng, 20.0);
    Complex root = std::sqrt(z - e0);
    if (root.imag() < 0) root = -root;
    const Complex expected = 0.5 * I_UNIT / root;
    const CMatrix g = green_diag(quad, z);
    worst = std::max(worst, (g - expected * CMatrix::Identity(3, 3)).norm() / (std::abs(expected) * std::sqrt(3.0)));
  }
  return {exact && worst < 1e-12,
          std::string("Q exact: ") + (exact ? "yes" : "no") + fmt("; max relative g error %.2e (tol 1e-12)", worst)};
}

Outcome hochstadt_spectrum() {
  const auto q = scalar_lame();
  const auto edges = floquet_band_edges(q, q.period(), -0.5, 3.5);
  std::vector<double> simple;
  for (const auto& e : edges)
    if (!e.touching) simple.push_back(e.lambda);
  if (simple.size() != 3) return {false, fmt("found %.0f simple edges, expected 3", static_cast<double>(simple.size()))};
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(simple[static_cast<std::size_t>(k)] - k));
  return {worst < 1e-6, fmt("edges %.10f .. %.10f; ", simple[0], simple[2]) + fmt("max error %.2e (tol 1e-6)", worst)};
}

Outcome pencil_ledger() {
  const auto q = matrix_lame();
  const double worst = max_ledger(q, period_grid(q, 16), 50);
  return {worst < 1e-10, fmt("max residual %.2e over 50 z, 16 x (tol 1e-10)", worst)};
}

Outcome riccati() {
  const auto q = matrix_lame();
  const double worst = max_riccati(q, period_grid(q, 64), 1e-4 * q.period(), false);
  return {worst < 1e-7, fmt("max residual %.2e (tol 1e-7)", worst)};
}

Outcome reflectionless() {
  const auto q = matrix_lame();
  const auto quad = pencils_at(q, 0.7, kBands);
  std::vector<double> lambdas = fbtest::linspace(0.025, 0.975, 20);
  for (double l : fbtest::linspace(2.05, 12.0, 20)) lambdas.push_back(l);
  const auto rep = reflectionless_check([&](Complex z) { return weyl_m(quad, z, Sign::Plus); },
                                        [&](Complex z) { return weyl_m(quad, z, Sign::Minus); }, kBands, lambdas);
  auto g = [&](Complex z) { return green_diag(quad, z); };
  double xi_err = 0.0;
  for (double l : {0.1, 0.5, 0.9, 2.5, 6.0, 15.0})
    xi_err = std::max(xi_err, (xi_function(g, kBands, l).xi - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff());
  for (double l : {-3.0, -1.0, -0.2}) xi_err = std::max(xi_err, xi_function(g, kBands, l).xi.cwiseAbs().maxCoeff());
  return {rep.max_defect < 1e-6 && xi_err < 1e-4,
          fmt("max defect %.2e (tol 1e-6); max Xi error %.2e (tol 1e-4)", rep.max_defect, xi_err)};
}

Outcome stationary_kdv() {
  const auto s = scalar_lame();
  const auto m = matrix_lame();
  const double rs = max_skdv(s, period_grid(s, 257), kBands);
  const double rm = max_skdv(m, period_grid(m, 257), kBands);
  const ConstantPotential borg(-2.0, 3);
  const CMatrix r0 = skdv_exact(borg.jet(0.4, 1), c_coeffs(BandStructure({-2.0}), 0), 0);
  const bool n0_exact = r0.norm() == 0.0;
  double c1_err = 0.0;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> e{u(rng), u(rng), u(rng)};
    std::sort(e.begin(), e.end());
    const BandStructure b(e);
    c1_err = std::max(c1_err, std::abs(c_coeffs(b, 1)[1] + 0.5 * (e[0] + e[1] + e[2])) / b.scale());
  }
  const bool ok = rs < 1e-7 && rm < 1e-7 && n0_exact && c1_err < 1e-15;
  return {ok, fmt("scalar %.2e, m=2 %.2e (tol 1e-7); ", rs, rm) + (n0_exact ? "n=0 exact; " : "n=0 NOT exact; ") +
                  fmt("c1 relative error %.1e", c1_err)};
}

Outcome algebraic_constraints() {
  double worst = 0.0;
  for (const auto& q : {scalar_lame(), matrix_lame()})
    for (double x : period_grid(q, 257)) {
      const auto j = q.jet(x, 2);
      worst = std::max({worst, one_gap_second_order(j[0], j[2], kBands).norm(),
                        one_gap_first_integral(j[0], j[1], j[2], kBands).norm(), one_gap_cubic(j[0], j[1], kBands).norm(),
                        one_gap_commutators(j[0], j[1], j[2])});
    }
  return {worst < 1e-9, fmt("max residual %.2e (tol 1e-9)", worst)};
}

Outcome dual_path() {
  const auto q = matrix_lame();
  const auto q0 = pencils_at(q, 0.0, kBands);
  const auto xs = fbtest::linspace(q.period() / 64, q.period(), 64);
  const auto flow = evolve_pencils(q0, 0.0, xs);
  double dq = 0.0;
  for (const auto& s : flow) dq = std::max(dq, (s.Q - q.value(s.x)).norm());
  const auto xs_t = fbtest::linspace(q.period() / 16, q.period(), 16);
  const auto flow_t = evolve_pencils(q0, 0.0, xs_t);
  const auto tr = transport_pencils(q0, q, 0.0, xs_t);
  double dt = 0.0;
  for (std::size_t i = 0; i < xs_t.size(); ++i) {
    const auto& a = tr[i];
    const auto& b = flow_t[i].quad;
    for (int k = 0; k <= 2; ++k) {
      dt = std::max(dt, (a.F.coeff_or_zero(k) - b.F.coeff_or_zero(k)).norm());
      dt = std::max(dt, (a.G1.coeff_or_zero(k) - b.G1.coeff_or_zero(k)).norm());
      dt = std::max(dt, (a.G2.coeff_or_zero(k) - b.G2.coeff_or_zero(k)).norm());
      dt = std::max(dt, (a.H.coeff_or_zero(k) - b.H.coeff_or_zero(k)).norm());
    }
  }
  return {dq < 1e-7 && dt < 1e-7, fmt("flow vs closed form %.2e, transport vs flow %.2e (tol 1e-7)", dq, dt)};
}

Outcome asymptotics() {
  const auto q = matrix_lame();
  double worst = -1e9;
  for (double x : {0.0, 0.6, 1.7})
    for (Sign s : {Sign::Plus, Sign::Minus}) {
      const auto quad = pencils_at(q, x, kBands);
      const auto M = asymptotic_m_coeffs(q.jet(x, 4), 4, s);
      std::vector<double> lt, lr;
      for (double t = 1e2; t <= 1.0001e6; t *= std::sqrt(10.0)) {
        const Complex z(0.0, t);
        lt.push_back(std::log(t));
        lr.push_back(std::log((weyl_m_subleading(quad, z, s) - asymptotic_partial_sum(M, z)).norm()));
      }
      const double n = static_cast<double>(lt.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lt.size(); ++i) {
        sx += lt[i];
        sy += lr[i];
        sxx += lt[i] * lt[i];
        sxy += lt[i] * lr[i];
      }
      worst = std::max(worst, (n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
  return {worst < -1.9, fmt("largest fitted slope %.3f (need < -1.9)", worst)};
}

Outcome herglotz() {
  const std::vector<double> f{-1.5, 1.0};        // z - 3/2
  const std::vector<double> h{-1.5, -0.5, 1.0};  // (z - 3/2)(z + 1)
  const bool kinds = scalar_classify({1.5}, kBands).kind == ScalarKind::FType &&
                     scalar_classify({-1.0, 1.5}, kBands).kind == ScalarKind::HType;
  std::mt19937_64 rng(kSeed);
  double rep = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Complex z = fbtest::random_disk_point(rng, 10.0);
    rep = std::max(rep, std::abs(herglotz_rep_integral(f, kBands, z, ScalarKind::FType) - herglotz_value(f, kBands, z)));
    rep = std::max(rep, std::abs(herglotz_rep_integral(h, kBands, z, ScalarKind::HType) - herglotz_value(h, kBands, z)));
  }
  const auto q = matrix_lame();
  const auto quad = pencils_at(q, 0.4, kBands);
  std::uniform_real_distribution<double> re(-20.0, 20.0), im(-6.0, 1.3);
  double min_eig = 1e300;
  for (int i = 0; i < 500; ++i) {
    const Complex z(re(rng), std::pow(10.0, im(rng)));
    min_eig = std::min(min_eig, min_eigenvalue_hermitian(imaginary_part(weyl_m(quad, z, Sign::Plus))));
    min_eig = std::min(min_eig, min_eigenvalue_hermitian(imaginary_part(-weyl_m(quad, z, Sign::Minus))));
  }
  return {kinds && rep < 1e-8 && min_eig >= -1e-12,
          std::string(kinds ? "" : "classification wrong; ") +
              fmt("representation error %.2e (tol 1e-8); min eig Im(+-M) %.2e", rep, min_eig)};
}

Outcome negative_controls() {
  auto base = std::make_shared<HochstadtPotential>(matrix_lame());
  CMatrix dir(2, 2);
  dir << 1.0, Complex(0.3, 0.2), Complex(0.3, -0.2), -0.5;
  const PerturbedPotential bad(base, 0.1, 3.0, 0.4, dir);
  const auto xs = fbtest::linspace(0.05, base->period(), 24);
  const double ledger = max_ledger(bad, xs, 50);
  const double ric_pert = max_riccati(bad, xs, 1e-4 * base->period(), false);
  const double ric_flip = max_riccati(*base, xs, 1e-4 * base->period(), true);
  const double kdv = max_skdv(bad, xs, kBands);
  const GaussianBumpPotential bump(0.0, {1.5, -1.0});
  const auto refl = reflectionless_check([&](Complex z) { return weyl_m_shooting(bump, z, 0.0, Sign::Plus, 10.0); },
                                         [&](Complex z) { return weyl_m_shooting(bump, z, 0.0, Sign::Minus, 10.0); },
                                         BandStructure({0.0}), {0.5, 1.0, 2.0, 4.0});
  const double lo = std::min({ledger, ric_pert, ric_flip, kdv, refl.max_defect});
  return {lo > 1e-3, fmt("ledger %.2e, riccati perturbed %.2e, ", ledger, ric_pert) +
                         fmt("riccati flipped %.2e, reflectionless bump %.2e, ", ric_flip, refl.max_defect) +
                         fmt("skdv %.2e (all need > 1e-3)", kdv)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"borg reproduction", borg_reproduction},
      {"hochstadt spectrum closure", hochstadt_spectrum},
      {"pencil identity ledger", pencil_ledger},
      {"riccati", riccati},
      {"reflectionless", reflectionless},
      {"stationary kdv", stationary_kdv},
      {"algebraic constraints", algebraic_constraints},
      {"dual-path consistency", dual_path},
      {"asymptotics", asymptotics},
      {"herglotz representations", herglotz},
      {"negative controls", negative_controls},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
