#include "finiteband/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "finiteband/error.hpp"
#include "jet.hpp"
#include "finiteband/parallel.hpp"

namespace finiteband {

FundamentalSystem integrate_fundamental(const Potential& q, Complex z, double x0, const std::vector<double>& xs,
                                        const OdeOptions& opt) {
  const auto m = static_cast<Eigen::Index>(q.dim());
  auto rhs = [&](double x, const CMatrix& y) -> CMatrix {
    const CMatrix A = q.value(x) - z * CMatrix::Identity(m, m);
    CMatrix dy(2 * m, 2 * m);
    dy.topRows(m) = y.bottomRows(m);
    dy.bottomRows(m) = A * y.topRows(m);
    return dy;
  };
  const auto states = dopri5_dense(rhs, CMatrix::Identity(2 * m, 2 * m), x0, xs, opt);
  FundamentalSystem fs{z, x0, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const CMatrix& y = states[i];
    fs.samples.push_back({xs[i], y.topLeftCorner(m, m), y.topRightCorner(m, m), y.bottomLeftCorner(m, m),
                          y.bottomRightCorner(m, m)});
  }
  return fs;
}

double symplectic_defect(const FundamentalSample& a, const FundamentalSample& b) {
  const Eigen::Index m = a.theta.rows();
  auto pack = [m](const FundamentalSample& s) {
    CMatrix y(2 * m, 2 * m);
    y << s.theta, s.phi, s.dtheta, s.dphi;
    return y;
  };
  CMatrix J = CMatrix::Zero(2 * m, 2 * m);
  J.topRightCorner(m, m) = CMatrix::Identity(m, m);
  J.bottomLeftCorner(m, m) = -CMatrix::Identity(m, m);
  return (pack(b).adjoint() * J * pack(a) - J).norm();
}

std::vector<WeylSolutionSample> weyl_solutions(const FundamentalSystem& fs, const CMatrix& m0) {
  std::vector<WeylSolutionSample> out;
  for (const auto& s : fs.samples) out.push_back({s.x, s.theta + s.phi * m0, s.dtheta + s.dphi * m0});
  return out;
}

namespace {

struct FlowLayout {
  int n;
  Eigen::Index m;
  Eigen::Index blocks() const { return 4 * n + 1; }
};

CMatrix pack_quadruple(const PencilQuadruple& q, const FlowLayout& L) {
  CMatrix y(L.blocks() * L.m, L.m);
  Eigen::Index b = 0;
  auto put = [&](const CMatrix& c) { y.middleRows((b++) * L.m, L.m) = c; };
  for (int k = 0; k < L.n; ++k) put(q.F.coeff_or_zero(k));
  for (int k = 0; k < L.n; ++k) put(q.G1.coeff_or_zero(k));
  for (int k = 0; k < L.n; ++k) put(q.G2.coeff_or_zero(k));
  for (int k = 0; k <= L.n; ++k) put(q.H.coeff_or_zero(k));
  return y;
}

PencilQuadruple unpack_quadruple(const CMatrix& y, const FlowLayout& L, const BandStructure& b) {
  const auto m = static_cast<std::size_t>(L.m);
  Eigen::Index blk = 0;
  auto take = [&]() -> CMatrix { return y.middleRows((blk++) * L.m, L.m); };
  std::vector<CMatrix> F, G1, G2, H;
  for (int k = 0; k < L.n; ++k) F.push_back(take());
  F.push_back(identity(m));
  for (int k = 0; k < L.n; ++k) G1.push_back(take());
  for (int k = 0; k < L.n; ++k) G2.push_back(take());
  for (int k = 0; k <= L.n; ++k) H.push_back(take());
  H.push_back(identity(m));
  return {MatrixPencil(m, F), MatrixPencil(m, G1), MatrixPencil(m, G2), MatrixPencil(m, H), b};
}

CMatrix closure_Q(const PencilQuadruple& q, int n, double c1) {
  if (n == 0) return -q.H.coeff(0);
  return 2.0 * (q.F.coeff(n - 1) - c1 * identity(q.dim()));
}

double flow_drift(const PencilQuadruple& q, int n, const CMatrix& Q) {
  const double s = q.bands.scale();
  const std::vector<Complex> probes{Complex(0.0, s), Complex(0.5 * s, 0.7 * s), Complex(-s, 0.3 * s),
                                    Complex(2.0 * s, -1.1 * s)};
  double d = check_quadruple(q, probes).max_residual();
  if (n >= 1) d = std::max(d, (Q - (q.F.coeff(n - 1) - q.H.coeff(n))).norm() / s);
  return d;
}

}  // namespace

std::vector<PencilFlowSample> evolve_pencils(const PencilQuadruple& q0, double x0, const std::vector<double>& xs,
                                             const FlowOptions& opt) {
  const int n = q0.bands.n();
  const FlowLayout L{n, static_cast<Eigen::Index>(q0.dim())};
  const std::size_t m = q0.dim();
  const double c1 = -0.5 * q0.bands.sum_edges();
  const MatrixPencil minus_z = scalar_pencil(m, {0.0, -1.0});

  auto rhs = [&](double, const CMatrix& y) -> CMatrix {
    const PencilQuadruple q = unpack_quadruple(y, L, q0.bands);
    const CMatrix Q = closure_Q(q, n, c1);
    const MatrixPencil A = MatrixPencil(m, {Q}) + minus_z;  // Q - z
    const MatrixPencil dF = (q.G1 + q.G2).scaled(-1.0);
    const MatrixPencil dG1 = (A * q.F).scaled(-1.0) - q.H;
    const MatrixPencil dG2 = (q.F * A).scaled(-1.0) - q.H;
    const MatrixPencil dH = (q.G1 * A).scaled(-1.0) - A * q.G2;
    CMatrix dy(y.rows(), y.cols());
    Eigen::Index b = 0;
    auto put = [&](const CMatrix& c) { dy.middleRows((b++) * L.m, L.m) = c; };
    for (int k = 0; k < n; ++k) put(dF.coeff_or_zero(k));
    for (int k = 0; k < n; ++k) put(dG1.coeff_or_zero(k));
    for (int k = 0; k < n; ++k) put(dG2.coeff_or_zero(k));
    for (int k = 0; k <= n; ++k) put(dH.coeff_or_zero(k));
    return dy;
  };

  const auto states = dopri5_dense(rhs, pack_quadruple(q0, L), x0, xs, opt.ode);
  std::vector<PencilFlowSample> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    PencilQuadruple q = unpack_quadruple(states[i], L, q0.bands);
    const CMatrix Q = closure_Q(q, n, c1);
    const double drift = flow_drift(q, n, Q);
    if (drift > opt.drift_tol) throw Error(ErrorCode::IdentityDrift, "pencil identities drifted along the flow");
    out.push_back({xs[i], std::move(q), Q, drift});
  }
  return out;
}

std::vector<PencilQuadruple> transport_pencils(const PencilQuadruple& q0, const Potential& q, double x0,
                                               const std::vector<double>& xs, const OdeOptions& opt) {
  const int n = q0.bands.n();
  const std::size_t m = q0.dim();
  const int N = n + 2;
  const double rho = q0.bands.scale();
  std::vector<Complex> nodes;
  for (int j = 0; j < N; ++j) nodes.push_back(rho * std::polar(1.0, (2.0 * j + 1.0) * std::numbers::pi / N));

  std::vector<FundamentalSystem> fs(static_cast<std::size_t>(N));
  parallel_for(static_cast<std::size_t>(N),
               [&](std::size_t j) { fs[j] = integrate_fundamental(q, nodes[j], x0, xs, opt); });

  // values[i][j] = (F, G1, G2, H) at xs[i], nodes[j]; conj(nodes[j]) = nodes[N-1-j]
  std::vector<PencilQuadruple> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<std::array<CMatrix, 4>> vals;
    for (int j = 0; j < N; ++j) {
      const Complex z = nodes[static_cast<std::size_t>(j)];
      const auto& s = fs[static_cast<std::size_t>(j)].samples[i];
      const auto& c = fs[static_cast<std::size_t>(N - 1 - j)].samples[i];
      const CMatrix F0 = q0.F(z), G10 = q0.G1(z), G20 = q0.G2(z), H0 = q0.H(z);
      const CMatrix tb = c.theta.adjoint(), pb = c.phi.adjoint(), dtb = c.dtheta.adjoint(), dpb = c.dphi.adjoint();
      vals.push_back({s.theta * F0 * tb + s.phi * H0 * pb - s.phi * G10 * tb - s.theta * G20 * pb,
                      -s.dtheta * F0 * tb - s.dphi * H0 * pb + s.dphi * G10 * tb + s.dtheta * G20 * pb,
                      -s.theta * F0 * dtb - s.phi * H0 * dpb + s.phi * G10 * dtb + s.theta * G20 * dpb,
                      s.dtheta * F0 * dtb + s.dphi * H0 * dpb - s.dphi * G10 * dtb - s.dtheta * G20 * dpb});
    }
    auto fit = [&](int which, int degree) {
      std::vector<CMatrix> coeffs;
      for (int k = 0; k <= degree; ++k) {
        CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (int j = 0; j < N; ++j)
          acc += vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(which)] /
                 std::pow(nodes[static_cast<std::size_t>(j)], k);
        coeffs.push_back(acc / static_cast<double>(N));
      }
      return MatrixPencil(m, std::move(coeffs));
    };
    out.push_back({fit(0, n), fit(1, n - 1), fit(2, n - 1), fit(3, n + 1), q0.bands});
  }
  return out;
}

double riccati_residual(const std::function<CMatrix(double)>& m_of_x, const Potential& q, Complex z, double x,
                        double h) {
  const CMatrix M = m_of_x(x);
  const CMatrix dM = (-m_of_x(x + 2 * h) + 8.0 * m_of_x(x + h) - 8.0 * m_of_x(x - h) + m_of_x(x - 2 * h)) / (12.0 * h);
  const auto mm = M.rows();
  return (dM + M * M - q.value(x) + z * CMatrix::Identity(mm, mm)).norm();
}

std::vector<double> riccati_residual_grid(const std::vector<CMatrix>& mv, const std::vector<CMatrix>& qv,
                                          const std::vector<double>& xs, Complex z) {
  const std::size_t N = xs.size();
  if (mv.size() != N || qv.size() != N || N < 5) throw Error(ErrorCode::ShapeMismatch, "grid sizes differ");
  const double h = (xs.back() - xs.front()) / static_cast<double>(N - 1);
  for (std::size_t i = 1; i < N; ++i)
    if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * std::abs(h)) throw Error(ErrorCode::ShapeMismatch, "grid not uniform");
  std::vector<double> out;
  const auto m = mv.front().rows();
  for (std::size_t i = 2; i + 2 < N; ++i) {
    const CMatrix dM = (-mv[i + 2] + 8.0 * mv[i + 1] - 8.0 * mv[i - 1] + mv[i - 2]) / (12.0 * h);
    out.push_back((dM + mv[i] * mv[i] - qv[i] + z * CMatrix::Identity(m, m)).norm());
  }
  return out;
}

std::vector<std::vector<CMatrix>> asymptotic_m_jets(const std::vector<CMatrix>& jet, int N, Sign s) {
  if (N < 1) return {};
  if (static_cast<int>(jet.size()) < N) throw Error(ErrorCode::DomainError, "need derivatives of Q up to order N-1");
  const double sg = sign_value(s);
  std::vector<Jet> M;
  M.push_back(jet_scale(-sg * 0.5 * I_UNIT, jet));
  if (N >= 2) M.push_back(jet_scale(0.25, jet_diff(jet)));
  for (int k = 2; k < N; ++k) {  // builds M_{k+1}
    Jet acc = jet_diff(M[static_cast<std::size_t>(k - 1)]);
    for (int l = 1; l <= k - 1; ++l)
      acc = jet_add(acc, jet_mul(M[static_cast<std::size_t>(l - 1)], M[static_cast<std::size_t>(k - l - 1)]));
    M.push_back(jet_scale(sg * 0.5 * I_UNIT, acc));
  }
  return M;
}

std::vector<CMatrix> asymptotic_m_coeffs(const std::vector<CMatrix>& jet, int N, Sign s) {
  std::vector<CMatrix> out;
  for (const auto& j : asymptotic_m_jets(jet, N, s)) out.push_back(j.front());
  return out;
}

CMatrix asymptotic_partial_sum(const std::vector<CMatrix>& coeffs, Complex z) {
  const Complex rz = z.imag() >= 0 ? std::sqrt(z) : -std::conj(std::sqrt(std::conj(z)));
  CMatrix acc = CMatrix::Zero(coeffs.front().rows(), coeffs.front().cols());
  Complex pw = 1.0 / rz;
  for (const auto& c : coeffs) {
    acc += pw * c;
    pw /= rz;
  }
  return acc;
}

double floquet_discriminant(const Potential& q, double period, double lambda, const FloquetOptions& opt) {
  if (q.dim() != 1) throw Error(ErrorCode::ShapeMismatch, "discriminant is defined for scalar potentials");
  const auto fs = integrate_fundamental(q, Complex(lambda, 0.0), opt.x0, {opt.x0 + period}, opt.ode);
  const auto& s = fs.samples.back();
  return (s.theta(0, 0) + s.dphi(0, 0)).real();
}

std::vector<FloquetEdge> floquet_band_edges(const Potential& q, double period, double lo, double hi,
                                            const FloquetOptions& opt) {
  if (!(hi > lo) || opt.scan_points < 3) throw Error(ErrorCode::WindowTooNarrow, "empty scan window");
  const std::size_t N = static_cast<std::size_t>(opt.scan_points);
  std::vector<double> lam(N), delta(N);
  for (std::size_t i = 0; i < N; ++i) lam[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(N - 1);
  parallel_for(N, [&](std::size_t i) { delta[i] = floquet_discriminant(q, period, lam[i], opt); });

  std::vector<FloquetEdge> edges;
  auto disc = [&](double l) { return floquet_discriminant(q, period, l, opt); };
  for (double target : {2.0, -2.0}) {
    auto g = [&](double l) { return disc(l) - target; };
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double ga = delta[i] - target, gb = delta[i + 1] - target;
      if (ga == 0.0) {
        edges.push_back({lam[i], delta[i], false});
        continue;
      }
      if (ga * gb < 0.0) {
        double a = lam[i], b = lam[i + 1], fa = ga;
        while (b - a > opt.root_tol * std::max(1.0, std::abs(a))) {
          const double mid = 0.5 * (a + b), fm = g(mid);
          if (fm == 0.0) { a = b = mid; break; }
          if ((fm < 0) == (fa < 0)) { a = mid; fa = fm; } else { b = mid; }
        }
        const double root = 0.5 * (a + b);
        edges.push_back({root, disc(root), false});
      }
    }
    // tangential contact: |g| locally minimal without a sign change
    for (std::size_t i = 1; i + 1 < N; ++i) {
      const double gm = delta[i - 1] - target, g0 = delta[i] - target, gp = delta[i + 1] - target;
      if (!(std::abs(g0) <= std::abs(gm) && std::abs(g0) <= std::abs(gp))) continue;
      if (gm * g0 <= 0.0 || g0 * gp <= 0.0 || std::abs(g0) > 0.25) continue;
      double a = lam[i - 1], b = lam[i + 1];
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - phi * (b - a), d = a + phi * (b - a);
      double fc = std::abs(g(c)), fd = std::abs(g(d));
      for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) { b = d; d = c; fd = fc; c = b - phi * (b - a); fc = std::abs(g(c)); }
        else { a = c; c = d; fc = fd; d = a + phi * (b - a); fd = std::abs(g(d)); }
      }
      const double at = 0.5 * (a + b);
      const double val = disc(at);
      if (std::abs(val - target) < opt.touch_tol) edges.push_back({at, val, true});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  std::vector<FloquetEdge> unique;
  for (const auto& e : edges)
    if (unique.empty() || e.lambda - unique.back().lambda > 1e-9 * std::max(1.0, std::abs(e.lambda)))
      unique.push_back(e);
  return unique;
}

CMatrix weyl_m_shooting(const Potential& q, Complex z, double x0, Sign s, double X, const OdeOptions& opt) {
  const auto m = static_cast<Eigen::Index>(q.dim());
  const double sg = sign_value(s);
  const double start = x0 + sg * X;
  const CMatrix root = mat_func(q.value(start), [z](double v) { return std::sqrt(z - v); });
  CMatrix y(2 * m, m);
  y.topRows(m) = CMatrix::Identity(m, m);
  y.bottomRows(m) = sg * I_UNIT * root;
  auto rhs = [&](double x, const CMatrix& v) -> CMatrix {
    CMatrix dv(2 * m, m);
    dv.topRows(m) = v.bottomRows(m);
    dv.bottomRows(m) = (q.value(x) - z * CMatrix::Identity(m, m)) * v.topRows(m);
    return dv;
  };
  y = dopri5(rhs, y, start, x0, opt);
  return y.bottomRows(m) * checked_inverse(y.topRows(m));
}

}  // namespace finiteband
