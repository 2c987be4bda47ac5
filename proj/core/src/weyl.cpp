#include "finiteband/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "finiteband/error.hpp"

namespace finiteband {

namespace {

CMatrix residue_on_circle(const MatrixPencil& F, double mu, double r, int nodes) {
  const auto m = static_cast<Eigen::Index>(F.dim());
  CMatrix acc = CMatrix::Zero(m, m);
  for (int j = 0; j < nodes; ++j) {
    const Complex w = r * std::polar(1.0, 2 * std::numbers::pi * (j + 0.5) / nodes);
    acc += w * checked_inverse(F(mu + w), 1e15);
  }
  return acc / static_cast<double>(nodes);
}

}  // namespace

Divisor gamma_extract(const MatrixPencil& F, const BandStructure& b, const GammaOptions& opt) {
  const int n = b.n();
  const std::size_t m = F.dim();
  if (F.degree() != n || !F.is_monic(1e-12)) throw Error(ErrorCode::DegreeMismatch, "F must be monic of degree n");
  if (!F.is_self_adjoint(1e-10)) throw Error(ErrorCode::NotSelfAdjoint, "F coefficients are not Hermitian");
  if (n == 0) return {};

  const auto M = static_cast<Eigen::Index>(m);
  const Eigen::Index N = M * n;
  CMatrix comp = CMatrix::Zero(N, N);
  for (int k = 0; k + 1 < n; ++k) comp.block(k * M, (k + 1) * M, M, M) = CMatrix::Identity(M, M);
  for (int k = 0; k < n; ++k) comp.block((n - 1) * M, k * M, M, M) = -F.coeff(k);
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);

  const double scale = b.scale() + F.max_coeff_norm();
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < N; ++i) {
    const Complex r = es.eigenvalues()(i);
    if (std::abs(r.imag()) > 1e-6 * scale) throw Error(ErrorCode::ZoneViolation, "det F has a non-real zero");
    roots.push_back(r.real());
  }
  std::sort(roots.begin(), roots.end());

  struct Cluster { double mu; int mult; };
  std::vector<Cluster> clusters;
  for (double r : roots) {
    if (!clusters.empty() && r - clusters.back().mu <= 1e-7 * scale) {
      auto& c = clusters.back();
      c.mu = (c.mu * c.mult + r) / (c.mult + 1);
      ++c.mult;
    } else {
      clusters.push_back({r, 1});
    }
  }

  std::vector<int> per_gap(static_cast<std::size_t>(n + 1), 0);
  for (auto& c : clusters) {
    const int j = b.gap_index(c.mu, 1e-9 * scale);
    if (j == 0) throw Error(ErrorCode::ZoneViolation, "zero of det F outside the closed gaps");
    per_gap[static_cast<std::size_t>(j)] += c.mult;
    // snap to the edge when the zero sits on it within tolerance
    c.mu = std::clamp(c.mu, b.edges()[static_cast<std::size_t>(2 * j - 1)], b.edges()[static_cast<std::size_t>(2 * j)]);
  }
  for (int j = 1; j <= n; ++j)
    if (per_gap[static_cast<std::size_t>(j)] != static_cast<int>(m))
      throw Error(ErrorCode::ZoneViolation, "each closed gap must hold m zeros of det F");

  Divisor d;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    double sep = 0.25 * scale;
    for (std::size_t l = 0; l < clusters.size(); ++l)
      if (l != k) sep = std::min(sep, 0.5 * std::abs(clusters[l].mu - clusters[k].mu));
    const CMatrix r1 = residue_on_circle(F, clusters[k].mu, sep, opt.contour_nodes);
    const CMatrix r2 = residue_on_circle(F, clusters[k].mu, sep, 2 * opt.contour_nodes);
    if ((r1 - r2).norm() > opt.tol * std::max(1.0, r2.norm()))
      throw Error(ErrorCode::DegenerateResidue, "residue of F^{-1} did not converge");
    const Complex sr = sqrt_R(b, clusters[k].mu);
    d.push_back({clusters[k].mu, 1, hermitian_part(-I_UNIT * sr * r2)});
  }
  return d;
}

CMatrix weyl_m(const PencilQuadruple& q, Complex z, Sign s) {
  const CMatrix Finv = checked_inverse(q.F(z));
  return sign_value(s) * I_UNIT * sqrt_R(q.bands, z) * Finv - q.G1(z) * Finv;
}

CMatrix weyl_m_right(const PencilQuadruple& q, Complex z, Sign s) {
  const CMatrix Finv = checked_inverse(q.F(z));
  return sign_value(s) * I_UNIT * sqrt_R(q.bands, z) * Finv - Finv * q.G2(z);
}

CMatrix weyl_m_subleading(const PencilQuadruple& q, Complex z, Sign s) {
  const std::size_t m = q.dim();
  std::vector<Complex> rc{1.0};
  for (double e : q.bands.edges()) {
    std::vector<Complex> next(rc.size() + 1, 0.0);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      next[k + 1] += rc[k];
      next[k] -= e * rc[k];
    }
    rc = next;
  }
  // R I - z F^2 with the leading coefficients cancelled exactly
  const MatrixPencil diff = scalar_pencil(m, rc) - (q.F * q.F).shifted_up();
  std::vector<CMatrix> trimmed(diff.coeffs().begin(), diff.coeffs().end() - 1);
  const MatrixPencil low(m, std::move(trimmed));

  const Complex rz = z.imag() >= 0 ? std::sqrt(z) : -std::conj(std::sqrt(std::conj(z)));
  const CMatrix Fz = q.F(z);
  const CMatrix Finv = checked_inverse(Fz);
  const CMatrix denom = sqrt_R(q.bands, z) * identity(m) + rz * Fz;
  return sign_value(s) * I_UNIT * low(z) * checked_inverse(denom) * Finv - q.G1(z) * Finv;
}

CMatrix full_M(const PencilQuadruple& q, Complex z) {
  const auto m = static_cast<Eigen::Index>(q.dim());
  CMatrix out(2 * m, 2 * m);
  out.topLeftCorner(m, m) = q.H(z);
  out.topRightCorner(m, m) = -q.G2(z);
  out.bottomLeftCorner(m, m) = -q.G1(z);
  out.bottomRightCorner(m, m) = q.F(z);
  return (I_UNIT / (2.0 * sqrt_R(q.bands, z))) * out;
}

CMatrix full_M_from_half_lines(const CMatrix& mp, const CMatrix& mm) {
  const Eigen::Index m = mp.rows();
  const CMatrix Nplus = mm + mp, Nminus = mm - mp;
  const CMatrix Ninv = checked_inverse(Nminus);
  CMatrix out(2 * m, 2 * m);
  out.topLeftCorner(m, m) = mp * Ninv * mm;
  out.topRightCorner(m, m) = 0.5 * Ninv * Nplus;
  out.bottomLeftCorner(m, m) = 0.5 * Nplus * Ninv;
  out.bottomRightCorner(m, m) = Ninv;
  return out;
}

CMatrix full_M_from_half_lines(const PencilQuadruple& q, Complex z) {
  return full_M_from_half_lines(weyl_m(q, z, Sign::Plus), weyl_m(q, z, Sign::Minus));
}

CMatrix green_diag(const PencilQuadruple& q, Complex z) {
  return checked_inverse(weyl_m(q, z, Sign::Minus) - weyl_m(q, z, Sign::Plus));
}

CMatrix green_diag_closed_form(const PencilQuadruple& q, Complex z) {
  return (0.5 * I_UNIT / sqrt_R(q.bands, z)) * q.F(z);
}

double ladder_start(const BandStructure& b, double lambda, const LadderOptions& opt) {
  return std::min(opt.eps_max, 0.1 * b.distance_to_edges(lambda));
}

LimitResult limit_from_above(const MatrixFunction& f, double lambda, const LadderOptions& opt, double eps_max) {
  const int L = opt.levels;
  std::vector<std::vector<CMatrix>> T(static_cast<std::size_t>(L));
  double eps = eps_max;
  for (int i = 0; i < L; ++i, eps /= opt.ratio) {
    auto& row = T[static_cast<std::size_t>(i)];
    row.push_back(f(Complex(lambda, eps)));
    for (int k = 1; k <= i; ++k) {
      const double fac = std::pow(opt.ratio, k) - 1.0;
      const CMatrix& prev = T[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)];
      row.push_back(row.back() + (row.back() - prev) / fac);
    }
  }
  const auto& last = T.back();
  LimitResult res{last.back(), L > 1 ? (last[last.size() - 1] - last[last.size() - 2]).norm() : 0.0};
  if (!res.value.allFinite() || res.error_estimate > opt.tol * std::max(1.0, res.value.norm()))
    throw Error(ErrorCode::ExtrapolationDiverged, "eps ladder did not settle");
  return res;
}

XiResult xi_function(const MatrixFunction& g, const BandStructure& b, double lambda, const LadderOptions& opt) {
  const auto lim = limit_from_above(g, lambda, opt, ladder_start(b, lambda, opt));
  const CMatrix& g0 = lim.value;
  const Eigen::Index m = g0.rows();

  // Normal g0 is diagonalised by any generic real combination of its Hermitian and skew parts.
  const CMatrix mix = hermitian_part(g0) + (std::numbers::pi / std::numbers::e) * imaginary_part(g0);
  HermEigOptions eo;
  eo.cluster_tol = 1e-8;
  const auto sd = herm_eig(mix, eo);

  XiResult out;
  out.xi = CMatrix::Zero(m, m);
  CMatrix rebuilt = CMatrix::Zero(m, m);
  for (std::size_t k = 0; k < sd.projections.size(); ++k) {
    const CMatrix& P = sd.projections[k];
    const Complex w = (P * g0).trace() / P.trace().real();
    if (std::abs(w) <= 1e-14 * std::max(1.0, g0.norm()))
      throw Error(ErrorCode::DomainError, "boundary value of g is singular here");
    const double arg = std::clamp(std::arg(w), 0.0, std::numbers::pi);
    out.xi += (arg / std::numbers::pi) * P;
    rebuilt += w * P;
  }
  out.defect = ((g0 * g0.adjoint() - g0.adjoint() * g0).norm() + (g0 - rebuilt).norm()) / std::max(1.0, g0.norm()) +
               lim.error_estimate;
  return out;
}

ReflectionlessReport reflectionless_check(const MatrixFunction& m_plus, const MatrixFunction& m_minus,
                                          const BandStructure& b, const std::vector<double>& lambdas,
                                          const LadderOptions& opt) {
  ReflectionlessReport rep;
  for (double lam : lambdas) {
    const double e0 = ladder_start(b, lam, opt);
    const CMatrix mp = limit_from_above(m_plus, lam, opt, e0).value;
    const CMatrix mm = limit_from_above(m_minus, lam, opt, e0).value;
    const double d = (mp - mm.adjoint()).norm() / std::max(1.0, mp.norm());
    rep.lambdas.push_back(lam);
    rep.defects.push_back(d);
    rep.max_defect = std::max(rep.max_defect, d);
  }
  return rep;
}

std::vector<CMatrix> stieltjes_invert(const MatrixFunction& m, const BandStructure& b,
                                      const std::vector<double>& lambdas, const LadderOptions& opt) {
  std::vector<CMatrix> out;
  for (double lam : lambdas) {
    const CMatrix v = limit_from_above(m, lam, opt, ladder_start(b, lam, opt)).value;
    out.push_back(imaginary_part(v) / std::numbers::pi);
  }
  return out;
}

CMatrix density_closed_form(const PencilQuadruple& q, double lambda) {
  const auto m = static_cast<Eigen::Index>(q.dim());
  if (!q.bands.in_band_interior(lambda)) return CMatrix::Zero(2 * m, 2 * m);
  const double r = sqrt_R(q.bands, lambda).real();
  CMatrix out(2 * m, 2 * m);
  out.topLeftCorner(m, m) = q.H(lambda);
  out.topRightCorner(m, m) = -q.G2(lambda);
  out.bottomLeftCorner(m, m) = -q.G1(lambda);
  out.bottomRightCorner(m, m) = q.F(lambda);
  return out / (2.0 * std::numbers::pi * r);
}

const char* scalar_kind_name(ScalarKind k) {
  switch (k) {
    case ScalarKind::FType: return "F";
    case ScalarKind::HType: return "H";
    case ScalarKind::Invalid: return "invalid";
  }
  return "invalid";
}

namespace {

Complex eval_poly(const std::vector<double>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<double> poly_from_zeros(const std::vector<double>& zeros) {
  std::vector<double> c{1.0};
  for (double zeta : zeros) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= zeta * c[k];
    }
    c = next;
  }
  return c;
}

}  // namespace

ScalarClassification scalar_classify(const std::vector<double>& zeros, const BandStructure& b) {
  const int n = b.n();
  const auto& E = b.edges();
  std::vector<int> in_gap(static_cast<std::size_t>(n + 1), 0);
  int below = 0, elsewhere = 0;
  for (double z : zeros) {
    const int j = b.gap_index(z);
    if (j > 0) ++in_gap[static_cast<std::size_t>(j)];
    else if (z <= E.front()) ++below;
    else ++elsewhere;
  }
  bool one_per_gap = true;
  for (int j = 1; j <= n; ++j) one_per_gap = one_per_gap && in_gap[static_cast<std::size_t>(j)] == 1;

  ScalarClassification out;
  if (one_per_gap && elsewhere == 0) {
    if (below == 0 && static_cast<int>(zeros.size()) == n) out.kind = ScalarKind::FType;
    if (below == 1 && static_cast<int>(zeros.size()) == n + 1) out.kind = ScalarKind::HType;
  }

  const auto poly = poly_from_zeros(zeros);
  const double lo = E.front() - 2.0 * b.scale(), hi = E.back() + 2.0 * b.scale();
  out.min_imag = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double lam = lo + (hi - lo) * i / 200.0;
    for (double eta : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      const Complex v = herglotz_value(poly, b, Complex(lam, eta));
      out.min_imag = std::min(out.min_imag, v.imag() / std::max(1.0, std::abs(v)));
    }
  }
  return out;
}

Complex herglotz_value(const std::vector<double>& poly, const BandStructure& b, Complex z) {
  return I_UNIT * eval_poly(poly, z) / sqrt_R(b, z);
}

Complex herglotz_rep_integral(const std::vector<double>& poly, const BandStructure& b, Complex z, ScalarKind kind,
                              const QuadOptions& qopt) {
  if (kind == ScalarKind::Invalid) throw Error(ErrorCode::DomainError, "polynomial is neither F- nor H-type");
  auto density = [&](double lam) -> double { return eval_poly(poly, lam).real() / sqrt_R(b, lam).real(); };
  std::function<Complex(double)> integrand;
  Complex constant = 0.0;
  if (kind == ScalarKind::FType) {
    integrand = [&](double lam) -> Complex { return density(lam) / (lam - z); };
  } else {
    integrand = [&](double lam) -> Complex { return density(lam) * (1.0 / (lam - z) - lam / (1.0 + lam * lam)); };
    constant = herglotz_value(poly, b, I_UNIT).real();
  }
  Complex total = 0.0;
  for (const auto& band : b.bands()) {
    if (std::isfinite(band.hi)) total += gauss_chebyshev(integrand, band.lo, band.hi, qopt);
    else total += gauss_chebyshev_right_tail(integrand, band.lo, qopt);
  }
  return constant + total / std::numbers::pi;
}

}  // namespace finiteband
