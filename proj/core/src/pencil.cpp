#include "finiteband/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "finiteband/error.hpp"

namespace finiteband {

MatrixPencil::MatrixPencil(std::size_t dim, std::vector<CMatrix> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (static_cast<std::size_t>(c.rows()) != dim_ || static_cast<std::size_t>(c.cols()) != dim_)
      throw Error(ErrorCode::ShapeMismatch, "pencil coefficient has wrong shape");
}

CMatrix MatrixPencil::coeff_or_zero(int k) const {
  if (k < 0 || k > degree()) return CMatrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  return coeffs_[static_cast<std::size_t>(k)];
}

CMatrix MatrixPencil::operator()(Complex z) const {
  const auto m = static_cast<Eigen::Index>(dim_);
  CMatrix acc = CMatrix::Zero(m, m);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

MatrixPencil MatrixPencil::adjoint_conj() const {
  std::vector<CMatrix> c;
  for (const auto& a : coeffs_) c.push_back(a.adjoint());
  return MatrixPencil(dim_, std::move(c));
}

bool MatrixPencil::is_self_adjoint(double tol) const {
  for (const auto& a : coeffs_)
    if (hermitian_defect(a) > tol * std::max(1.0, a.norm())) return false;
  return true;
}

bool MatrixPencil::is_monic(double tol) const {
  return degree() >= 0 && (coeffs_.back() - identity(dim_)).norm() <= tol;
}

MatrixPencil MatrixPencil::operator+(const MatrixPencil& o) const {
  const int d = std::max(degree(), o.degree());
  std::vector<CMatrix> c;
  for (int k = 0; k <= d; ++k) c.push_back(coeff_or_zero(k) + o.coeff_or_zero(k));
  return MatrixPencil(dim_, std::move(c));
}

MatrixPencil MatrixPencil::operator-(const MatrixPencil& o) const { return *this + o.scaled(-1.0); }

MatrixPencil MatrixPencil::operator*(const MatrixPencil& o) const {
  if (degree() < 0 || o.degree() < 0) return zero(dim_);
  const auto m = static_cast<Eigen::Index>(dim_);
  std::vector<CMatrix> c(static_cast<std::size_t>(degree() + o.degree() + 1), CMatrix::Zero(m, m));
  for (int i = 0; i <= degree(); ++i)
    for (int j = 0; j <= o.degree(); ++j) c[static_cast<std::size_t>(i + j)] += coeff(i) * o.coeff(j);
  return MatrixPencil(dim_, std::move(c));
}

MatrixPencil MatrixPencil::scaled(Complex s) const {
  std::vector<CMatrix> c;
  for (const auto& a : coeffs_) c.push_back(s * a);
  return MatrixPencil(dim_, std::move(c));
}

MatrixPencil MatrixPencil::shifted_up() const {
  if (degree() < 0) return *this;
  std::vector<CMatrix> c;
  c.push_back(CMatrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_)));
  for (const auto& a : coeffs_) c.push_back(a);
  return MatrixPencil(dim_, std::move(c));
}

double MatrixPencil::max_coeff_norm() const {
  double s = 0.0;
  for (const auto& a : coeffs_) s = std::max(s, a.norm());
  return s;
}

MatrixPencil scalar_pencil(std::size_t dim, const std::vector<Complex>& coeffs) {
  std::vector<CMatrix> c;
  for (const auto& v : coeffs) c.push_back(v * identity(dim));
  return MatrixPencil(dim, std::move(c));
}

const char* pencil_kind_name(PencilKind k) {
  switch (k) {
    case PencilKind::None: return "none";
    case PencilKind::WeaklyHyperbolic: return "weakly_hyperbolic";
    case PencilKind::Hyperbolic: return "hyperbolic";
    case PencilKind::StronglyHyperbolic: return "strongly_hyperbolic";
  }
  return "none";
}

std::vector<Complex> polynomial_roots(const std::vector<double>& c) {
  int d = static_cast<int>(c.size()) - 1;
  while (d > 0 && c[static_cast<std::size_t>(d)] == 0.0) --d;
  if (d <= 0) return {};
  const double lead = c[static_cast<std::size_t>(d)];
  if (d == 1) return {Complex(-c[0] / lead, 0.0)};
  if (d == 2) {
    const double a = lead, b = c[1], cc = c[0];
    const double disc = b * b - 4 * a * cc;
    if (disc >= 0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q == 0.0) return {0.0, 0.0};
      return {Complex(q / a), Complex(cc / q)};
    }
    const double re = -b / (2 * a), im = std::sqrt(-disc) / (2 * a);
    return {Complex(re, -im), Complex(re, im)};
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<Complex> out;
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

PencilClass classify(const MatrixPencil& p, const ClassifyOptions& opt) {
  if (p.degree() < 1) throw Error(ErrorCode::DegreeMismatch, "classify needs degree >= 1");
  if (!p.is_self_adjoint(opt.tol)) throw Error(ErrorCode::NotSelfAdjoint, "coefficients are not Hermitian");
  const CMatrix& lead = p.coeff(p.degree());
  if (min_eigenvalue_hermitian(lead) <= opt.tol * std::max(1.0, lead.norm()))
    throw Error(ErrorCode::LeadingNotPositive, "leading coefficient is not positive definite");

  const auto m = static_cast<Eigen::Index>(p.dim());
  std::vector<CVector> dirs;
  for (const auto& a : p.coeffs()) {
    const auto sd = herm_eig(hermitian_part(a));
    for (Eigen::Index k = 0; k < m; ++k) dirs.push_back(sd.eigenvectors.col(k));
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < opt.random_directions; ++s) {
    CVector f(m);
    for (Eigen::Index k = 0; k < m; ++k) f(k) = Complex(gauss(rng), gauss(rng));
    dirs.push_back(f / f.norm());
  }

  const int d = p.degree();
  const double root_tol = std::sqrt(opt.tol);
  PencilClass out;
  std::vector<Interval> zones(static_cast<std::size_t>(d),
                              {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  bool real = true, distinct = true;
  for (const auto& f : dirs) {
    std::vector<double> c;
    for (const auto& a : p.coeffs()) c.push_back((f.adjoint() * a * f)(0, 0).real());
    auto roots = polynomial_roots(c);
    double scale = 1.0;
    for (const auto& r : roots) scale = std::max(scale, std::abs(r));
    std::vector<double> re;
    for (const auto& r : roots) {
      out.max_imag_root = std::max(out.max_imag_root, std::abs(r.imag()) / scale);
      if (std::abs(r.imag()) > root_tol * scale) real = false;
      re.push_back(r.real());
    }
    std::sort(re.begin(), re.end());
    for (std::size_t j = 0; j + 1 < re.size(); ++j)
      if (re[j + 1] - re[j] <= root_tol * scale) distinct = false;
    for (std::size_t j = 0; j < re.size() && j < zones.size(); ++j) {
      zones[j].lo = std::min(zones[j].lo, re[j]);
      zones[j].hi = std::max(zones[j].hi, re[j]);
    }
  }
  if (!real) return out;
  out.root_zones = zones;
  out.kind = PencilKind::WeaklyHyperbolic;
  if (!distinct) return out;
  out.kind = PencilKind::Hyperbolic;
  bool separated = true;
  for (std::size_t j = 0; j + 1 < zones.size(); ++j)
    if (!(zones[j].hi < zones[j + 1].lo)) separated = false;
  if (separated) out.kind = PencilKind::StronglyHyperbolic;
  return out;
}

double LedgerReport::max_residual() const {
  double r = 0.0;
  for (const auto& e : entries) r = std::max(r, e.max_residual);
  return r;
}

LedgerReport check_quadruple(const PencilQuadruple& q, const std::vector<Complex>& zs) {
  const std::size_t m = q.dim();
  if (q.G1.dim() != m || q.G2.dim() != m || q.H.dim() != m)
    throw Error(ErrorCode::ShapeMismatch, "quadruple dimensions differ");
  const CMatrix Im = identity(m);
  LedgerReport rep;
  rep.entries = {{"F(conj z)* = F(z)", 0}, {"H(conj z)* = H(z)", 0},     {"G2(conj z)* = G1(z)", 0},
                 {"F G1 = G2 F", 0},       {"H G2 = G1 H", 0},            {"H F - G1^2 = R I", 0},
                 {"F H - G2^2 = R I", 0}};
  for (const auto& z : zs) {
    const double scale = std::max(1.0, std::abs(eval_R(q.bands, z)));
    const Complex zc = std::conj(z);
    const CMatrix F = q.F(z), G1 = q.G1(z), G2 = q.G2(z), H = q.H(z);
    const CMatrix R = eval_R(q.bands, z) * Im;
    const double res[] = {
        (q.F(zc).adjoint() - F).norm(), (q.H(zc).adjoint() - H).norm(), (q.G2(zc).adjoint() - G1).norm(),
        (F * G1 - G2 * F).norm(),       (H * G2 - G1 * H).norm(),       (H * F - G1 * G1 - R).norm(),
        (F * H - G2 * G2 - R).norm()};
    for (std::size_t i = 0; i < rep.entries.size(); ++i)
      rep.entries[i].max_residual = std::max(rep.entries[i].max_residual, res[i] / scale);
  }
  const int n = q.bands.n();
  double shape = 0.0;
  if (q.F.degree() != n || !q.F.is_monic(1e-12)) shape = 1.0;
  if (q.H.degree() != n + 1 || !q.H.is_monic(1e-12)) shape = 1.0;
  if (q.G1.degree() > n - 1 || q.G2.degree() > n - 1 || q.G1.degree() != q.G2.degree()) shape = 1.0;
  rep.entries.push_back({"degrees and monicity", shape});
  return rep;
}

namespace {

CMatrix divisor_sum(const Divisor& d, Complex z, std::size_t m) {
  CMatrix s = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (const auto& pt : d) s += (static_cast<double>(pt.eps) / (z - pt.mu)) * pt.gamma;
  return s;
}

double divisor_radius(const Divisor& d, double base) {
  double r = base;
  for (const auto& pt : d) r = std::max(r, std::abs(pt.mu) + 1.0);
  return r + 1.0;
}

// Interpolate a polynomial of the given degree through values on a circle, then certify it
// against the rational source away from the nodes and next to every pole.
template <class Fn>
MatrixPencil fit_polynomial(Fn&& rational, int degree, std::size_t m, double radius, const Divisor& d,
                            double tol) {
  if (degree < 0) {
    MatrixPencil zero = MatrixPencil::zero(m);
    for (const auto& pt : d)
      for (double ang : {0.3, 1.9, 3.7, 5.1}) {
        const Complex z = pt.mu + 1e-3 * std::polar(1.0, ang);
        const CMatrix v = rational(z);
        if (v.norm() > tol * std::max(1.0, v.norm())) throw Error(ErrorCode::NotPolynomial, "expected zero pencil");
      }
    return zero;
  }
  const int N = degree + 1;
  std::vector<CMatrix> vals;
  for (int j = 0; j < N; ++j) vals.push_back(rational(radius * std::polar(1.0, 2 * std::numbers::pi * j / N)));
  std::vector<CMatrix> coeffs;
  for (int k = 0; k <= degree; ++k) {
    CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (int j = 0; j < N; ++j) acc += std::polar(1.0, -2 * std::numbers::pi * j * k / N) * vals[static_cast<std::size_t>(j)];
    coeffs.push_back(acc / (static_cast<double>(N) * std::pow(radius, k)));
  }
  MatrixPencil p(m, std::move(coeffs));

  std::vector<Complex> probes;
  for (double ang : {0.4, 1.3, 2.9, 4.4}) probes.push_back(0.6 * radius * std::polar(1.0, ang));
  for (const auto& pt : d)
    for (double ang : {0.3, 1.9, 3.7, 5.1}) probes.push_back(pt.mu + 1e-3 * std::polar(1.0, ang));
  for (const auto& z : probes) {
    const CMatrix exact = rational(z), fit = p(z);
    if ((exact - fit).norm() > tol * std::max({1.0, exact.norm(), fit.norm()}))
      throw Error(ErrorCode::NotPolynomial, "rational expression leaves a pole");
  }
  return p;
}

}  // namespace

std::pair<MatrixPencil, MatrixPencil> build_G_from_F(const MatrixPencil& F, const Divisor& d, const BuildOptions& opt) {
  const std::size_t m = F.dim();
  const int n = F.degree();
  for (const auto& pt : d) {
    if (pt.gamma.rows() != static_cast<Eigen::Index>(m)) throw Error(ErrorCode::ShapeMismatch, "divisor weight shape");
    CMatrix res = CMatrix::Zero(pt.gamma.rows(), pt.gamma.cols());
    for (const auto& other : d)
      if (std::abs(other.mu - pt.mu) <= 1e-12 * std::max(1.0, std::abs(pt.mu))) res += other.eps * other.gamma;
    const CMatrix Fm = F(pt.mu);
    const double scale = std::max(1.0, pt.gamma.norm() * Fm.norm());
    if ((res * Fm).norm() > opt.tol * scale || (Fm * res).norm() > opt.tol * scale)
      throw Error(ErrorCode::NotPolynomial, "pole residual at a divisor point");
  }
  const double radius = divisor_radius(d, 1.0);
  auto g1 = [&](Complex z) -> CMatrix { return divisor_sum(d, z, m) * F(z); };
  auto g2 = [&](Complex z) -> CMatrix { return F(z) * divisor_sum(d, z, m); };
  return {fit_polynomial(g1, n - 1, m, radius, d, opt.tol), fit_polynomial(g2, n - 1, m, radius, d, opt.tol)};
}

MatrixPencil build_H_from_F(const MatrixPencil& F, const Divisor& d, const BandStructure& b, const BuildOptions& opt) {
  const std::size_t m = F.dim();
  if (F.degree() != b.n()) throw Error(ErrorCode::DegreeMismatch, "deg F must equal the number of gaps");
  const double radius = divisor_radius(d, b.scale());
  auto h = [&](Complex z) -> CMatrix {
    const CMatrix Fz = F(z);
    const CMatrix S = divisor_sum(d, z, m);
    return eval_R(b, z) * checked_inverse(Fz, 1e15) + S * Fz * S;
  };
  return fit_polynomial(h, b.n() + 1, m, radius, d, opt.tol);
}

PencilQuadruple quadruple_from_divisor(const MatrixPencil& F, const Divisor& d, const BandStructure& b,
                                       const BuildOptions& opt) {
  auto [G1, G2] = build_G_from_F(F, d, opt);
  return {F, G1, G2, build_H_from_F(F, d, b, opt), b};
}

}  // namespace finiteband
