#include "finiteband/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "finiteband/error.hpp"

namespace finiteband {

std::vector<CMatrix> ConstantPotential::jet(double, int order) const {
  std::vector<CMatrix> out{e0_ * identity(m_)};
  for (int k = 1; k <= order; ++k) out.push_back(CMatrix::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_)));
  return out;
}

HochstadtPotential::HochstadtPotential(HochstadtSpec spec)
    : spec_(std::move(spec)), bands_(spec_.bands), curve_(curve_from_bands(bands_)), wp_(curve_),
      shift_(bands_.sum_edges() / 3.0) {
  const auto m = static_cast<Eigen::Index>(spec_.alphas.size());
  if (m == 0) throw Error(ErrorCode::ShapeMismatch, "need at least one channel");
  if (spec_.U.size() == 0) spec_.U = CMatrix::Identity(m, m);
  if (spec_.U.rows() != m || spec_.U.cols() != m) throw Error(ErrorCode::ShapeMismatch, "U must be m x m");
  if ((spec_.U.adjoint() * spec_.U - CMatrix::Identity(m, m)).norm() > 1e-10)
    throw Error(ErrorCode::DomainError, "U is not unitary");
}

std::vector<double> HochstadtPotential::channel_jet(std::size_t j, double x, int order) const {
  const auto d = wp_.derivatives(Complex(x + spec_.alphas.at(j), curve_.omega3_im), order);
  std::vector<double> out;
  for (int k = 0; k <= order; ++k) out.push_back(2.0 * d[static_cast<std::size_t>(k)].real() + (k == 0 ? shift_ : 0.0));
  return out;
}

std::vector<CMatrix> HochstadtPotential::jet(double x, int order) const {
  const auto m = static_cast<Eigen::Index>(dim());
  std::vector<Eigen::VectorXd> diag(static_cast<std::size_t>(order + 1), Eigen::VectorXd(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto c = channel_jet(static_cast<std::size_t>(j), x, order);
    for (int k = 0; k <= order; ++k) diag[static_cast<std::size_t>(k)](j) = c[static_cast<std::size_t>(k)];
  }
  std::vector<CMatrix> out;
  for (const auto& dk : diag) {
    CMatrix q = spec_.U * dk.cast<Complex>().asDiagonal() * spec_.U.adjoint();
    out.push_back(hermitian_part(q));
  }
  return out;
}

double hochstadt_scalar(double x, double alpha, const BandStructure& b) {
  HochstadtPotential p({b.edges(), {alpha}, CMatrix::Identity(1, 1)});
  return p.channel_jet(0, x, 0).front();
}

PotentialProfile sample_profile(const Potential& q, const std::vector<double>& xs) {
  if (q.max_jet_order() < 3) throw Error(ErrorCode::DomainError, "profile needs third derivatives");
  PotentialProfile p;
  p.xs = xs;
  for (double x : xs) {
    const auto j = q.jet(x, 3);
    p.Q.push_back(j[0]);
    p.Qp.push_back(j[1]);
    p.Qpp.push_back(j[2]);
    p.Qppp.push_back(j[3]);
  }
  return p;
}

PotentialProfile hochstadt_matrix(const HochstadtSpec& spec, const std::vector<double>& xs) {
  return sample_profile(HochstadtPotential(spec), xs);
}

PotentialProfile borg_potential(double e0, std::size_t m, const std::vector<double>& xs) {
  return sample_profile(ConstantPotential(e0, m), xs);
}

namespace {

// Quintic Hermite basis on [0,1]; rows: value-0, slope-0, curvature-0, value-1, slope-1, curvature-1.
constexpr double kHermite[6][6] = {
    {1, 0, 0, -10, 15, -6}, {0, 1, 0, -6, 8, -3}, {0, 0, 0.5, -1.5, 1.5, -0.5},
    {0, 0, 0, 10, -15, 6},  {0, 0, 0, -4, 7, -3}, {0, 0, 0, 0.5, -1, 0.5}};

double basis_derivative(int b, int d, double t) {
  double acc = 0.0;
  for (int p = d; p < 6; ++p) {
    double c = kHermite[b][p];
    for (int q = 0; q < d; ++q) c *= (p - q);
    acc += c * std::pow(t, p - d);
  }
  return acc;
}

}  // namespace

ProfilePotential::ProfilePotential(PotentialProfile profile) : profile_(std::move(profile)) {
  if (profile_.size() < 2) throw Error(ErrorCode::ShapeMismatch, "profile needs at least two samples");
  for (std::size_t i = 1; i < profile_.size(); ++i)
    if (!(profile_.xs[i] > profile_.xs[i - 1])) throw Error(ErrorCode::ShapeMismatch, "profile grid must increase");
}

std::vector<CMatrix> ProfilePotential::jet(double x, int order) const {
  const auto& xs = profile_.xs;
  if (x < xs.front() - 1e-12 || x > xs.back() + 1e-12) throw Error(ErrorCode::DomainError, "x outside profile grid");
  std::size_t i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  i = std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
  const double h = xs[i + 1] - xs[i], t = (x - xs[i]) / h;
  const CMatrix* data[6] = {&profile_.Q[i], &profile_.Qp[i], &profile_.Qpp[i],
                            &profile_.Q[i + 1], &profile_.Qp[i + 1], &profile_.Qpp[i + 1]};
  const double hp[6] = {1, h, h * h, 1, h, h * h};
  std::vector<CMatrix> out;
  for (int d = 0; d <= order; ++d) {
    CMatrix acc = CMatrix::Zero(data[0]->rows(), data[0]->cols());
    for (int b = 0; b < 6; ++b) acc += (hp[b] * basis_derivative(b, d, t)) * *data[b];
    out.push_back(acc / std::pow(h, d));
  }
  return out;
}

PerturbedPotential::PerturbedPotential(std::shared_ptr<const Potential> base, double amplitude, double k, double phase,
                                       CMatrix direction)
    : base_(std::move(base)), amplitude_(amplitude), k_(k), phase_(phase), direction_(std::move(direction)) {}

std::vector<CMatrix> PerturbedPotential::jet(double x, int order) const {
  auto out = base_->jet(x, order);
  for (int d = 0; d <= order; ++d)
    out[static_cast<std::size_t>(d)] +=
        (amplitude_ * std::pow(k_, d) * std::cos(k_ * x + phase_ + d * std::numbers::pi / 2)) * direction_;
  return out;
}

GaussianBumpPotential::GaussianBumpPotential(double e0, std::vector<double> amplitudes, double cutoff)
    : e0_(e0), amps_(std::move(amplitudes)), cutoff_(cutoff) {}

std::vector<CMatrix> GaussianBumpPotential::jet(double x, int order) const {
  const std::size_t m = amps_.size();
  const double f = std::abs(x) > cutoff_ ? 0.0 : std::exp(-x * x);
  const double d[4] = {f, -2 * x * f, (4 * x * x - 2) * f, (-8 * x * x * x + 12 * x) * f};
  std::vector<CMatrix> out;
  for (int k = 0; k <= order; ++k) {
    CMatrix q = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = amps_[j] * d[k];
    if (k == 0) q += e0_ * identity(m);
    out.push_back(q);
  }
  return out;
}

double trace_constant_c1(const BandStructure& b) { return -0.5 * b.sum_edges(); }

Divisor divisor_from_Q1(const CMatrix& Q, const BandStructure& b, double tol) {
  if (b.n() != 1) throw Error(ErrorCode::InvalidBands, "divisor_from_Q1 needs one gap");
  const double c1 = trace_constant_c1(b);
  const auto sd = herm_eig(Q);
  const auto& E = b.edges();
  Divisor d;
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    double mu = -sd.eigenvalues[k] / 2.0 - c1;
    if (mu < E[1] - tol * b.scale() || mu > E[2] + tol * b.scale())
      throw Error(ErrorCode::ZoneViolation, "mu outside the closed gap");
    mu = std::clamp(mu, E[1], E[2]);
    d.push_back({mu, 1, std::sqrt(std::abs(eval_R(b, mu).real())) * sd.projections[k]});
  }
  return d;
}

PencilQuadruple closed_form_pencils_n0(std::size_t m, const BandStructure& b) {
  if (b.n() != 0) throw Error(ErrorCode::InvalidBands, "expected a single band edge");
  const double e0 = b.edges().front();
  return {scalar_pencil(m, {1.0}), MatrixPencil::zero(m), MatrixPencil::zero(m), scalar_pencil(m, {-e0, 1.0}), b};
}

PencilQuadruple closed_form_pencils_n1(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qpp, const BandStructure& b) {
  if (b.n() != 1) throw Error(ErrorCode::InvalidBands, "expected one gap");
  const auto m = static_cast<std::size_t>(Q.rows());
  const CMatrix I = identity(m);
  const double c1 = trace_constant_c1(b);
  const MatrixPencil F(m, {0.5 * Q + c1 * I, I});
  const MatrixPencil G(m, {-0.25 * Qp});
  const MatrixPencil H(m, {0.25 * Qpp - 0.5 * Q * Q - c1 * Q, -0.5 * Q + c1 * I, I});
  return {F, G, G, H, b};
}

PencilQuadruple closed_form_pencils(const std::vector<CMatrix>& jet, const BandStructure& b) {
  if (b.n() == 0) return closed_form_pencils_n0(static_cast<std::size_t>(jet.at(0).rows()), b);
  if (b.n() == 1) return closed_form_pencils_n1(jet.at(0), jet.at(1), jet.at(2), b);
  throw Error(ErrorCode::InvalidBands, "closed forms exist for zero or one gap only");
}

CMatrix random_unitary(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto n = static_cast<Eigen::Index>(m);
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

}  // namespace finiteband
