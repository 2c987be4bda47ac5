#include "finiteband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "finiteband/error.hpp"

namespace finiteband {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidBands: return "InvalidBands";
    case ErrorCode::OnCut: return "OnCut";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::LeadingNotPositive: return "LeadingNotPositive";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::ZoneViolation: return "ZoneViolation";
    case ErrorCode::DegenerateResidue: return "DegenerateResidue";
    case ErrorCode::SingularF: return "SingularF";
    case ErrorCode::ExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::IdentityDrift: return "IdentityDrift";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double frobenius_norm(const CMatrix& a) { return a.norm(); }

double hermitian_defect(const CMatrix& a) { return (a - a.adjoint()).norm(); }

CMatrix identity(std::size_t m) {
  return CMatrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
}

namespace {

double off_diagonal_sq(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// One complex Jacobi rotation zeroing a(p,q): phase the q axis so a(p,q) is real,
// then a real plane rotation.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  const Complex phase = std::polar(1.0, -std::arg(apq));
  const double app = a(p, p).real(), aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;

  // pair matrix W = [[c, s], [-s*phase, c*phase]] acting on columns (p, q)
  const Complex w00 = c, w01 = s, w10 = -s * phase, w11 = c * phase;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * w00 + akq * w10;
    a(k, q) = akp * w01 + akq * w11;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(w00) * apk + std::conj(w10) * aqk;
    a(q, k) = std::conj(w01) * apk + std::conj(w11) * aqk;
  }
  a(p, q) = a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * w00 + vkq * w10;
    v(k, q) = vkp * w01 + vkq * w11;
  }
}

}  // namespace

SpectralDecomposition herm_eig(const CMatrix& a_in, const HermEigOptions& opt) {
  if (a_in.rows() != a_in.cols()) throw Error(ErrorCode::ShapeMismatch, "herm_eig needs a square matrix");
  const double norm = a_in.norm();
  if (norm > 0 && hermitian_defect(a_in) > opt.herm_tol * norm)
    throw Error(ErrorCode::NotHermitian, "||A - A*|| exceeds tolerance");

  const Eigen::Index n = a_in.rows();
  CMatrix a = hermitian_part(a_in);
  CMatrix v = CMatrix::Identity(n, n);

  const double target = std::pow(1e-15 * norm, 2);
  int sweep = 0;
  while (off_diagonal_sq(a) > target) {
    if (++sweep > opt.max_sweeps) throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > 1e-300) rotate(a, v, p, q);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto i, auto j) { return a(i, i).real() < a(j, j).real(); });

  SpectralDecomposition sd;
  sd.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sd.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    sd.raw_eigenvalues.push_back(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real());
  }

  const double ctol = opt.cluster_tol * norm;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && sd.raw_eigenvalues[static_cast<std::size_t>(end)] -
                              sd.raw_eigenvalues[static_cast<std::size_t>(end - 1)] <= ctol)
      ++end;
    double mean = 0.0;
    CMatrix proj = CMatrix::Zero(n, n);
    for (Eigen::Index k = start; k < end; ++k) {
      mean += sd.raw_eigenvalues[static_cast<std::size_t>(k)];
      proj += sd.eigenvectors.col(k) * sd.eigenvectors.col(k).adjoint();
    }
    sd.eigenvalues.push_back(mean / static_cast<double>(end - start));
    sd.projections.push_back(proj);
    sd.multiplicities.push_back(static_cast<int>(end - start));
    start = end;
  }
  return sd;
}

CMatrix mat_func(const SpectralDecomposition& sd, const std::function<Complex(double)>& f) {
  const Eigen::Index n = sd.eigenvectors.rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    const Complex fk = f(sd.eigenvalues[k]);
    if (!std::isfinite(fk.real()) || !std::isfinite(fk.imag()))
      throw Error(ErrorCode::DomainError, "function not finite at an eigenvalue");
    out += fk * sd.projections[k];
  }
  return out;
}

CMatrix mat_func(const CMatrix& a, const std::function<Complex(double)>& f, const HermEigOptions& opt) {
  return mat_func(herm_eig(a, opt), f);
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix imaginary_part(const CMatrix& a) { return (a - a.adjoint()) / Complex(0.0, 2.0); }

double min_eigenvalue_hermitian(const CMatrix& a) {
  return herm_eig(hermitian_part(a)).raw_eigenvalues.front();
}

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  const CMatrix g = a.adjoint() * a;
  return std::sqrt(std::max(0.0, herm_eig(g).raw_eigenvalues.back()));
}

double commutator_norm(const CMatrix& a, const CMatrix& b) { return op_norm(a * b - b * a); }

CMatrix checked_inverse(const CMatrix& a, double max_cond) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  const double rc = pivot > 0.0 ? lu.rcond() : 0.0;
  if (!(rc * max_cond > 1.0)) throw Error(ErrorCode::SingularF, "matrix numerically singular");
  return lu.inverse();
}

}  // namespace finiteband
