#include "finiteband/branch_cut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finiteband/error.hpp"

namespace finiteband {

BandStructure::BandStructure(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.empty() || edges_.size() % 2 == 0)
    throw Error(ErrorCode::InvalidBands, "need 2n+1 band edges");
  for (double e : edges_)
    if (!std::isfinite(e)) throw Error(ErrorCode::InvalidBands, "band edges must be finite");
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (!(edges_[i] > edges_[i - 1])) throw Error(ErrorCode::InvalidBands, "band edges must be strictly increasing");
}

std::vector<Interval> BandStructure::bands() const {
  std::vector<Interval> out;
  for (int j = 0; j < n(); ++j) out.push_back({edges_[2 * j], edges_[2 * j + 1]});
  out.push_back({edges_.back(), std::numeric_limits<double>::infinity()});
  return out;
}

std::vector<Interval> BandStructure::gaps() const {
  std::vector<Interval> out;
  for (int j = 1; j <= n(); ++j) out.push_back({edges_[2 * j - 1], edges_[2 * j]});
  return out;
}

bool BandStructure::in_closed_spectrum(double lambda) const {
  for (const auto& iv : bands())
    if (lambda >= iv.lo && lambda <= iv.hi) return true;
  return false;
}

bool BandStructure::in_band_interior(double lambda) const {
  for (const auto& iv : bands())
    if (lambda > iv.lo && lambda < iv.hi) return true;
  return false;
}

int BandStructure::gap_index(double lambda, double tol) const {
  for (int j = 1; j <= n(); ++j)
    if (lambda >= edges_[2 * j - 1] - tol && lambda <= edges_[2 * j] + tol) return j;
  return 0;
}

double BandStructure::distance_to_edges(double lambda) const {
  double d = std::numeric_limits<double>::infinity();
  for (double e : edges_) d = std::min(d, std::abs(lambda - e));
  return d;
}

double BandStructure::sum_edges() const {
  double s = 0.0;
  for (double e : edges_) s += e;
  return s;
}

double BandStructure::scale() const {
  double s = 0.0;
  for (double e : edges_) s = std::max(s, std::abs(e));
  return 1.0 + s;
}

Complex eval_R(const BandStructure& b, Complex z) {
  Complex r = 1.0;
  for (double e : b.edges()) r *= (z - e);
  return r;
}

namespace {

// Product of principal roots; for Im z >= +0 this is exp(1/2 sum Log(z - E_l)).
template <class T>
std::complex<T> upper_branch(const std::vector<double>& edges, std::complex<T> z) {
  std::complex<T> r = 1;
  for (double e : edges) {
    std::complex<T> w = z - static_cast<T>(e);
    if (w.imag() == 0) w = std::complex<T>(w.real(), T(+0.0));
    r *= std::sqrt(w);
  }
  return r;
}

}  // namespace

Complex sqrt_R(const BandStructure& b, Complex z, Side side) {
  if (z.imag() > 0) return upper_branch<double>(b.edges(), z);
  if (z.imag() < 0) return -std::conj(upper_branch<double>(b.edges(), std::conj(z)));

  const double lambda = z.real();
  for (double e : b.edges())
    if (lambda == e) return 0.0;
  const Complex up = upper_branch<double>(b.edges(), Complex(lambda, 0.0));
  if (!b.in_band_interior(lambda)) return up;  // analytic across gaps
  switch (side) {
    case Side::Upper: return up;
    case Side::Lower: return -std::conj(up);
    case Side::Strict: break;
  }
  throw Error(ErrorCode::OnCut, "argument lies on a band and no side was chosen");
}

std::complex<long double> sqrt_R_upper_ld(const BandStructure& b, std::complex<long double> z) {
  return upper_branch<long double>(b.edges(), z);
}

}  // namespace finiteband
