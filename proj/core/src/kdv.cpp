#include "finiteband/kdv.hpp"

#include <cmath>
#include <functional>

#include "finiteband/error.hpp"
#include "finiteband/flow.hpp"
#include "jet.hpp"

namespace finiteband {

std::vector<std::vector<CMatrix>> rhat_jets(const std::vector<CMatrix>& jet, int K) {
  if (K < 0) return {};
  const auto m = jet.at(0).rows();
  std::vector<Jet> R{jet_constant(CMatrix::Identity(m, m), jet.size())};
  if (K == 0) return R;
  if (static_cast<int>(jet.size()) < 2 * K - 1) throw Error(ErrorCode::DomainError, "jet too short for Rhat_K");
  const auto M = asymptotic_m_jets(jet, 2 * K - 1, Sign::Plus);
  // (I + X)^{-1} with X_j = -i M_{+,2j-1}
  for (int k = 1; k <= K; ++k) {
    Jet acc = jet_scale(0.0, jet_mul(M[static_cast<std::size_t>(0)], R[static_cast<std::size_t>(k - 1)]));
    for (int j = 1; j <= k; ++j)
      acc = jet_add(acc, jet_mul(jet_scale(I_UNIT, M[static_cast<std::size_t>(2 * j - 2)]), R[static_cast<std::size_t>(k - j)]));
    R.push_back(acc);
  }
  return R;
}

std::vector<CMatrix> rhat_eval(const std::vector<CMatrix>& jet, int K) {
  std::vector<CMatrix> out;
  for (const auto& j : rhat_jets(jet, K)) out.push_back(j.front());
  return out;
}

std::vector<double> c_coeffs(const BandStructure& b, int K) {
  const auto& E = b.edges();
  const std::size_t L = E.size();
  // factor(j, e) = (2j)! e^j / (2^{2j} (j!)^2 (2j - 1))
  auto factor = [](int j, double e) {
    double central = 1.0;  // (2j)! / (4^j (j!)^2)
    for (int i = 1; i <= j; ++i) central *= (2.0 * i - 1.0) / (2.0 * i);
    return central * std::pow(e, j) / (2.0 * j - 1.0);
  };
  std::vector<double> c;
  for (int k = 0; k <= K; ++k) {
    double total = 0.0;
    std::function<void(std::size_t, int, double)> rec = [&](std::size_t l, int left, double prod) {
      if (l + 1 == L) {
        total += prod * factor(left, E[l]);
        return;
      }
      for (int j = 0; j <= left; ++j) rec(l + 1, left - j, prod * factor(j, E[l]));
    };
    rec(0, k, 1.0);
    c.push_back(-total);
  }
  return c;
}

CMatrix skdv_exact(const std::vector<CMatrix>& jet, const std::vector<double>& c, int n) {
  const auto R = rhat_jets(jet, n + 1);
  const auto m = jet.at(0).rows();
  CMatrix acc = CMatrix::Zero(m, m);
  for (int l = 0; l <= n; ++l) {
    const auto& r = R[static_cast<std::size_t>(l + 1)];
    if (r.size() < 2) throw Error(ErrorCode::DomainError, "jet too short for the derivative of Rhat");
    acc += c.at(static_cast<std::size_t>(n - l)) * r[1];
  }
  return -2.0 * acc;
}

std::vector<double> skdv_residual_grid(const std::vector<std::vector<CMatrix>>& jets, const std::vector<double>& xs,
                                       const std::vector<double>& c, int n) {
  const std::size_t N = xs.size();
  if (jets.size() != N || N < 5) throw Error(ErrorCode::ShapeMismatch, "grid and jets differ");
  const double h = (xs.back() - xs.front()) / static_cast<double>(N - 1);
  for (std::size_t i = 1; i < N; ++i)
    if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * std::abs(h)) throw Error(ErrorCode::ShapeMismatch, "grid not uniform");

  // S(x) = sum_l c_{n-l} Rhat_{l+1}(x); s-KdV_n = -2 S'(x)
  std::vector<CMatrix> S;
  for (const auto& j : jets) {
    const auto R = rhat_eval(j, n + 1);
    CMatrix acc = CMatrix::Zero(j[0].rows(), j[0].cols());
    for (int l = 0; l <= n; ++l) acc += c.at(static_cast<std::size_t>(n - l)) * R[static_cast<std::size_t>(l + 1)];
    S.push_back(acc);
  }
  std::vector<double> out;
  for (std::size_t i = 2; i + 2 < N; ++i) {
    const CMatrix dS = (-S[i + 2] + 8.0 * S[i + 1] - 8.0 * S[i - 1] + S[i - 2]) / (12.0 * h);
    out.push_back((-2.0 * dS).norm());
  }
  return out;
}

CMatrix skdv1_closed_form(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qppp, double sum_edges) {
  return 0.25 * (Qppp - 3.0 * (Q * Qp + Qp * Q) + 2.0 * sum_edges * Qp);
}

namespace {

double c1_of(const BandStructure& b) { return -0.5 * b.sum_edges(); }

}  // namespace

CMatrix one_gap_second_order(const CMatrix& Q, const CMatrix& Qpp, const BandStructure& b) {
  const auto& E = b.edges();
  const double c1 = c1_of(b);
  const double d1 = c1 * c1 - (E[0] * E[1] + E[0] * E[2] + E[1] * E[2]);
  const auto m = Q.rows();
  return 0.25 * Qpp - 0.75 * Q * Q - c1 * Q + d1 * CMatrix::Identity(m, m);
}

CMatrix one_gap_first_integral(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qpp, const BandStructure& b) {
  const auto& E = b.edges();
  const double c1 = c1_of(b);
  const auto m = Q.rows();
  const CMatrix Im = CMatrix::Identity(m, m);
  return (0.25 * Qpp - 0.5 * Q * Q - c1 * Q) * (0.5 * Q + c1 * Im) - Qp * Qp / 16.0 + E[0] * E[1] * E[2] * Im;
}

CMatrix one_gap_cubic(const CMatrix& Q, const CMatrix& Qp, const BandStructure& b) {
  const double c1 = c1_of(b);
  const auto m = Q.rows();
  const CMatrix A = -0.5 * Q - c1 * CMatrix::Identity(m, m);
  CMatrix R3 = CMatrix::Identity(m, m);
  for (double e : b.edges()) R3 = R3 * (A - e * CMatrix::Identity(m, m));
  return Qp * Qp + 16.0 * R3;
}

double one_gap_commutators(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qpp) {
  return std::max({commutator_norm(Q, Qp), commutator_norm(Q, Qpp), commutator_norm(Qp, Qpp)});
}

}  // namespace finiteband
