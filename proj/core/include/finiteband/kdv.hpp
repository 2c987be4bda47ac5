#pragma once

#include <vector>

#include "finiteband/branch_cut.hpp"
#include "finiteband/linalg.hpp"

namespace finiteband {

// Rhat_k(x), k = 0..K, from the expansion of (M_- - M_+)^{-1}; needs Q^{(j)} for j <= 2K-2.
std::vector<CMatrix> rhat_eval(const std::vector<CMatrix>& jet, int K);
// Same with x-derivatives retained (Rhat_k keeps jet.size() - 2k + 1 orders).
std::vector<std::vector<CMatrix>> rhat_jets(const std::vector<CMatrix>& jet, int K);

// Band-pinned constants c_0..c_K by the multinomial sum over the edges.
std::vector<double> c_coeffs(const BandStructure& b, int K);

// s-KdV_n = -2 sum_{l=0}^{n} c_{n-l} Rhat'_{l+1}; jet must reach order 2n+1.
CMatrix skdv_exact(const std::vector<CMatrix>& jet, const std::vector<double>& c, int n);

// Same on a uniform grid from per-point jets of order 2n, differentiating Rhat numerically.
// Returns one residual norm per interior point (two points trimmed at each end).
std::vector<double> skdv_residual_grid(const std::vector<std::vector<CMatrix>>& jets, const std::vector<double>& xs,
                                       const std::vector<double>& c, int n);

// One-gap equation in closed form: (1/4)(Q''' - 3(Q^2)' + 2 (E0+E1+E2) Q').
CMatrix skdv1_closed_form(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qppp, double sum_edges);

// One-gap algebraic relations; each returns the matrix that must vanish.
CMatrix one_gap_second_order(const CMatrix& Q, const CMatrix& Qpp, const BandStructure& b);
CMatrix one_gap_first_integral(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qpp, const BandStructure& b);
CMatrix one_gap_cubic(const CMatrix& Q, const CMatrix& Qp, const BandStructure& b);
// Largest commutator among Q, Q', Q''.
double one_gap_commutators(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qpp);

}  // namespace finiteband
