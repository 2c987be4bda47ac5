#pragma once

#include <functional>
#include <vector>

#include "finiteband/pencil.hpp"
#include "finiteband/quadrature.hpp"

namespace finiteband {

enum class Sign { Plus = 1, Minus = -1 };
inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

struct GammaOptions {
  double tol = 1e-9;
  int contour_nodes = 64;
};

// Zeros mu_k of det F with residue weights Gamma_k = -i R^{1/2}(mu_k) Res_{mu_k} F^{-1}.
// Signs are left at +1.
Divisor gamma_extract(const MatrixPencil& F, const BandStructure& b, const GammaOptions& opt = {});

// M_pm = pm i R^{1/2} F^{-1} - G1 F^{-1}.
CMatrix weyl_m(const PencilQuadruple& q, Complex z, Sign s);
// Same function through the right-multiplied form pm i R^{1/2} F^{-1} - F^{-1} G2.
CMatrix weyl_m_right(const PencilQuadruple& q, Complex z, Sign s);
// M_pm minus its leading term pm i sqrt(z), computed without cancellation.
CMatrix weyl_m_subleading(const PencilQuadruple& q, Complex z, Sign s);

// 2m x 2m Weyl matrix (i / 2R^{1/2}) [[H, -G2], [-G1, F]].
CMatrix full_M(const PencilQuadruple& q, Complex z);
// Same matrix assembled from the half-line functions M_pm.
CMatrix full_M_from_half_lines(const CMatrix& m_plus, const CMatrix& m_minus);
CMatrix full_M_from_half_lines(const PencilQuadruple& q, Complex z);

// Diagonal Green's matrix (M_- - M_+)^{-1}.
CMatrix green_diag(const PencilQuadruple& q, Complex z);
CMatrix green_diag_closed_form(const PencilQuadruple& q, Complex z);  // (i/2) R^{-1/2} F

using MatrixFunction = std::function<CMatrix(Complex)>;

struct LadderOptions {
  double eps_max = 1e-2;
  int levels = 5;
  double ratio = 10.0;
  double tol = 1e-6;  // relative disagreement of the last two extrapolants
};

struct LimitResult {
  CMatrix value;
  double error_estimate = 0.0;
};

// Richardson extrapolation of f(lambda + i eps) to eps -> 0 along a geometric ladder.
LimitResult limit_from_above(const MatrixFunction& f, double lambda, const LadderOptions& opt, double eps_max);
// Ladder start capped at a tenth of the distance to the nearest band edge.
double ladder_start(const BandStructure& b, double lambda, const LadderOptions& opt);

struct XiResult {
  CMatrix xi;
  double defect = 0.0;  // non-normality of the boundary value plus extrapolation error
};

// Xi(lambda) = pi^{-1} Im log g(lambda + i0), g normal on the real axis.
XiResult xi_function(const MatrixFunction& g, const BandStructure& b, double lambda, const LadderOptions& opt = {});

struct ReflectionlessReport {
  std::vector<double> lambdas;
  std::vector<double> defects;
  double max_defect = 0.0;
};

// || M_+(lambda + i0) - M_-(lambda + i0)^* || relative to max(1, ||M_+||).
ReflectionlessReport reflectionless_check(const MatrixFunction& m_plus, const MatrixFunction& m_minus,
                                          const BandStructure& b, const std::vector<double>& lambdas,
                                          const LadderOptions& opt = {});

// pi^{-1} Im M(lambda + i0) on each grid point.
std::vector<CMatrix> stieltjes_invert(const MatrixFunction& m, const BandStructure& b,
                                      const std::vector<double>& lambdas, const LadderOptions& opt = {});
// Closed-form density of the 2m x 2m measure: (2 pi R^{1/2})^{-1} [[H, -G2], [-G1, F]] on bands, 0 on gaps.
CMatrix density_closed_form(const PencilQuadruple& q, double lambda);

enum class ScalarKind { FType, HType, Invalid };
const char* scalar_kind_name(ScalarKind k);

struct ScalarClassification {
  ScalarKind kind = ScalarKind::Invalid;
  double min_imag = 0.0;  // smallest sampled Im of i p(z)/R^{1/2}(z) on the upper half-plane
};

// p(z) = prod (z - zeta_j).
ScalarClassification scalar_classify(const std::vector<double>& zeros, const BandStructure& b);

// i p(z) / R^{1/2}(z) for real polynomial coefficients (ascending).
Complex herglotz_value(const std::vector<double>& poly, const BandStructure& b, Complex z);
// Integral representation of the same function over the spectrum.
Complex herglotz_rep_integral(const std::vector<double>& poly, const BandStructure& b, Complex z, ScalarKind kind,
                              const QuadOptions& qopt = {});

}  // namespace finiteband
