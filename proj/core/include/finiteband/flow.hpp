#pragma once

#include <functional>
#include <vector>

#include "finiteband/ode.hpp"
#include "finiteband/potential.hpp"
#include "finiteband/weyl.hpp"

namespace finiteband {

struct FundamentalSample {
  double x = 0.0;
  CMatrix theta, phi, dtheta, dphi;
};

// theta(x0) = I, theta'(x0) = 0, phi(x0) = 0, phi'(x0) = I for -psi'' + Q psi = z psi.
struct FundamentalSystem {
  Complex z;
  double x0 = 0.0;
  std::vector<FundamentalSample> samples;
};

FundamentalSystem integrate_fundamental(const Potential& q, Complex z, double x0, const std::vector<double>& xs,
                                        const OdeOptions& opt = {});

// || Psi(conj z)^* J Psi(z) - J ||; zero for Hermitian Q.
double symplectic_defect(const FundamentalSample& at_z, const FundamentalSample& at_conj_z);

struct WeylSolutionSample {
  double x = 0.0;
  CMatrix psi, dpsi;
};

// psi = theta + phi M, psi' = theta' + phi' M.
std::vector<WeylSolutionSample> weyl_solutions(const FundamentalSystem& fs, const CMatrix& m_at_x0);

struct FlowOptions {
  OdeOptions ode;
  double drift_tol = 1e-7;
};

struct PencilFlowSample {
  double x = 0.0;
  PencilQuadruple quad;
  CMatrix Q;
  double drift = 0.0;  // quadruple identities plus closure consistency
};

// Coefficient-space flow F' = -(G1+G2), G1' = -(Q-z)F - H, G2' = -F(Q-z) - H, H' = -G1(Q-z) - (Q-z)G2,
// closed by reading Q from the z^{n-1} coefficient of F (Q/2 + c1 I). Throws IdentityDrift.
std::vector<PencilFlowSample> evolve_pencils(const PencilQuadruple& q0, double x0, const std::vector<double>& xs,
                                             const FlowOptions& opt = {});

// Quadruple at each x from the fundamental system of q, fitted on n+2 points of a circle in z.
std::vector<PencilQuadruple> transport_pencils(const PencilQuadruple& q0, const Potential& q, double x0,
                                               const std::vector<double>& xs, const OdeOptions& opt = {});

// M' + M^2 - (Q - z) with a five-point centred difference of step h.
double riccati_residual(const std::function<CMatrix(double)>& m_of_x, const Potential& q, Complex z, double x,
                        double h);
// Same on a uniform grid of precomputed values; interior points only.
std::vector<double> riccati_residual_grid(const std::vector<CMatrix>& m_values, const std::vector<CMatrix>& q_values,
                                          const std::vector<double>& xs, Complex z);

// M_{pm,k}(x), k = 1..N, from Q^{(j)}(x), j = 0..N-1.
std::vector<CMatrix> asymptotic_m_coeffs(const std::vector<CMatrix>& jet, int N, Sign s);
// Same, keeping every x-derivative the input jet allows (M_k loses k-1 orders).
std::vector<std::vector<CMatrix>> asymptotic_m_jets(const std::vector<CMatrix>& jet, int N, Sign s);
// sum_k M_k z^{-k/2} using the branch Im sqrt(z) > 0.
CMatrix asymptotic_partial_sum(const std::vector<CMatrix>& coeffs, Complex z);

struct FloquetEdge {
  double lambda = 0.0;
  double discriminant = 0.0;
  bool touching = false;  // double point of the periodic/antiperiodic spectrum
};

struct FloquetOptions {
  int scan_points = 801;
  double root_tol = 1e-12;
  double touch_tol = 1e-8;
  OdeOptions ode;
  double x0 = 0.0;
};

double floquet_discriminant(const Potential& q, double period, double lambda, const FloquetOptions& opt = {});
// Points of [lo, hi] where |Delta| = 2 with a change of sign of |Delta| - 2, plus tangential touchings.
std::vector<FloquetEdge> floquet_band_edges(const Potential& q, double period, double lo, double hi,
                                            const FloquetOptions& opt = {});

// Half-line Weyl matrix by shooting from x0 + sign*X where Q is treated as constant.
CMatrix weyl_m_shooting(const Potential& q, Complex z, double x0, Sign s, double X, const OdeOptions& opt = {});

}  // namespace finiteband
