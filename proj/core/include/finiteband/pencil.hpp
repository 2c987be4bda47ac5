#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finiteband/branch_cut.hpp"
#include "finiteband/linalg.hpp"

namespace finiteband {

// P(z) = sum_k coeffs[k] z^k. An empty coefficient list is the zero polynomial.
class MatrixPencil {
 public:
  MatrixPencil() = default;
  MatrixPencil(std::size_t dim, std::vector<CMatrix> coeffs);
  static MatrixPencil zero(std::size_t dim) { return MatrixPencil(dim, {}); }

  std::size_t dim() const { return dim_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  const std::vector<CMatrix>& coeffs() const { return coeffs_; }
  const CMatrix& coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  CMatrix coeff_or_zero(int k) const;

  CMatrix operator()(Complex z) const;
  MatrixPencil adjoint_conj() const;  // z -> P(conj z)*
  bool is_self_adjoint(double tol) const;
  bool is_monic(double tol) const;

  MatrixPencil operator+(const MatrixPencil& o) const;
  MatrixPencil operator-(const MatrixPencil& o) const;
  MatrixPencil operator*(const MatrixPencil& o) const;
  MatrixPencil scaled(Complex s) const;
  MatrixPencil shifted_up() const;  // z * P(z)
  double max_coeff_norm() const;

 private:
  std::size_t dim_ = 0;
  std::vector<CMatrix> coeffs_;
};

MatrixPencil scalar_pencil(std::size_t dim, const std::vector<Complex>& coeffs);  // sum c_k z^k I

struct PencilQuadruple {
  MatrixPencil F, G1, G2, H;
  BandStructure bands;
  std::size_t dim() const { return F.dim(); }
};

enum class PencilKind { None, WeaklyHyperbolic, Hyperbolic, StronglyHyperbolic };
const char* pencil_kind_name(PencilKind k);

struct PencilClass {
  PencilKind kind = PencilKind::None;
  std::vector<Interval> root_zones;
  double max_imag_root = 0.0;
};

struct ClassifyOptions {
  int random_directions = 512;
  std::uint64_t seed = 0x5eed5eedULL;
  double tol = 1e-9;
};

// Root zones estimated from sampled unit directions plus eigenvectors of every coefficient.
PencilClass classify(const MatrixPencil& p, const ClassifyOptions& opt = {});

struct LedgerEntry {
  std::string name;
  double max_residual = 0.0;
};

struct LedgerReport {
  std::vector<LedgerEntry> entries;
  double max_residual() const;
  bool pass(double tol) const { return max_residual() <= tol; }
};

// Quadruple identities: conjugation symmetry, FG1 = G2F, HG2 = G1H, HF - G1^2 = FH - G2^2 = R I.
// Residuals are normalised by max(1, |R(z)|).
LedgerReport check_quadruple(const PencilQuadruple& q, const std::vector<Complex>& zs);

struct DivisorPoint {
  double mu = 0.0;
  int eps = 1;     // +1 or -1
  CMatrix gamma;   // residue data, Hermitian >= 0
};

using Divisor = std::vector<DivisorPoint>;

struct BuildOptions {
  double tol = 1e-8;  // relative mismatch allowed between fit and rational expression
};

// G = (sum_k eps_k Gamma_k/(z - mu_k)) F, returned as (G1, G2) with G2 = F S.
std::pair<MatrixPencil, MatrixPencil> build_G_from_F(const MatrixPencil& F, const Divisor& d,
                                                     const BuildOptions& opt = {});
// H = R F^{-1} + S F S.
MatrixPencil build_H_from_F(const MatrixPencil& F, const Divisor& d, const BandStructure& b,
                            const BuildOptions& opt = {});

// Full quadruple from F and signed divisor data.
PencilQuadruple quadruple_from_divisor(const MatrixPencil& F, const Divisor& d, const BandStructure& b,
                                       const BuildOptions& opt = {});

// Real polynomial roots via companion matrix eigenvalues; coefficients ascending.
std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs);

}  // namespace finiteband
