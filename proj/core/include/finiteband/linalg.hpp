#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace finiteband {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex I_UNIT{0.0, 1.0};

// Eigenvalues within cluster tolerance share one orthogonal projection.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;   // ascending, one per cluster
  std::vector<CMatrix> projections;  // orthogonal projections, sum to identity
  std::vector<int> multiplicities;
  CMatrix eigenvectors;              // columns, ascending eigenvalue order
  std::vector<double> raw_eigenvalues;
};

struct HermEigOptions {
  double herm_tol = 1e-10;     // relative to ||A||
  double cluster_tol = 1e-10;  // relative to ||A||
  int max_sweeps = 100;
};

double frobenius_norm(const CMatrix& a);
double hermitian_defect(const CMatrix& a);  // ||A - A*||

// Cyclic Jacobi; deterministic sweep order.
SpectralDecomposition herm_eig(const CMatrix& a, const HermEigOptions& opt = {});

// f(A) = sum_k f(lambda_k) P_k for Hermitian A.
CMatrix mat_func(const CMatrix& a, const std::function<Complex(double)>& f,
                 const HermEigOptions& opt = {});
CMatrix mat_func(const SpectralDecomposition& sd, const std::function<Complex(double)>& f);

double op_norm(const CMatrix& a);  // largest singular value
double commutator_norm(const CMatrix& a, const CMatrix& b);

CMatrix hermitian_part(const CMatrix& a);   // (A + A*)/2
CMatrix imaginary_part(const CMatrix& a);   // (A - A*)/(2i)
double min_eigenvalue_hermitian(const CMatrix& a);

// Throws SingularF when the condition estimate exceeds max_cond.
CMatrix checked_inverse(const CMatrix& a, double max_cond = 1e13);

CMatrix identity(std::size_t m);

}  // namespace finiteband
