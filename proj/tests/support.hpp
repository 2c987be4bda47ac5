#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "finiteband/linalg.hpp"

namespace fbtest {

using finiteband::CMatrix;
using finiteband::Complex;

inline CMatrix random_hermitian(std::size_t m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(m);
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return scale * 0.5 * (a + a.adjoint());
}

inline Complex random_disk_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) <= 1.0 && std::abs(z.imag()) > 1e-3) return radius * z;
  }
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

// Arithmetic-geometric mean; half-periods of a real curve follow from it.
inline double agm(double a, double b) {
  for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

}  // namespace fbtest
