#pragma once

#include <algorithm>
#include <vector>

#include "finiteband/linalg.hpp"

namespace finiteband {

// x-derivatives 0..order of a matrix-valued function at one point.
using Jet = std::vector<CMatrix>;

inline Jet jet_mul(const Jet& a, const Jet& b) {
  const std::size_t order = std::min(a.size(), b.size());
  Jet c;
  for (std::size_t j = 0; j < order; ++j) {
    CMatrix acc = CMatrix::Zero(a[0].rows(), b[0].cols());
    double binom = 1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      acc += binom * a[i] * b[j - i];
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
    c.push_back(acc);
  }
  return c;
}

inline Jet jet_diff(const Jet& a) { return a.empty() ? a : Jet(a.begin() + 1, a.end()); }

inline Jet jet_add(const Jet& a, const Jet& b) {
  const std::size_t order = std::min(a.size(), b.size());
  Jet c;
  for (std::size_t j = 0; j < order; ++j) c.push_back(a[j] + b[j]);
  return c;
}

inline Jet jet_scale(Complex s, const Jet& a) {
  Jet c;
  for (const auto& d : a) c.push_back(s * d);
  return c;
}

inline Jet jet_constant(const CMatrix& v, std::size_t size) {
  Jet c{v};
  for (std::size_t j = 1; j < size; ++j) c.push_back(CMatrix::Zero(v.rows(), v.cols()));
  return c;
}

}  // namespace finiteband
