#pragma once

#include <vector>

#include "finiteband/linalg.hpp"

namespace finiteband {

struct Interval {
  double lo;
  double hi;  // may be +infinity for the last band
};

// Sigma = [E0,E1] u ... u [E_{2n-2},E_{2n-1}] u [E_2n, inf).
class BandStructure {
 public:
  BandStructure() = default;
  explicit BandStructure(std::vector<double> edges);

  const std::vector<double>& edges() const { return edges_; }
  int n() const { return static_cast<int>(edges_.size() - 1) / 2; }
  std::vector<Interval> bands() const;
  std::vector<Interval> gaps() const;  // open gaps (E_{2j-1}, E_{2j}), j = 1..n

  bool in_closed_spectrum(double lambda) const;
  bool in_band_interior(double lambda) const;
  int gap_index(double lambda, double tol = 0.0) const;  // 1..n for closed gap, 0 otherwise
  double distance_to_edges(double lambda) const;
  double sum_edges() const;
  double scale() const;  // 1 + max |E_l|

 private:
  std::vector<double> edges_;
};

enum class Side { Upper, Lower, Strict };

Complex eval_R(const BandStructure& b, Complex z);

// Branch of R^{1/2} ~ z^{n+1/2} at infinity, cut along the spectrum.
// Real arguments on a band use the limit from the side selected; Strict throws OnCut.
Complex sqrt_R(const BandStructure& b, Complex z, Side side = Side::Upper);

// Same branch evaluated in long double for upper-half-plane arguments.
std::complex<long double> sqrt_R_upper_ld(const BandStructure& b, std::complex<long double> z);

}  // namespace finiteband
