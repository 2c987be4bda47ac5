#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "finiteband/elliptic.hpp"
#include "finiteband/pencil.hpp"

namespace finiteband {

// Hermitian m x m potential with access to x-derivatives.
class Potential {
 public:
  virtual ~Potential() = default;
  virtual std::size_t dim() const = 0;
  virtual CMatrix value(double x) const { return jet(x, 0).front(); }
  // Q^{(k)}(x) for k = 0..order; order must not exceed max_jet_order().
  virtual std::vector<CMatrix> jet(double x, int order) const = 0;
  virtual int max_jet_order() const = 0;
};

class ConstantPotential final : public Potential {
 public:
  ConstantPotential(double e0, std::size_t m) : e0_(e0), m_(m) {}
  std::size_t dim() const override { return m_; }
  std::vector<CMatrix> jet(double x, int order) const override;
  int max_jet_order() const override { return 64; }

 private:
  double e0_;
  std::size_t m_;
};

struct HochstadtSpec {
  std::vector<double> bands;   // E0 < E1 < E2
  std::vector<double> alphas;  // one real shift per channel
  CMatrix U;                   // unitary m x m
};

// Q(x) = s I + 2 U diag(p(x + omega3 + alpha_j)) U^*, s = (E0+E1+E2)/3.
class HochstadtPotential final : public Potential {
 public:
  explicit HochstadtPotential(HochstadtSpec spec);
  std::size_t dim() const override { return spec_.alphas.size(); }
  std::vector<CMatrix> jet(double x, int order) const override;
  int max_jet_order() const override { return 40; }

  // Scalar channel q_j and its derivatives.
  std::vector<double> channel_jet(std::size_t j, double x, int order) const;
  double period() const { return curve_.period(); }
  const EllipticCurve& curve() const { return curve_; }
  const BandStructure& bands() const { return bands_; }
  const HochstadtSpec& spec() const { return spec_; }

 private:
  HochstadtSpec spec_;
  BandStructure bands_;
  EllipticCurve curve_;
  Weierstrass wp_;
  double shift_;
};

double hochstadt_scalar(double x, double alpha, const BandStructure& b);

// Samples on a grid; Q and its first three derivatives.
struct PotentialProfile {
  std::vector<double> xs;
  std::vector<CMatrix> Q, Qp, Qpp, Qppp;
  std::size_t dim() const { return Q.empty() ? 0 : static_cast<std::size_t>(Q.front().rows()); }
  std::size_t size() const { return xs.size(); }
};

PotentialProfile sample_profile(const Potential& q, const std::vector<double>& xs);
PotentialProfile hochstadt_matrix(const HochstadtSpec& spec, const std::vector<double>& xs);
PotentialProfile borg_potential(double e0, std::size_t m, const std::vector<double>& xs);

// Quintic Hermite interpolation of a profile (uses Q, Q', Q''); derivatives up to order 3.
class ProfilePotential final : public Potential {
 public:
  explicit ProfilePotential(PotentialProfile profile);
  std::size_t dim() const override { return profile_.dim(); }
  std::vector<CMatrix> jet(double x, int order) const override;
  int max_jet_order() const override { return 3; }
  const PotentialProfile& profile() const { return profile_; }

 private:
  PotentialProfile profile_;
};

// base(x) + amplitude cos(k x + phase) D, D Hermitian.
class PerturbedPotential final : public Potential {
 public:
  PerturbedPotential(std::shared_ptr<const Potential> base, double amplitude, double k, double phase, CMatrix direction);
  std::size_t dim() const override { return base_->dim(); }
  std::vector<CMatrix> jet(double x, int order) const override;
  int max_jet_order() const override { return base_->max_jet_order(); }

 private:
  std::shared_ptr<const Potential> base_;
  double amplitude_, k_, phase_;
  CMatrix direction_;
};

// e0 I + diag(a_j) exp(-x^2), set exactly to e0 I beyond |x| > cutoff.
class GaussianBumpPotential final : public Potential {
 public:
  GaussianBumpPotential(double e0, std::vector<double> amplitudes, double cutoff = 8.0);
  std::size_t dim() const override { return amps_.size(); }
  std::vector<CMatrix> jet(double x, int order) const override;
  int max_jet_order() const override { return 3; }
  double cutoff() const { return cutoff_; }
  double e0() const { return e0_; }

 private:
  double e0_;
  std::vector<double> amps_;
  double cutoff_;
};

// c1 = -(E0 + ... + E2n)/2.
double trace_constant_c1(const BandStructure& b);

// mu_k = -q_k/2 - c1 from the spectral decomposition of Q; gamma_k = |R(mu_k)|^{1/2} P_k.
Divisor divisor_from_Q1(const CMatrix& Q, const BandStructure& b, double tol = 1e-9);

PencilQuadruple closed_form_pencils_n0(std::size_t m, const BandStructure& b);
PencilQuadruple closed_form_pencils_n1(const CMatrix& Q, const CMatrix& Qp, const CMatrix& Qpp, const BandStructure& b);
// Dispatch on the number of gaps (0 or 1).
PencilQuadruple closed_form_pencils(const std::vector<CMatrix>& jet, const BandStructure& b);

// Haar-like unitary from a seeded complex Gaussian matrix.
CMatrix random_unitary(std::size_t m, std::uint64_t seed);

}  // namespace finiteband
