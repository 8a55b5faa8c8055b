#pragma once

// Phase-space representation of multimode Gaussian states.
//
// Conventions used throughout the library:
//   * quadratures are interleaved, Q = (x1, p1, x2, p2, ..., xM, pM);
//   * the symplectic form is block diagonal with blocks [[0, 1], [-1, 0]];
//   * units are hbar-free with vacuum variance 1/2 per quadrature.

#include <span>
#include <vector>

#include "gsense/linalg.hpp"
#include "gsense/numeric_policy.hpp"

namespace gsense {

class GaussianState {
 public:
  /// Validates symmetry and physicality (all symplectic eigenvalues >= 1/2).
  /// Throws InvalidArgument on failure.
  GaussianState(Matrix cov, Vector mean, const NumericPolicy& policy = default_policy());

  int modes() const { return static_cast<int>(mean_.size() / 2); }
  const Matrix& cov() const { return cov_; }
  const Vector& mean() const { return mean_; }

  /// 2x2 covariance block between modes i and j.
  Eigen::Matrix2d block(int i, int j) const { return cov_.block<2, 2>(2 * i, 2 * j); }
  Eigen::Vector2d mean_of(int i) const { return mean_.segment<2>(2 * i); }

 private:
  Matrix cov_;
  Vector mean_;
};

class SymplecticOp {
 public:
  /// Throws InvalidArgument unless S Omega S^T = Omega within policy.symplectic_tol.
  explicit SymplecticOp(Matrix s, const NumericPolicy& policy = default_policy());

  static SymplecticOp identity(int modes);

  int modes() const { return static_cast<int>(s_.rows() / 2); }
  const Matrix& matrix() const { return s_; }

  /// Composition: (a * b) applies b first, then a.
  friend SymplecticOp operator*(const SymplecticOp& a, const SymplecticOp& b);

 private:
  struct Trusted {};
  SymplecticOp(Matrix s, Trusted) : s_(std::move(s)) {}
  Matrix s_;
};

/// Uniform pure-loss channel with transmissivity eta in [0, 1].
class LossChannel {
 public:
  explicit LossChannel(double eta);
  double eta() const { return eta_; }

 private:
  double eta_;
};

GaussianState vacuum_state(int modes);

/// Thermal state with mean photon number n_bar in every mode.
GaussianState thermal_state(int modes, double n_bar);

/// Block-diagonal rotation [[cos, sin], [-sin, cos]] per mode.
SymplecticOp phase_shift_symplectic(std::span<const double> phis);

/// exp[theta (a_i^dag a_j - a_i a_j^dag)]: x_i -> cos x_i - sin x_j,
/// x_j -> sin x_i + cos x_j, identically on the p quadratures.
SymplecticOp beam_splitter_symplectic(int i, int j, double theta, int modes);

/// diag(e^r, e^-r) on (x, p). r > 0 squeezes p.
SymplecticOp single_mode_squeezer(double r);

/// Embeds a single-mode op on `mode` of an M-mode system.
SymplecticOp embed_single_mode(const SymplecticOp& op, int mode, int modes);

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& s);

/// cov -> eta cov + (1 - eta)/2 I, mean -> sqrt(eta) mean.
GaussianState apply_loss(const GaussianState& state, const LossChannel& channel);

double mean_photon_number(const GaussianState& state);

/// Photon-number variance of mode i's reduced state.
double photon_number_variance(const GaussianState& state, int mode);

/// Symplectic spectrum, M values sorted descending. Requires a positive
/// definite covariance; throws InvalidArgument for non-symmetric input.
std::vector<double> symplectic_eigenvalues(const Matrix& cov,
                                           const NumericPolicy& policy = default_policy());
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

/// Tensor product of states (modes of `a` first).
GaussianState tensor_product(const GaussianState& a, const GaussianState& b);

}  // namespace gsense
