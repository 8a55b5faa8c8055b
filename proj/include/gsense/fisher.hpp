#pragma once

// Quantum Fisher information for the distributed phase map
// U(phi) = exp(-i sum_j phi_j n_j), and the Cramer-Rao bounds built on it.

#include <span>
#include <vector>

#include "gsense/gaussian_state.hpp"

namespace gsense {

/// Symmetric positive-semidefinite M x M matrix (quantum or classical FIM).
class FisherMatrix {
 public:
  explicit FisherMatrix(Matrix entries, const NumericPolicy& policy = default_policy());

  int dim() const { return static_cast<int>(h_.rows()); }
  const Matrix& entries() const { return h_; }
  double operator()(int i, int j) const { return h_(i, j); }

  /// Inverse on the support: eigenvalues below cutoff * lambda_max count as zero.
  Matrix support_inverse(double cutoff = default_policy().support_cutoff) const;

 private:
  Matrix h_;
};

/// Weights of phi* = w^T phi, normalized so that sum |w_i| = 1.
class WeightVector {
 public:
  /// Throws InvalidArgument if sum |w_i| differs from 1 by more than tol.
  explicit WeightVector(Vector w, double tol = default_policy().weight_norm_tol);

  static WeightVector uniform(int modes);
  /// Rescales arbitrary non-zero weights to unit l1 norm.
  static WeightVector normalized(std::span<const double> raw);

  int dim() const { return static_cast<int>(w_.size()); }
  const Vector& values() const { return w_; }
  double operator[](int i) const { return w_(i); }
  bool is_uniform(double tol = 1e-12) const;

 private:
  Vector w_;
};

struct SensingScenario {
  int modes = 1;
  double energy = 0.0;  // total mean photon number N
  WeightVector weights = WeightVector::uniform(1);
  double eta = 1.0;

  double per_mode_energy() const { return energy / modes; }

  /// Uniform weights; validates modes >= 1, energy >= 0 and eta in [0, 1].
  static SensingScenario average_phase(int modes, double energy, double eta = 1.0);
  static SensingScenario from_per_mode(int modes, double per_mode_energy, double eta = 1.0);
};

/// QFIM of a pure probe:
///   H_ij = 2 Tr[G(i,j) G(j,i)] - delta_ij + (Om d_i)^T [G^-1](i,j) (Om d_j)
/// Throws PreconditionViolation if any symplectic eigenvalue differs from 1/2
/// by more than policy.purity_tol.
FisherMatrix qfim_pure(const GaussianState& probe, const NumericPolicy& policy = default_policy());

/// QFIM of an isothermal probe (every symplectic eigenvalue equal to n_bar + 1/2):
///   H_ij = Tr[Om dG_i Om dG_j] / (2 n^2 + 2 n + 1) + dd_i^T G^-1 dd_j
FisherMatrix qfim_isothermal(const GaussianState& probe, double n_bar,
                             const NumericPolicy& policy = default_policy());

/// QFIM of an arbitrary Gaussian probe from the phase-space SLD equation
///   4 G X G + Om X Om = dG_i,   H_ij = 2 Tr[dG_i X_j] + dd_i^T G^-1 dd_j.
/// When the system is singular (pure modes in the Williamson decomposition)
/// the covariance is blended with vacuum by policy.sld_regularization first.
FisherMatrix qfim_general(const GaussianState& probe,
                          const NumericPolicy& policy = default_policy());

/// Dispatches to the pure, isothermal or general route.
FisherMatrix qfim(const GaussianState& probe, const NumericPolicy& policy = default_policy());

/// w^T H^+ w, or +infinity when w leaves the support of H.
double crb_linear(const FisherMatrix& h, const WeightVector& w);

/// Tr[H^+], the simultaneous-estimation bound.
double crb_trace(const FisherMatrix& h);

/// Tr[H^-1] for H = (H11 - H12) I + H12 J via its two eigenvalues; the
/// (M - 1)-fold eigenvalue H11 - H12 is dropped when it vanishes.
double crb_trace_symmetric(double h11, double h12, int modes);

/// Variance of the generator G* = sum_i w_i n_i, evaluated as w^T H w / 4.
double generator_variance(const GaussianState& probe, const WeightVector& w);

struct UltimateBounds {
  double sql;   // 1 / (4N)
  double opgs;  // M / (8N(N + M))
  double oegs;  // 1 / (8N(N + 1))
};

/// Lossless average-phase bounds; all +infinity when N = 0.
UltimateBounds ultimate_bounds(const SensingScenario& scenario);

}  // namespace gsense
