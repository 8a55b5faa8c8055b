#pragma once

namespace gsense {

/// Tolerances shared by every module. A single record so that tests and the
/// CLI can tighten or relax them in one place.
struct NumericPolicy {
  double symmetry_tol = 1e-12;     // |cov - cov^T|, relative to max(1, |cov|)
  double physicality_tol = 1e-10;  // symplectic eigenvalues >= 1/2 - tol
  double symplectic_tol = 1e-10;   // |S Omega S^T - Omega|_max
  double purity_tol = 1e-8;        // gate for the pure / isothermal QFIM paths
  double support_cutoff = 1e-10;   // eigenvalues below cutoff * lambda_max are zero
  double sld_regularization = 1e-9;
  double weight_norm_tol = 1e-12;
  double psd_slack = 1e-9;
};

inline const NumericPolicy& default_policy() {
  static const NumericPolicy policy{};
  return policy;
}

}  // namespace gsense
