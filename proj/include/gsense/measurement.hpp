#pragma once

// Classical Fisher information of homodyne and general-dyne measurements,
// closed-form lossy bounds and the homodyne / general-dyne crossover.

#include <optional>
#include <vector>

#include "gsense/probes.hpp"

namespace gsense {

/// Homodyne angle theta_i and true phase phi_i for every mode. The measured
/// quadrature of mode i is x cos(a_i) + p sin(a_i) of the unencoded probe,
/// with relative angle a_i = phi_i - theta_i.
struct HomodyneConfig {
  std::vector<double> angles;
  std::vector<double> operating_point;

  HomodyneConfig(std::vector<double> angles, std::vector<double> operating_point);

  /// Every relative angle equal to `relative`, operating point zero.
  static HomodyneConfig common(int modes, double relative);

  int modes() const { return static_cast<int>(angles.size()); }
  std::vector<double> relative() const;
  /// Same homodyne angles with a different true phase vector.
  HomodyneConfig at(std::vector<double> phases) const;
};

/// M x M outcome covariance u_i^T G(i,j) u_j with u_i = (cos a_i, sin a_i).
/// Throws NumericFailure when the result is not positive definite.
Matrix homodyne_covariance(const GaussianState& probe, const HomodyneConfig& config);
Matrix homodyne_covariance(const SymmetricBlocks& blocks, const HomodyneConfig& config);

/// Outcome mean u_i^T d_i.
Vector homodyne_mean(const GaussianState& probe, const HomodyneConfig& config);

/// Derivatives of the outcome covariance and mean with respect to phi_i.
struct HomodyneDerivatives {
  std::vector<Matrix> cov;
  std::vector<Vector> mean;
};
HomodyneDerivatives homodyne_derivatives(const GaussianState& probe, const HomodyneConfig& config);

/// F_ij = Tr[C^-1 dC_i C^-1 dC_j] / 2 + dm_i^T C^-1 dm_j.
FisherMatrix homodyne_fim(const GaussianState& probe, const HomodyneConfig& config);
FisherMatrix homodyne_fim(const SymmetricBlocks& blocks, const HomodyneConfig& config);

/// pi/2 - acot(2 sqrt(N (N + 1))) / 2: relative angle at which homodyne
/// detection of the lossless OEGS reaches the quantum bound.
double optimal_homodyne_angle(double energy);

/// Homodyne angles theta_i = phi_i - relative for a given operating point.
std::vector<double> homodyne_angles_for(const std::vector<double>& operating_point,
                                        double relative);

/// Common relative angle minimizing the uniform-weight homodyne bound of the
/// lossy OEGS: cos 2a = -eta K / (1/2 + eta N), K = sqrt(N (N + 1)).
double lossy_optimal_homodyne_angle(double energy, double eta);

struct AngleOptimum {
  double angle;
  double bound;
};

/// Golden-section search over a common relative angle in [0, pi/2] for the
/// uniform-weight homodyne bound of a symmetric state.
AngleOptimum optimize_common_homodyne_angle(const SymmetricBlocks& blocks);

/// Seed state of a general-dyne POVM. Must be pure.
class GaussianMeasurement {
 public:
  explicit GaussianMeasurement(Matrix cov, const NumericPolicy& policy = default_policy());

  /// OEGS-shaped seed with energy n_m; vacuum (heterodyne) when n_m = 0.
  static GaussianMeasurement symmetric_seed(double n_m, int modes);

  int modes() const { return static_cast<int>(cov_.rows() / 2); }
  const Matrix& cov() const { return cov_; }

 private:
  Matrix cov_;
};

/// F_ij = Tr[(G + G_M)^-1 dG_i (G + G_M)^-1 dG_j] / 2 + dd_i^T (G + G_M)^-1 dd_j.
FisherMatrix general_dyne_fim(const GaussianState& probe, const GaussianMeasurement& meas);

/// Uniform-weight bound of the lossy OEGS measured with symmetric_seed(n_m):
/// (2 eta n_m N - 2 eta sqrt(n_m (n_m + 1) N (N + 1)) + n_m - (eta - 2) eta N + 1)
///   / (4 eta^2 N (N + 1)).
double general_dyne_bound_closed_form(double energy, double eta, double n_m);

struct SeedOptimum {
  double n_m;
  double bound;
};

/// Golden-section search of the lossy-OEGS general-dyne bound over n_m in
/// [0, 10 N (1 + 1/eta)], evaluating general_dyne_fim directly.
SeedOptimum optimize_general_dyne_seed(int modes, double energy, double eta);

struct LossyBounds {
  double opgs_q;
  double oegs_q;
  double opgs_hd;
  double oegs_hd;
  double oegs_gd;
};

/// Closed forms for uniform loss:
///   opgs_q  = 1 / (4 N eta (2 N eta / M + eta + 1))
///   oegs_q  = 1 / (4 N eta (2 N eta + eta + 1))
///   opgs_hd = (4 N eta (1 - eta) + M) / (8 eta^2 N (N + M))
///   oegs_hd = (4 N eta (1 - eta) + 1) / (8 eta^2 N (N + 1))
///   oegs_gd = (2 N eta (1 - eta) + 1 + sqrt(1 + 4 N eta (1 - eta))) / (8 eta^2 N (N + 1))
/// All +infinity when eta = 0 or N = 0. The two quantum entries are the
/// pure-state formula evaluated on the lossy covariance; lossy_qfi_bounds
/// gives the QFI of the lossy state itself.
LossyBounds lossy_bounds(const SensingScenario& scenario);

struct LossyQfiBounds {
  double opgs_q;  // (M + 2 N eta (1 - eta)) / (8 eta^2 N (N + M))
  double oegs_q;  // (1 + 2 N eta (1 - eta)) / (8 eta^2 N (N + 1))
};
LossyQfiBounds lossy_qfi_bounds(const SensingScenario& scenario);

/// Energy above which general-dyne beats homodyne on the lossy OEGS:
/// (1 + sqrt 2) / (2 eta (1 - eta)). Throws InvalidArgument outside (0, 1).
double hd_gd_boundary(double eta);

/// Transmissivities where oegs_hd = oegs_gd at fixed N, found by bisection
/// on the difference of the closed forms. Empty below the boundary minimum.
std::vector<double> hd_gd_crossings(double energy);

struct EnhancementRatios {
  double r_opt;        // opgs_q / oegs_q from lossy_bounds
  double r_hd;         // opgs_hd / oegs_hd
  double r_opt_exact;  // same ratio from lossy_qfi_bounds
};
EnhancementRatios enhancement_ratios(const SensingScenario& scenario);

}  // namespace gsense
