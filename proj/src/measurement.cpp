#include "gsense/measurement.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gsense/errors.hpp"
#include "gsense/scalar_search.hpp"

namespace gsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Vector2d direction(double a) { return {std::cos(a), std::sin(a)}; }
Eigen::Vector2d direction_derivative(double a) { return {-std::sin(a), std::cos(a)}; }

void require_modes(const GaussianState& probe, const HomodyneConfig& config) {
  if (probe.modes() != config.modes()) {
    throw InvalidArgument("homodyne config and probe have different mode counts");
  }
}

Eigen::LLT<Matrix> factor_outcome_covariance(const Matrix& c, const char* what) {
  Eigen::LLT<Matrix> llt(c);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << what << ": outcome covariance is not positive definite";
    throw NumericFailure(msg.str());
  }
  return llt;
}

// 1/2 Tr[C^-1 dC_i C^-1 dC_j] + dm_i^T C^-1 dm_j from precomputed derivatives.
Matrix gaussian_fim(const Matrix& c, const std::vector<Matrix>& dc, const std::vector<Vector>& dm,
                    const char* what) {
  const auto llt = factor_outcome_covariance(c, what);
  const int k = static_cast<int>(dc.size());
  std::vector<Matrix> a(k);
  std::vector<Vector> b(k);
  for (int i = 0; i < k; ++i) {
    a[i] = llt.solve(dc[i]);
    b[i] = llt.solve(dm[i]);
  }
  Matrix f(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      f(i, j) = f(j, i) = 0.5 * (a[i] * a[j]).trace() + dm[i].dot(b[j]);
    }
  }
  return f;
}

}  // namespace

HomodyneConfig::HomodyneConfig(std::vector<double> a, std::vector<double> phi)
    : angles(std::move(a)), operating_point(std::move(phi)) {
  if (angles.empty()) throw InvalidArgument("homodyne config needs at least one mode");
  if (angles.size() != operating_point.size()) {
    throw InvalidArgument("homodyne angles and operating point differ in length");
  }
}

HomodyneConfig HomodyneConfig::common(int modes, double relative) {
  if (modes < 1) throw InvalidArgument("homodyne config needs at least one mode");
  return HomodyneConfig(std::vector<double>(modes, -relative), std::vector<double>(modes, 0.0));
}

std::vector<double> HomodyneConfig::relative() const {
  std::vector<double> out(angles.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = operating_point[i] - angles[i];
  return out;
}

HomodyneConfig HomodyneConfig::at(std::vector<double> phases) const {
  return HomodyneConfig(angles, std::move(phases));
}

Matrix homodyne_covariance(const GaussianState& probe, const HomodyneConfig& config) {
  require_modes(probe, config);
  const int m = probe.modes();
  const auto rel = config.relative();
  Matrix c(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      c(i, j) = c(j, i) = direction(rel[i]).dot(probe.block(i, j) * direction(rel[j]));
    }
  }
  factor_outcome_covariance(c, "homodyne_covariance");
  return c;
}

Matrix homodyne_covariance(const SymmetricBlocks& blocks, const HomodyneConfig& config) {
  if (blocks.modes != config.modes()) {
    throw InvalidArgument("homodyne config and probe have different mode counts");
  }
  const int m = blocks.modes;
  const auto rel = config.relative();
  Matrix c(m, m);
  for (int i = 0; i < m; ++i) {
    const double ci = std::cos(rel[i]);
    const double si = std::sin(rel[i]);
    for (int j = 0; j < m; ++j) {
      const double cj = std::cos(rel[j]);
      const double sj = std::sin(rel[j]);
      c(i, j) = i == j ? blocks.gamma1 * ci * ci + blocks.gamma2 * si * si
                       : blocks.eps1 * ci * cj + blocks.eps2 * si * sj;
    }
  }
  factor_outcome_covariance(c, "homodyne_covariance");
  return c;
}

Vector homodyne_mean(const GaussianState& probe, const HomodyneConfig& config) {
  require_modes(probe, config);
  const auto rel = config.relative();
  Vector mu(probe.modes());
  for (int i = 0; i < probe.modes(); ++i) mu(i) = direction(rel[i]).dot(probe.mean_of(i));
  return mu;
}

HomodyneDerivatives homodyne_derivatives(const GaussianState& probe,
                                         const HomodyneConfig& config) {
  require_modes(probe, config);
  const int m = probe.modes();
  const auto rel = config.relative();
  HomodyneDerivatives out;
  out.cov.assign(m, Matrix::Zero(m, m));
  out.mean.assign(m, Vector::Zero(m));
  for (int k = 0; k < m; ++k) {
    const Eigen::Vector2d du = direction_derivative(rel[k]);
    Matrix& d = out.cov[k];
    for (int j = 0; j < m; ++j) {
      const double v = du.dot(probe.block(k, j) * direction(rel[j]));
      if (j == k) {
        d(k, k) = 2.0 * v;
      } else {
        d(k, j) = d(j, k) = v;
      }
    }
    out.mean[k](k) = du.dot(probe.mean_of(k));
  }
  return out;
}

FisherMatrix homodyne_fim(const GaussianState& probe, const HomodyneConfig& config) {
  const Matrix c = homodyne_covariance(probe, config);
  const auto d = homodyne_derivatives(probe, config);
  return FisherMatrix(gaussian_fim(c, d.cov, d.mean, "homodyne_fim"));
}

FisherMatrix homodyne_fim(const SymmetricBlocks& blocks, const HomodyneConfig& config) {
  return homodyne_fim(symmetric_to_state(blocks), config);
}

double optimal_homodyne_angle(double energy) {
  if (!(energy > 0.0)) throw InvalidArgument("optimal homodyne angle needs positive energy");
  const double k = std::sqrt(energy * (energy + 1.0));
  // acot(x) = atan(1/x) for x > 0
  return 0.5 * std::numbers::pi - 0.5 * std::atan(1.0 / (2.0 * k));
}

std::vector<double> homodyne_angles_for(const std::vector<double>& operating_point,
                                        double relative) {
  std::vector<double> out(operating_point.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = operating_point[i] - relative;
  return out;
}

double lossy_optimal_homodyne_angle(double energy, double eta) {
  if (!(energy > 0.0)) throw InvalidArgument("homodyne angle needs positive energy");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("transmissivity must lie in (0, 1]");
  const double k = std::sqrt(energy * (energy + 1.0));
  return 0.5 * std::acos(-eta * k / (0.5 + eta * energy));
}

AngleOptimum optimize_common_homodyne_angle(const SymmetricBlocks& blocks) {
  const GaussianState probe = symmetric_to_state(blocks);
  const auto w = WeightVector::uniform(blocks.modes);
  const auto best = golden_section_minimize(
      [&](double a) {
        return crb_linear(homodyne_fim(probe, HomodyneConfig::common(blocks.modes, a)), w);
      },
      0.0, 0.5 * std::numbers::pi, 1e-12);
  return {best.x, best.value};
}

GaussianMeasurement::GaussianMeasurement(Matrix cov, const NumericPolicy& policy)
    : cov_(std::move(cov)) {
  const GaussianState seed(cov_, Vector::Zero(cov_.rows()), policy);
  for (double nu : symplectic_eigenvalues(seed.cov(), policy)) {
    if (std::abs(nu - 0.5) > policy.purity_tol) {
      std::ostringstream msg;
      msg << "measurement seed must be pure (symplectic eigenvalue " << nu << ")";
      throw InvalidArgument(msg.str());
    }
  }
  cov_ = seed.cov();
}

GaussianMeasurement GaussianMeasurement::symmetric_seed(double n_m, int modes) {
  if (!(n_m >= 0.0) || !std::isfinite(n_m)) {
    throw InvalidArgument("seed energy must be finite and non-negative");
  }
  if (modes < 1) throw InvalidArgument("seed needs at least one mode");
  if (n_m == 0.0) return GaussianMeasurement(0.5 * Matrix::Identity(2 * modes, 2 * modes));
  return GaussianMeasurement(oegs_params(n_m, modes).blocks().covariance());
}

FisherMatrix general_dyne_fim(const GaussianState& probe, const GaussianMeasurement& meas) {
  if (probe.modes() != meas.modes()) {
    throw InvalidArgument("measurement and probe have different mode counts");
  }
  const int m = probe.modes();
  std::vector<Matrix> dg(m);
  std::vector<Vector> dd(m);
  for (int i = 0; i < m; ++i) {
    const Matrix p = phase_generator(i, m);
    dg[i] = p * probe.cov() + probe.cov() * p.transpose();
    dd[i] = p * probe.mean();
  }
  return FisherMatrix(gaussian_fim(probe.cov() + meas.cov(), dg, dd, "general_dyne_fim"));
}

double general_dyne_bound_closed_form(double energy, double eta, double n_m) {
  if (!(energy > 0.0) || !(eta > 0.0 && eta <= 1.0) || !(n_m >= 0.0)) {
    throw InvalidArgument("general-dyne closed form needs N > 0, eta in (0, 1], n_m >= 0");
  }
  const double n = energy;
  const double num = 2.0 * eta * n_m * n - 2.0 * eta * std::sqrt(n_m * (n_m + 1.0) * n * (n + 1.0)) +
                     n_m - (eta - 2.0) * eta * n + 1.0;
  return num / (4.0 * eta * eta * n * (n + 1.0));
}

SeedOptimum optimize_general_dyne_seed(int modes, double energy, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("transmissivity must lie in (0, 1]");
  const GaussianState probe = symmetric_to_state(oegs_params(energy, modes).blocks().lossy(eta));
  const auto w = WeightVector::uniform(modes);
  const double hi = 10.0 * energy * (1.0 + 1.0 / eta);
  const auto best = golden_section_minimize(
      [&](double n_m) {
        return crb_linear(general_dyne_fim(probe, GaussianMeasurement::symmetric_seed(n_m, modes)),
                          w);
      },
      0.0, hi, 1e-10);
  return {best.x, best.value};
}

LossyBounds lossy_bounds(const SensingScenario& scenario) {
  const double n = scenario.energy;
  const double eta = scenario.eta;
  const double m = scenario.modes;
  if (!(n > 0.0) || !(eta > 0.0)) return {kInf, kInf, kInf, kInf, kInf};
  const double loss = n * eta * (1.0 - eta);
  const double e2 = eta * eta;
  return {
      1.0 / (4.0 * n * eta * (2.0 * n * eta / m + eta + 1.0)),
      1.0 / (4.0 * n * eta * (2.0 * n * eta + eta + 1.0)),
      (4.0 * loss + m) / (8.0 * e2 * n * (n + m)),
      (4.0 * loss + 1.0) / (8.0 * e2 * n * (n + 1.0)),
      (2.0 * loss + 1.0 + std::sqrt(1.0 + 4.0 * loss)) / (8.0 * e2 * n * (n + 1.0)),
  };
}

LossyQfiBounds lossy_qfi_bounds(const SensingScenario& scenario) {
  const double n = scenario.energy;
  const double eta = scenario.eta;
  const double m = scenario.modes;
  if (!(n > 0.0) || !(eta > 0.0)) return {kInf, kInf};
  const double loss = n * eta * (1.0 - eta);
  const double e2 = eta * eta;
  return {(m + 2.0 * loss) / (8.0 * e2 * n * (n + m)),
          (1.0 + 2.0 * loss) / (8.0 * e2 * n * (n + 1.0))};
}

double hd_gd_boundary(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("boundary needs eta strictly inside (0, 1)");
  return (1.0 + std::numbers::sqrt2) / (2.0 * eta * (1.0 - eta));
}

std::vector<double> hd_gd_crossings(double energy) {
  if (!(energy > 0.0)) throw InvalidArgument("crossings need positive energy");
  auto diff = [energy](double eta) {
    const auto b = lossy_bounds(SensingScenario::average_phase(1, energy, eta));
    return b.oegs_hd - b.oegs_gd;
  };
  const double mid = diff(0.5);
  if (mid < 0.0) return {};
  if (mid == 0.0) return {0.5};
  const double lo = 1e-3 * (1.0 + std::numbers::sqrt2) / (2.0 * energy);
  return {bisect_root(diff, lo, 0.5), bisect_root(diff, 0.5, 1.0 - lo)};
}

EnhancementRatios enhancement_ratios(const SensingScenario& scenario) {
  if (!(scenario.energy > 0.0) || !(scenario.eta > 0.0)) {
    throw InvalidArgument("enhancement ratios need N > 0 and eta > 0");
  }
  const auto b = lossy_bounds(scenario);
  const auto q = lossy_qfi_bounds(scenario);
  return {b.opgs_q / b.oegs_q, b.opgs_hd / b.oegs_hd, q.opgs_q / q.oegs_q};
}

}  // namespace gsense
