#include "gsense/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gsense/errors.hpp"

namespace gsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Derivative of the encoded covariance with respect to phi_i at the given
/// operating point: P_i G + G P_i^T.
Matrix covariance_derivative(const Matrix& cov, int mode) {
  const Matrix p = phase_generator(mode, static_cast<int>(cov.rows() / 2));
  return p * cov + cov * p.transpose();
}

Matrix displacement_term(const GaussianState& probe) {
  const int m = probe.modes();
  Matrix h = Matrix::Zero(m, m);
  if (probe.mean().isZero(0.0)) return h;
  const Matrix inv = probe.cov().inverse();
  std::vector<Vector> dd;
  dd.reserve(m);
  for (int i = 0; i < m; ++i) dd.push_back(phase_generator(i, m) * probe.mean());
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) h(i, j) = h(j, i) = dd[i].dot(inv * dd[j]);
  }
  return h;
}

struct Support {
  Matrix inverse;
  Matrix projector;
};

Support support_of(const Matrix& h, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()));
  const Vector& lambda = eig.eigenvalues();
  const double top = lambda.maxCoeff();
  Vector inv = Vector::Zero(lambda.size());
  Vector keep = Vector::Zero(lambda.size());
  if (top > 0.0) {
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (lambda(k) > cutoff * top) {
        inv(k) = 1.0 / lambda(k);
        keep(k) = 1.0;
      }
    }
  }
  const Matrix& v = eig.eigenvectors();
  return {v * inv.asDiagonal() * v.transpose(), v * keep.asDiagonal() * v.transpose()};
}

}  // namespace

FisherMatrix::FisherMatrix(Matrix entries, const NumericPolicy& policy) : h_(std::move(entries)) {
  if (h_.rows() != h_.cols() || h_.rows() == 0) {
    throw InvalidArgument("Fisher matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, max_abs(h_));
  if (max_abs(h_ - h_.transpose()) > 1e-10 * scale) {
    throw InvalidArgument("Fisher matrix is not symmetric");
  }
  h_ = 0.5 * (h_ + h_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -policy.psd_slack * scale) {
    std::ostringstream msg;
    msg << "Fisher matrix is not positive semidefinite (min eigenvalue "
        << eig.eigenvalues().minCoeff() << ")";
    throw InvalidArgument(msg.str());
  }
}

Matrix FisherMatrix::support_inverse(double cutoff) const { return support_of(h_, cutoff).inverse; }

WeightVector::WeightVector(Vector w, double tol) : w_(std::move(w)) {
  if (w_.size() == 0) throw InvalidArgument("weight vector is empty");
  const double norm = w_.cwiseAbs().sum();
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream msg;
    msg << "weights must satisfy sum |w_i| = 1 (got " << norm << ")";
    throw InvalidArgument(msg.str());
  }
}

WeightVector WeightVector::uniform(int modes) {
  if (modes < 1) throw InvalidArgument("weight vector needs at least one mode");
  return WeightVector(Vector::Constant(modes, 1.0 / modes));
}

WeightVector WeightVector::normalized(std::span<const double> raw) {
  Vector w = Eigen::Map<const Vector>(raw.data(), static_cast<Eigen::Index>(raw.size()));
  const double norm = w.cwiseAbs().sum();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("weights are all zero");
  return WeightVector(w / norm);
}

bool WeightVector::is_uniform(double tol) const {
  const double u = 1.0 / dim();
  return (w_.array() - u).abs().maxCoeff() <= tol;
}

SensingScenario SensingScenario::average_phase(int modes, double energy, double eta) {
  if (modes < 1) throw InvalidArgument("scenario needs at least one mode");
  if (!(energy >= 0.0) || !std::isfinite(energy)) {
    throw InvalidArgument("energy must be finite and non-negative");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("transmissivity must lie in [0, 1]");
  return SensingScenario{modes, energy, WeightVector::uniform(modes), eta};
}

SensingScenario SensingScenario::from_per_mode(int modes, double per_mode_energy, double eta) {
  return average_phase(modes, modes * per_mode_energy, eta);
}

FisherMatrix qfim_pure(const GaussianState& probe, const NumericPolicy& policy) {
  const auto nu = symplectic_eigenvalues(probe.cov(), policy);
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (std::abs(nu[k] - 0.5) > policy.purity_tol) {
      std::ostringstream msg;
      msg << "qfim_pure: probe is not pure (symplectic eigenvalue #" << k << " = " << nu[k]
          << ")";
      throw PreconditionViolation(msg.str());
    }
  }
  const int m = probe.modes();
  Matrix h = displacement_term(probe);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double v = 2.0 * (probe.block(i, j) * probe.block(j, i)).trace();
      if (i == j) v -= 1.0;
      h(i, j) += v;
      if (i != j) h(j, i) += v;
    }
  }
  return FisherMatrix(std::move(h), policy);
}

FisherMatrix qfim_isothermal(const GaussianState& probe, double n_bar,
                             const NumericPolicy& policy) {
  if (!(n_bar >= 0.0)) throw InvalidArgument("isothermal photon number must be non-negative");
  const auto nu = symplectic_eigenvalues(probe.cov(), policy);
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (std::abs(nu[k] - (n_bar + 0.5)) > policy.purity_tol) {
      std::ostringstream msg;
      msg << "qfim_isothermal: symplectic eigenvalue #" << k << " = " << nu[k]
          << " differs from n_bar + 1/2 = " << n_bar + 0.5;
      throw PreconditionViolation(msg.str());
    }
  }
  const int m = probe.modes();
  const Matrix omega = symplectic_form(m);
  std::vector<Matrix> od;
  od.reserve(m);
  for (int i = 0; i < m; ++i) od.push_back(omega * covariance_derivative(probe.cov(), i));
  const double norm = 2.0 * n_bar * n_bar + 2.0 * n_bar + 1.0;
  Matrix h = displacement_term(probe);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double v = (od[i] * od[j]).trace() / norm;
      h(i, j) += v;
      if (i != j) h(j, i) += v;
    }
  }
  return FisherMatrix(std::move(h), policy);
}

FisherMatrix qfim_general(const GaussianState& probe, const NumericPolicy& policy) {
  const int m = probe.modes();
  const int n = 2 * m;
  const auto nu = symplectic_eigenvalues(probe.cov(), policy);

  Matrix cov = probe.cov();
  const bool singular = nu.back() - 0.5 < 1e-6;
  if (singular) {
    const double eps = policy.sld_regularization;
    cov = (1.0 - eps) * cov + 0.5 * eps * Matrix::Identity(n, n);
  }

  // L = 4 G (x) G - Om (x) Om acting on column-major vec(X).
  const Matrix omega = symplectic_form(m);
  Matrix l(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      l.block(a * n, b * n, n, n) = 4.0 * cov(a, b) * cov - omega(a, b) * omega;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(l);
  const Vector& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(lambda.size());
  double smallest_kept = top;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (std::abs(lambda(k)) > policy.support_cutoff * top) {
      inv(k) = 1.0 / lambda(k);
      smallest_kept = std::min(smallest_kept, std::abs(lambda(k)));
    }
  }
  const Matrix& v = eig.eigenvectors();

  std::vector<Vector> rhs(m);
  std::vector<Vector> sol(m);
  for (int i = 0; i < m; ++i) {
    const Matrix d = covariance_derivative(cov, i);
    rhs[i] = Eigen::Map<const Vector>(d.data(), d.size());
    sol[i] = v * (inv.asDiagonal() * (v.transpose() * rhs[i]));
    const double residual = (l * sol[i] - rhs[i]).norm();
    if (residual > 1e-6 * std::max(1.0, rhs[i].norm())) {
      std::ostringstream msg;
      msg << "qfim_general: SLD system inconsistent for phase " << i << " (residual " << residual
          << ", condition estimate " << top / smallest_kept << ")";
      throw NumericFailure(msg.str());
    }
  }

  Matrix h = displacement_term(probe);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double val = 2.0 * rhs[i].dot(sol[j]);
      h(i, j) += val;
      if (i != j) h(j, i) += val;
    }
  }
  return FisherMatrix(std::move(h), policy);
}

FisherMatrix qfim(const GaussianState& probe, const NumericPolicy& policy) {
  const auto nu = symplectic_eigenvalues(probe.cov(), policy);
  const auto [lo, hi] = std::minmax_element(nu.begin(), nu.end());
  if (std::abs(*hi - 0.5) <= policy.purity_tol && std::abs(*lo - 0.5) <= policy.purity_tol) {
    return qfim_pure(probe, policy);
  }
  if (*hi - *lo <= policy.purity_tol) {
    const double mean_nu = std::accumulate(nu.begin(), nu.end(), 0.0) / nu.size();
    return qfim_isothermal(probe, mean_nu - 0.5, policy);
  }
  return qfim_general(probe, policy);
}

double crb_linear(const FisherMatrix& h, const WeightVector& w) {
  if (h.dim() != w.dim()) throw InvalidArgument("weight and Fisher dimensions differ");
  const auto support = support_of(h.entries(), default_policy().support_cutoff);
  const Vector& wv = w.values();
  if ((wv - support.projector * wv).norm() > 1e-9 * wv.norm()) return kInf;
  return wv.dot(support.inverse * wv);
}

double crb_trace(const FisherMatrix& h) {
  const auto support = support_of(h.entries(), default_policy().support_cutoff);
  if (support.projector.trace() < 0.5) return kInf;
  return support.inverse.trace();
}

double crb_trace_symmetric(double h11, double h12, int modes) {
  if (modes < 1) throw InvalidArgument("modes must be positive");
  const double collective = h11 + (modes - 1) * h12;
  const double relative = h11 - h12;
  if (!(collective > 0.0)) return kInf;
  double trace = 1.0 / collective;
  if (modes > 1 && std::abs(relative) > default_policy().support_cutoff * std::abs(collective)) {
    trace += (modes - 1) / relative;
  }
  return trace;
}

double generator_variance(const GaussianState& probe, const WeightVector& w) {
  if (probe.modes() != w.dim()) throw InvalidArgument("weight and probe dimensions differ");
  const FisherMatrix h = qfim_pure(probe);
  return 0.25 * w.values().dot(h.entries() * w.values());
}

UltimateBounds ultimate_bounds(const SensingScenario& scenario) {
  const double n = scenario.energy;
  const double m = scenario.modes;
  if (!(n > 0.0)) return {kInf, kInf, kInf};
  return {1.0 / (4.0 * n), m / (8.0 * n * (n + m)), 1.0 / (8.0 * n * (n + 1.0))};
}

}  // namespace gsense
