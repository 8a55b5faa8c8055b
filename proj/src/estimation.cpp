#include "gsense/estimation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "gsense/errors.hpp"

namespace gsense {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kGradientTol = 1e-9;

class GaussianSampler {
 public:
  GaussianSampler(Vector mean, const Matrix& cov, std::uint64_t seed)
      : mean_(std::move(mean)), rng_(seed) {
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw NumericFailure("sample_homodyne: Cholesky factorization of the outcome covariance failed");
    }
    l_ = llt.matrixL();
  }

  Vector draw() {
    Vector z(mean_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal_(rng_);
    return mean_ + l_ * z;
  }

 private:
  Vector mean_;
  Matrix l_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

// Sufficient statistics of a batch: sample mean and raw second moment.
struct Moments {
  Vector mean;
  Matrix second;
};

Moments moments_of(const Matrix& x) {
  const double n = static_cast<double>(x.rows());
  Moments m;
  m.mean = x.colwise().sum().transpose() / n;
  m.second = x.transpose() * x / n;
  return m;
}

LikelihoodEval evaluate(const GaussianState& probe, const HomodyneConfig& config,
                        const Moments& mom) {
  const Matrix c = homodyne_covariance(probe, config);
  const Vector mu = homodyne_mean(probe, config);
  const auto d = homodyne_derivatives(probe, config);
  Eigen::LLT<Matrix> llt(c);
  if (llt.info() != Eigen::Success) throw NumericFailure("likelihood: covariance not positive definite");
  const int m = static_cast<int>(c.rows());
  const Matrix s = mom.second - mom.mean * mu.transpose() - mu * mom.mean.transpose() +
                   mu * mu.transpose();
  const Matrix cinv_s = llt.solve(s);
  const Vector cinv_r = llt.solve(mom.mean - mu);
  const Matrix lower = llt.matrixL();
  const double logdet = 2.0 * lower.diagonal().array().log().sum();

  LikelihoodEval out;
  out.value = -0.5 * logdet - 0.5 * m * std::log(2.0 * std::numbers::pi) - 0.5 * cinv_s.trace();
  out.gradient.resize(m);
  for (int i = 0; i < m; ++i) {
    const Matrix a = llt.solve(d.cov[i]);
    out.gradient(i) = -0.5 * a.trace() + 0.5 * (a * cinv_s).trace() + d.mean[i].dot(cinv_r);
  }
  return out;
}

// Negative Hessian of the mean log-likelihood by central differences of the
// analytic gradient.
Matrix observed_information(const GaussianState& probe, const HomodyneConfig& config,
                            const Moments& mom, const std::vector<double>& phi) {
  constexpr double h = 1e-6;
  const int m = static_cast<int>(phi.size());
  Matrix out(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> up = phi;
    std::vector<double> down = phi;
    up[j] += h;
    down[j] -= h;
    out.col(j) = -(evaluate(probe, config.at(up), mom).gradient -
                   evaluate(probe, config.at(down), mom).gradient) /
                 (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

double weighted_sum(const WeightVector& w, const std::vector<double>& phases) {
  double s = 0.0;
  for (int i = 0; i < w.dim(); ++i) s += w[i] * phases[i];
  return s;
}

}  // namespace

std::uint64_t batch_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

SampleBatch sample_homodyne(const GaussianState& probe, const HomodyneConfig& config, int n_shots,
                            std::uint64_t seed) {
  if (n_shots < 1) throw InvalidArgument("n_shots must be at least 1");
  GaussianSampler sampler(homodyne_mean(probe, config), homodyne_covariance(probe, config), seed);
  Matrix x(n_shots, probe.modes());
  for (int k = 0; k < n_shots; ++k) x.row(k) = sampler.draw().transpose();
  return {std::move(x), config, seed};
}

SampleBatch sample_homodyne(const SymmetricBlocks& blocks, const HomodyneConfig& config,
                            int n_shots, std::uint64_t seed) {
  return sample_homodyne(symmetric_to_state(blocks), config, n_shots, seed);
}

LikelihoodEval homodyne_log_likelihood(const GaussianState& probe, const SampleBatch& batch,
                                       const std::vector<double>& phases) {
  return evaluate(probe, batch.config.at(phases), moments_of(batch.outcomes));
}

MleFit mle_phi_star(const SampleBatch& batch, const GaussianState& probe, const WeightVector& w,
                    const std::vector<double>& init) {
  const int m = probe.modes();
  if (w.dim() != m || static_cast<int>(init.size()) != m || batch.config.modes() != m) {
    throw InvalidArgument("mle_phi_star: dimension mismatch between batch, probe, weights and init");
  }
  const Moments mom = moments_of(batch.outcomes);
  std::vector<double> phi = init;
  LikelihoodEval cur = evaluate(probe, batch.config.at(phi), mom);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double gnorm = cur.gradient.norm();
    // Checked before convergence: a flat likelihood has an exactly zero gradient.
    const Matrix f = homodyne_fim(probe, batch.config.at(phi)).entries();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(f);
    const double top = eig.eigenvalues().maxCoeff();
    if (!(top > 1e-300) || eig.eigenvalues().minCoeff() <= 1e-12 * top) {
      std::ostringstream msg;
      msg << "mle_phi_star: Fisher matrix is singular at the current phases (flat likelihood, "
          << "|grad| = " << gnorm << ")";
      throw NumericFailure(msg.str());
    }
    if (gnorm < kGradientTol) return {phi, weighted_sum(w, phi), iter, gnorm};

    // Newton step on the observed information when it is positive definite,
    // Fisher scoring otherwise.
    Vector step = eig.eigenvectors() * (eig.eigenvalues().cwiseInverse().asDiagonal() *
                                        (eig.eigenvectors().transpose() * cur.gradient));
    const Matrix observed = observed_information(probe, batch.config, mom, phi);
    Eigen::LLT<Matrix> newton(observed);
    if (newton.info() == Eigen::Success) step = newton.solve(cur.gradient);

    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(cur.value);
    double t = 1.0;
    bool moved = false;
    while (t > 1e-12) {
      std::vector<double> trial = phi;
      for (int i = 0; i < m; ++i) trial[i] += t * step(i);
      const LikelihoodEval next = evaluate(probe, batch.config.at(trial), mom);
      if (std::isfinite(next.value) && next.value >= cur.value - slack) {
        phi = std::move(trial);
        cur = next;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      std::ostringstream msg;
      msg << "mle_phi_star: line search stalled at |grad| = " << gnorm;
      throw NumericFailure(msg.str());
    }
  }
  std::ostringstream msg;
  msg << "mle_phi_star: no convergence after " << kMaxIterations
      << " iterations, |grad| = " << cur.gradient.norm();
  throw NumericFailure(msg.str());
}

Matrix empirical_score_fim(const GaussianState& probe, const HomodyneConfig& config, int n_samples,
                           std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("n_samples must be at least 1");
  const Matrix c = homodyne_covariance(probe, config);
  const Vector mu = homodyne_mean(probe, config);
  const auto d = homodyne_derivatives(probe, config);
  Eigen::LLT<Matrix> llt(c);
  const int m = probe.modes();
  std::vector<Matrix> a(m);
  std::vector<Vector> b(m);
  Vector offset(m);
  for (int i = 0; i < m; ++i) {
    const Matrix ci_dc = llt.solve(d.cov[i]);
    a[i] = llt.solve(ci_dc.transpose());
    b[i] = llt.solve(d.mean[i]);
    offset(i) = -0.5 * ci_dc.trace();
  }
  GaussianSampler sampler(mu, c, seed);
  Matrix acc = Matrix::Zero(m, m);
  Vector score(m);
  for (int k = 0; k < n_samples; ++k) {
    const Vector r = sampler.draw() - mu;
    for (int i = 0; i < m; ++i) score(i) = offset(i) + 0.5 * r.dot(a[i] * r) + b[i].dot(r);
    acc.noalias() += score * score.transpose();
  }
  return acc / n_samples;
}

EstimationReport estimate_repeated(const GaussianState& probe, const HomodyneConfig& config,
                                   const WeightVector& w, int batches, int shots,
                                   std::uint64_t master_seed) {
  if (batches < 2) throw InvalidArgument("need at least two batches");
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const double truth = weighted_sum(w, config.operating_point);
  std::vector<double> est;
  est.reserve(batches);
  int failures = 0;
  for (int b = 0; b < batches; ++b) {
    const auto batch = sample_homodyne(probe, config, shots, batch_seed(master_seed, b));
    try {
      est.push_back(mle_phi_star(batch, probe, w, config.operating_point).phi_star - truth);
    } catch (const NumericFailure&) {
      ++failures;
    }
  }
  if (est.size() < 2) {
    std::ostringstream msg;
    msg << "estimate_repeated: only " << est.size() << " of " << batches
        << " batches produced an estimate";
    throw NumericFailure(msg.str());
  }
  const double n = static_cast<double>(est.size());
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double e : est) {
    const double d2 = (e - mean) * (e - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double variance = m2 / (n - 1.0);
  const double kurt = m2 > 0.0 ? n * m4 / (m2 * m2) - 3.0 : 0.0;
  const double crb = crb_linear(homodyne_fim(probe, config), w) / shots;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {truth + mean, variance, crb, shots, batches, failures, kurt, elapsed.count()};
}

StudySetup saturation_setup(const SensingScenario& scenario) {
  if (!(scenario.energy > 0.0)) throw InvalidArgument("saturation study needs positive energy");
  if (!(scenario.eta > 0.0)) throw InvalidArgument("saturation study needs eta > 0");
  const auto blocks = oegs_params(scenario.energy, scenario.modes).blocks().lossy(scenario.eta);
  const double angle = scenario.eta == 1.0
                           ? optimal_homodyne_angle(scenario.energy)
                           : lossy_optimal_homodyne_angle(scenario.energy, scenario.eta);
  return {symmetric_to_state(blocks), HomodyneConfig::common(scenario.modes, angle)};
}

std::vector<SaturationRow> crb_saturation_study(const SensingScenario& scenario, int batches,
                                                const std::vector<int>& shot_schedule,
                                                std::uint64_t seed) {
  if (shot_schedule.empty()) throw InvalidArgument("shot schedule is empty");
  const auto setup = saturation_setup(scenario);
  std::vector<SaturationRow> rows;
  rows.reserve(shot_schedule.size());
  for (std::size_t k = 0; k < shot_schedule.size(); ++k) {
    const int shots = shot_schedule[k];
    const auto rep = estimate_repeated(setup.probe, setup.config, scenario.weights, batches, shots,
                                       batch_seed(seed, k));
    const double ratio = rep.empirical_variance / rep.crb_reference;
    const double n = static_cast<double>(rep.batches - rep.failures);
    const double half = 1.96 * std::sqrt(std::max(rep.excess_kurtosis + 2.0, 0.0) / n);
    rows.push_back({shots, rep.empirical_variance, rep.crb_reference, ratio,
                    std::max(0.0, ratio * (1.0 - half)), ratio * (1.0 + half), half > 0.2,
                    rep.failures});
  }
  return rows;
}

}  // namespace gsense
