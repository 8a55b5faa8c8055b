#pragma once

// Monte Carlo homodyne sampling and maximum-likelihood phase estimation.
//
// Random numbers come from std::mt19937_64 seeded through std::seed_seq with
// (master seed low word, high word, batch index); normal variates use
// std::normal_distribution. Output is bit-reproducible for a given seed on a
// given standard library.

#include <cstdint>
#include <vector>

#include "gsense/measurement.hpp"

namespace gsense {

struct SampleBatch {
  Matrix outcomes;  // n_shots x M
  HomodyneConfig config;
  std::uint64_t seed;

  int shots() const { return static_cast<int>(outcomes.rows()); }
};

/// Seed of batch `index` derived from a master seed.
std::uint64_t batch_seed(std::uint64_t master, std::uint64_t index);

/// n_shots i.i.d. homodyne records, mean + L z with C = L L^T (Cholesky).
SampleBatch sample_homodyne(const GaussianState& probe, const HomodyneConfig& config, int n_shots,
                            std::uint64_t seed);
SampleBatch sample_homodyne(const SymmetricBlocks& blocks, const HomodyneConfig& config,
                            int n_shots, std::uint64_t seed);

/// Mean log-likelihood per shot of the batch at phases phi, and its gradient.
struct LikelihoodEval {
  double value;
  Vector gradient;
};
LikelihoodEval homodyne_log_likelihood(const GaussianState& probe, const SampleBatch& batch,
                                       const std::vector<double>& phases);

struct MleFit {
  std::vector<double> phases;
  double phi_star;
  int iterations;
  double gradient_norm;
};

/// Maximizes the Gaussian log-likelihood over all M phases, starting from
/// `init`, then projects with w. Steps are preconditioned by the per-shot
/// Fisher matrix and backtracked until the likelihood increases. Throws
/// NumericFailure when the Fisher matrix is singular (flat likelihood) or
/// when 500 iterations pass without |grad| < 1e-9.
MleFit mle_phi_star(const SampleBatch& batch, const GaussianState& probe, const WeightVector& w,
                    const std::vector<double>& init);

/// Average outer product of per-shot score vectors at the true phases.
Matrix empirical_score_fim(const GaussianState& probe, const HomodyneConfig& config, int n_samples,
                           std::uint64_t seed);

struct EstimationReport {
  double phi_star_hat;        // mean estimate over successful batches
  double empirical_variance;  // sample variance of the estimates
  double crb_reference;       // w^T F^-1 w / shots
  int n_shots;
  int batches;
  int failures;
  double excess_kurtosis;
  double wall_time;  // seconds
};

/// Runs `batches` independent batches of `shots` shots, true phases equal to
/// config.operating_point, MLE initialized at the truth.
EstimationReport estimate_repeated(const GaussianState& probe, const HomodyneConfig& config,
                                   const WeightVector& w, int batches, int shots,
                                   std::uint64_t master_seed);

struct SaturationRow {
  int shots;
  double empirical_var;
  double crb;
  double ratio;
  double ci_low;
  double ci_high;
  bool wide_ci;
  int failures;
};

/// Lossy OEGS of the scenario measured at the common relative angle that
/// minimizes the uniform-weight homodyne bound, one row per shot count.
/// The ratio's 95% interval uses the sample kurtosis of the estimates; rows
/// whose half-width exceeds 20% of the ratio are flagged wide.
std::vector<SaturationRow> crb_saturation_study(const SensingScenario& scenario, int batches,
                                                const std::vector<int>& shot_schedule,
                                                std::uint64_t seed);

/// Probe and homodyne setting used by crb_saturation_study.
struct StudySetup {
  GaussianState probe;
  HomodyneConfig config;
};
StudySetup saturation_setup(const SensingScenario& scenario);

}  // namespace gsense
