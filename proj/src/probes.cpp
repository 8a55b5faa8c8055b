#include "gsense/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gsense/errors.hpp"
#include "gsense/scalar_search.hpp"

namespace gsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-mode stationarity function of the product-probe allocation.
double allocation_weight(double n) { return n * n * (n + 1.0) * (n + 1.0) / (2.0 * n + 1.0); }

double invert_allocation_weight(double target) {
  if (target <= 0.0) return 0.0;
  // g(n) >= n^3 / 2, so the root is below cbrt(2 target).
  const double hi = std::max(1.0, std::cbrt(2.0 * target)) + 1.0;
  return bisect_root([target](double n) { return allocation_weight(n) - target; }, 0.0, hi);
}

}  // namespace

SymmetricBlocks SymmetricBlocks::lossy(double eta) const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("transmissivity must lie in [0, 1]");
  return {eta * gamma1 + 0.5 * (1.0 - eta), eta * gamma2 + 0.5 * (1.0 - eta), eta * eps1,
          eta * eps2, modes};
}

Matrix SymmetricBlocks::covariance() const {
  if (modes < 1) throw InvalidArgument("symmetric state needs at least one mode");
  Matrix cov = Matrix::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    for (int j = 0; j < modes; ++j) {
      cov(2 * i, 2 * j) = i == j ? gamma1 : eps1;
      cov(2 * i + 1, 2 * j + 1) = i == j ? gamma2 : eps2;
    }
  }
  return cov;
}

SymmetricParams::SymmetricParams(double gamma1, double gamma2, double eps1, double eps2,
                                 int modes, double tol)
    : b_{gamma1, gamma2, eps1, eps2, modes} {
  if (modes < 1) throw InvalidArgument("symmetric state needs at least one mode");
  if (!(gamma1 > 0.0 && gamma2 > 0.0)) throw InvalidArgument("gamma1, gamma2 must be positive");
  const double relative = (gamma1 - eps1) * (gamma2 - eps2);
  const double collective = (gamma1 + (modes - 1) * eps1) * (gamma2 + (modes - 1) * eps2);
  // Tolerances scale with the size of the factors, which carry rounding of
  // order eps * gamma at large energy.
  const double rel_scale = std::max(1.0, (gamma1 + std::abs(eps1)) * (gamma2 + std::abs(eps2)));
  const double col_scale = std::max(
      1.0, (gamma1 + (modes - 1) * std::abs(eps1)) * (gamma2 + (modes - 1) * std::abs(eps2)));
  // A single mode has no off-diagonal blocks; only the collective relation applies.
  const bool relative_ok = modes == 1 || std::abs(relative - 0.25) <= tol * rel_scale;
  if (!relative_ok || std::abs(collective - 0.25) > tol * col_scale) {
    std::ostringstream msg;
    msg << "symmetric parameters violate the purity relations (relative " << relative
        << ", collective " << collective << ", expected 0.25)";
    throw InvalidArgument(msg.str());
  }
  if (modes == 1 && (eps1 != 0.0 || eps2 != 0.0)) {
    throw InvalidArgument("single-mode symmetric state cannot have off-diagonal blocks");
  }
}

double SymmetricParams::mean_photon_number() const {
  return 0.5 * b_.modes * (b_.gamma1 + b_.gamma2 - 1.0);
}

EnergyAllocation::EnergyAllocation(std::vector<double> values, double total_energy, double tol)
    : per_mode(std::move(values)) {
  for (double n : per_mode) {
    if (!(n >= 0.0)) throw InvalidArgument("per-mode energies must be non-negative");
  }
  if (std::abs(total() - total_energy) > tol * std::max(1.0, total_energy)) {
    throw InvalidArgument("per-mode energies do not sum to the total energy");
  }
}

double EnergyAllocation::total() const {
  return std::accumulate(per_mode.begin(), per_mode.end(), 0.0);
}

GaussianState coherent_product_probe(const SensingScenario& scenario) {
  if (!(scenario.energy > 0.0)) throw InvalidArgument("coherent probe needs positive energy");
  const int m = scenario.modes;
  Vector mean = Vector::Zero(2 * m);
  for (int i = 0; i < m; ++i) {
    mean(2 * i) = std::sqrt(2.0 * scenario.energy * std::abs(scenario.weights[i]));
  }
  return GaussianState(0.5 * Matrix::Identity(2 * m, 2 * m), std::move(mean));
}

EnergyAllocation opgs_allocation(const SensingScenario& scenario) {
  const int m = scenario.modes;
  const double total = scenario.energy;
  if (!(total > 0.0)) throw InvalidArgument("product probe needs positive energy");
  if (scenario.weights.is_uniform()) {
    return EnergyAllocation(std::vector<double>(m, total / m), total);
  }
  std::vector<double> w2(m);
  for (int i = 0; i < m; ++i) w2[i] = scenario.weights[i] * scenario.weights[i];

  auto energies_at = [&](double log_lambda) {
    const double lambda = std::exp(log_lambda);
    std::vector<double> n(m);
    for (int i = 0; i < m; ++i) n[i] = invert_allocation_weight(lambda * w2[i]);
    return n;
  };
  auto excess = [&](double log_lambda) {
    const auto n = energies_at(log_lambda);
    return std::accumulate(n.begin(), n.end(), 0.0) - total;
  };
  double lo = 0.0;
  double hi = 0.0;
  int guard = 0;
  while (excess(hi) < 0.0) {
    hi += 4.0;
    if (++guard > 200) throw NumericFailure("opgs_allocation: cannot bracket multiplier");
  }
  lo = hi - 4.0;
  while (excess(lo) > 0.0) {
    lo -= 4.0;
    if (++guard > 400) throw NumericFailure("opgs_allocation: cannot bracket multiplier");
  }
  const double root = bisect_root(excess, lo, hi, 1e-15);
  auto n = energies_at(root);
  // Distribute the residual of the outer solve proportionally so the
  // constraint holds to rounding.
  const double sum = std::accumulate(n.begin(), n.end(), 0.0);
  for (double& v : n) v *= total / sum;
  return EnergyAllocation(std::move(n), total);
}

GaussianState squeezed_vacuum(double n) {
  if (!(n >= 0.0)) throw InvalidArgument("mean photon number must be non-negative");
  const double r = std::asinh(std::sqrt(n));
  return apply_symplectic(vacuum_state(1), single_mode_squeezer(r));
}

GaussianState opgs_probe(const SensingScenario& scenario) {
  const auto alloc = opgs_allocation(scenario);
  GaussianState state = squeezed_vacuum(alloc.per_mode[0]);
  for (int i = 1; i < scenario.modes; ++i) {
    state = tensor_product(state, squeezed_vacuum(alloc.per_mode[i]));
  }
  return state;
}

SymmetricParams symmetric_family(double nu, double r, int modes) {
  if (modes < 1) throw InvalidArgument("symmetric family needs at least one mode");
  if (!std::isfinite(r) || !std::isfinite(nu)) throw InvalidArgument("non-finite family parameter");
  if (nu < 0.5 - 1e-12) {
    throw InvalidArgument("reduced symplectic eigenvalue must be at least 1/2");
  }
  nu = std::max(nu, 0.5);
  const double up = std::exp(2.0 * r);
  const double down = std::exp(-2.0 * r);
  if (modes == 1) {
    if (nu - 0.5 > 1e-10) {
      throw InvalidArgument("a pure single-mode state has reduced eigenvalue 1/2");
    }
    return SymmetricParams(0.5 * up, 0.5 * down, 0.0, 0.0, 1);
  }
  const double m = modes;
  const double nu2 = 4.0 * nu * nu;
  const double a = 2.0 + nu2 * (m - 2.0) - m;
  double disc = (nu2 - 1.0) * (m * (nu2 * m - m + 4.0) - 4.0);
  if (disc < 0.0) {
    if (disc < -1e-12) {
      throw InvalidArgument("outside the pure symmetric manifold (negative discriminant)");
    }
    disc = 0.0;
  }
  const double denom = 8.0 * nu * (m - 1.0);
  const double root = std::sqrt(disc);
  return SymmetricParams(nu * up, nu * down, (a + root) / denom * up, (a - root) / denom * down,
                         modes);
}

double symmetric_family_max_r(double energy, int modes) {
  if (!(energy >= 0.0) || modes < 1) throw InvalidArgument("invalid energy or mode count");
  return 0.5 * std::acosh(2.0 * energy / modes + 1.0);
}

double symmetric_family_nu(double energy, int modes, double r) {
  return std::max(0.5, (2.0 * energy / modes + 1.0) / (2.0 * std::cosh(2.0 * r)));
}

SymmetricParams oegs_params(double energy, int modes) {
  if (!(energy > 0.0)) throw InvalidArgument("OEGS needs positive energy");
  if (modes < 1) throw InvalidArgument("OEGS needs at least one mode");
  const double k = std::sqrt(energy * (energy + 1.0));
  const double e1 = (energy + k) / modes;
  const double e2 = -energy / (energy + k) / modes;  // (N - K) / M without cancellation
  if (modes == 1) return SymmetricParams(0.5 + e1, 0.5 + e2, 0.0, 0.0, 1);
  return SymmetricParams(0.5 + e1, 0.5 + e2, e1, e2, modes);
}

GaussianState symmetric_to_state(const SymmetricBlocks& blocks) {
  const Matrix cov = blocks.covariance();
  return GaussianState(cov, Vector::Zero(cov.rows()));
}

GaussianState symmetric_to_state(const SymmetricParams& params) {
  return symmetric_to_state(params.blocks());
}

GaussianState BsnSynthesis::output() const {
  GaussianState state = input;
  for (const auto& op : ops) state = apply_symplectic(state, op);
  return state;
}

BsnSynthesis synthesize_oegs_bsn(double energy, int modes) {
  if (!(energy > 0.0)) throw InvalidArgument("BSN synthesis needs positive energy");
  if (modes < 1) throw InvalidArgument("BSN synthesis needs at least one mode");
  GaussianState input = squeezed_vacuum(energy);
  if (modes > 1) input = tensor_product(input, vacuum_state(modes - 1));
  BsnSynthesis out{std::move(input), {}, {}};
  for (int j = 1; j < modes; ++j) {
    const double theta = std::acos(1.0 / std::sqrt(static_cast<double>(modes - j + 1)));
    out.thetas.push_back(theta);
    out.ops.push_back(beam_splitter_symplectic(j - 1, j, theta, modes));
  }
  return out;
}

double reduced_entropy(double gamma1, double gamma2) {
  const double det = gamma1 * gamma2;
  if (!(det >= 0.25 - 1e-12)) {
    throw InvalidArgument("reduced state is unphysical (gamma1 * gamma2 < 1/4)");
  }
  const double n = std::sqrt(std::max(det, 0.25)) - 0.5;
  if (n <= 0.0) return 0.0;
  return n * std::log1p(1.0 / n) + std::log1p(n);
}

double reduced_entropy(const SymmetricParams& params) {
  return reduced_entropy(params.gamma1(), params.gamma2());
}

double symmetric_objective_bound(double energy, int modes, double r,
                                 SymmetricObjective objective) {
  const auto p = symmetric_family(symmetric_family_nu(energy, modes, r), r, modes);
  if (objective == SymmetricObjective::AveragePhase) {
    const double collective = modes * (p.h11() + (modes - 1) * p.h12());
    return collective > 0.0 ? 1.0 / collective : kInf;
  }
  // Every phase must be estimable; a vanishing relative eigenvalue leaves
  // the differences unidentified.
  if (modes > 1 && !(p.h11() - p.h12() > 1e-10 * (p.h11() + (modes - 1) * p.h12()))) return kInf;
  return crb_trace_symmetric(p.h11(), p.h12(), modes);
}

SymmetricOptimum optimize_symmetric(double energy, int modes, SymmetricObjective objective) {
  if (!(energy > 0.0)) throw InvalidArgument("optimization needs positive energy");
  if (modes < 1) throw InvalidArgument("optimization needs at least one mode");
  const double r_max = symmetric_family_max_r(energy, modes);

  double r = r_max;
  if (modes > 1) {
    const auto best = golden_section_minimize(
        [&](double x) { return symmetric_objective_bound(energy, modes, x, objective); }, 0.0,
        r_max, 1e-10);
    r = best.x;
  }
  const double nu = symmetric_family_nu(energy, modes, r);
  auto params = symmetric_family(nu, r, modes);
  const FisherMatrix h = qfim_pure(symmetric_to_state(params));
  const double bound = objective == SymmetricObjective::AveragePhase
                           ? crb_linear(h, WeightVector::uniform(modes))
                           : crb_trace(h);
  return {std::move(params), r, nu, bound};
}

}  // namespace gsense
