#pragma once

// Probe states for distributed phase sensing: coherent and squeezed product
// probes, the symmetric Gaussian family and its optimal member, and the
// beam-splitter network that synthesizes it from one squeezed vacuum.

#include <vector>

#include "gsense/fisher.hpp"

namespace gsense {

/// Block structure of a permutation-symmetric, zero-mean M-mode state:
/// diagonal blocks diag(gamma1, gamma2), off-diagonal blocks diag(eps1, eps2).
/// May be mixed (e.g. after loss).
struct SymmetricBlocks {
  double gamma1 = 0.5;
  double gamma2 = 0.5;
  double eps1 = 0.0;
  double eps2 = 0.0;
  int modes = 1;

  /// gamma -> eta gamma + (1 - eta)/2, eps -> eta eps.
  SymmetricBlocks lossy(double eta) const;
  Matrix covariance() const;
};

/// Pure symmetric Gaussian state. Construction enforces
///   (g1 - e1)(g2 - e2) = 1/4  and  [g1 + (M-1) e1][g2 + (M-1) e2] = 1/4.
class SymmetricParams {
 public:
  SymmetricParams(double gamma1, double gamma2, double eps1, double eps2, int modes,
                  double tol = 1e-10);

  double gamma1() const { return b_.gamma1; }
  double gamma2() const { return b_.gamma2; }
  double eps1() const { return b_.eps1; }
  double eps2() const { return b_.eps2; }
  int modes() const { return b_.modes; }
  const SymmetricBlocks& blocks() const { return b_; }

  /// M (g1 + g2 - 1) / 2.
  double mean_photon_number() const;
  /// Closed-form QFIM entries from the pure-state formula.
  double h11() const { return 2.0 * (b_.gamma1 * b_.gamma1 + b_.gamma2 * b_.gamma2) - 1.0; }
  double h12() const { return 2.0 * (b_.eps1 * b_.eps1 + b_.eps2 * b_.eps2); }

 private:
  SymmetricBlocks b_;
};

struct EnergyAllocation {
  std::vector<double> per_mode;

  /// Throws InvalidArgument for negative entries or a sum differing from total.
  EnergyAllocation(std::vector<double> per_mode, double total, double tol = 1e-10);
  double total() const;
};

/// Product of coherent states with N_i = N |w_i|, displaced along x.
GaussianState coherent_product_probe(const SensingScenario& scenario);

/// Per-mode energies of the optimal product squeezed-vacuum probe: stationary
/// point of sum_i w_i^2 / (8 N_i (N_i + 1)) under sum_i N_i = N, i.e.
///   N_i^2 (N_i + 1)^2 / (2 N_i + 1) proportional to w_i^2.
EnergyAllocation opgs_allocation(const SensingScenario& scenario);

/// Product of p-squeezed vacua carrying the opgs_allocation energies.
GaussianState opgs_probe(const SensingScenario& scenario);

/// Single-mode p-squeezed vacuum with mean photon number n (sinh^2 r = n).
GaussianState squeezed_vacuum(double n);

/// Symmetric family parametrized by the reduced-state symplectic eigenvalue
/// nu = sqrt(gamma1 gamma2) >= 1/2 and squeezing r: gamma_{1,2} = nu e^{+-2r}
/// with the positive eps branch paired to e^{+2r}.
SymmetricParams symmetric_family(double nu, double r, int modes);

/// Upper end of the family's r range at fixed energy: acosh(2N/M + 1) / 2.
double symmetric_family_max_r(double energy, int modes);

/// nu fixed by the energy constraint at given r: (2N/M + 1) / (2 cosh 2r).
double symmetric_family_nu(double energy, int modes, double r);

/// gamma_{1,2} = 1/2 + eps_{1,2},  eps_{1,2} = (N +- sqrt(N (N + 1))) / M.
SymmetricParams oegs_params(double energy, int modes);

GaussianState symmetric_to_state(const SymmetricParams& params);
GaussianState symmetric_to_state(const SymmetricBlocks& blocks);

struct BsnSynthesis {
  GaussianState input;              // p-squeezed vacuum (sinh^2 r = N) x vacuum^(M-1)
  std::vector<SymplecticOp> ops;    // in application order
  std::vector<double> thetas;       // theta_j = arccos((M - j + 1)^-1/2), j = 1..M-1

  GaussianState output() const;
};

BsnSynthesis synthesize_oegs_bsn(double energy, int modes);

/// Von Neumann entropy (nats) of one mode's reduced state diag(gamma1, gamma2).
double reduced_entropy(const SymmetricParams& params);
double reduced_entropy(double gamma1, double gamma2);

enum class SymmetricObjective { AveragePhase, Simultaneous };

struct SymmetricOptimum {
  SymmetricParams params;
  double r;
  double nu;
  double bound;
};

/// Error bound along the family at fixed energy, as a function of r. The
/// simultaneous objective is +infinity where H11 = H12.
double symmetric_objective_bound(double energy, int modes, double r, SymmetricObjective objective);

/// One-dimensional golden-section search over r in [0, max_r] with nu pinned
/// by the energy constraint. The returned bound is re-evaluated from the
/// assembled state's QFIM.
SymmetricOptimum optimize_symmetric(double energy, int modes, SymmetricObjective objective);

}  // namespace gsense
