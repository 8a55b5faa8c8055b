#pragma once

// QFIM of a zero-mean pure Gaussian probe from the overlap
// |<psi(0)|psi(phi)>|^2 = det(G(0) + G(phi))^-1/2, by Richardson-extrapolated
// second differences in phi. Uses only the encoding symplectic map.

#include "gsense/gaussian_state.hpp"

namespace oracle {

double pure_overlap(const gsense::Matrix& a, const gsense::Matrix& b);

gsense::Matrix qfim_from_overlap(const gsense::GaussianState& probe, double step = 2e-3);

}  // namespace oracle
