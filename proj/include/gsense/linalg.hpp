#pragma once

#include <Eigen/Dense>

namespace gsense {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symplectic form for M modes in interleaved (x1, p1, ..., xM, pM) ordering:
/// block diagonal with [[0, 1], [-1, 0]].
Matrix symplectic_form(int modes);

/// Generator of the phase shift on `mode`: the derivative of the rotation
/// block at zero angle, embedded in the full 2M x 2M space.
Matrix phase_generator(int mode, int modes);

/// Moore-Penrose inverse of a symmetric matrix. Eigenvalues with magnitude
/// below `cutoff * max|eigenvalue|` are treated as zero.
Matrix symmetric_pseudo_inverse(const Matrix& a, double cutoff);

/// Largest absolute entry, or 0 for an empty matrix.
double max_abs(const Matrix& a);

}  // namespace gsense
