#include "gsense/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gsense {

Matrix symplectic_form(int modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

Matrix phase_generator(int mode, int modes) {
  Matrix g = Matrix::Zero(2 * modes, 2 * modes);
  g(2 * mode, 2 * mode + 1) = 1.0;
  g(2 * mode + 1, 2 * mode) = -1.0;
  return g;
}

Matrix symmetric_pseudo_inverse(const Matrix& a, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()));
  const Vector& lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(lambda.size());
  if (scale > 0.0) {
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (std::abs(lambda(k)) > cutoff * scale) inv(k) = 1.0 / lambda(k);
    }
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace gsense
