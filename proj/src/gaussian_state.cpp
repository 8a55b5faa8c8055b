#include "gsense/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsense/errors.hpp"

namespace gsense {

namespace {

void require_symmetric(const Matrix& cov, const NumericPolicy& policy) {
  if (cov.rows() != cov.cols()) throw InvalidArgument("covariance must be square");
  const double asym = max_abs(cov - cov.transpose());
  if (asym > policy.symmetry_tol * std::max(1.0, max_abs(cov))) {
    std::ostringstream msg;
    msg << "covariance is not symmetric (max asymmetry " << asym << ")";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

GaussianState::GaussianState(Matrix cov, Vector mean, const NumericPolicy& policy)
    : cov_(std::move(cov)), mean_(std::move(mean)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw InvalidArgument("mean vector must have even, non-zero length");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw InvalidArgument("covariance and mean dimensions disagree");
  }
  require_symmetric(cov_, policy);
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  const auto nu = symplectic_eigenvalues(cov_, policy);
  // Rounding in the eigenvalues grows with the size of the entries.
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if (nu.back() < 0.5 - policy.physicality_tol * scale) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "unphysical covariance: smallest symplectic eigenvalue " << nu.back() << " < 1/2";
    throw InvalidArgument(msg.str());
  }
}

SymplecticOp::SymplecticOp(Matrix s, const NumericPolicy& policy) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() == 0 || s_.rows() % 2 != 0) {
    throw InvalidArgument("symplectic matrix must be square with even dimension");
  }
  const Matrix omega = symplectic_form(modes());
  const double err = max_abs(s_ * omega * s_.transpose() - omega);
  if (err > policy.symplectic_tol) {
    std::ostringstream msg;
    msg << "matrix is not symplectic (|S Omega S^T - Omega|_max = " << err << ")";
    throw InvalidArgument(msg.str());
  }
}

SymplecticOp SymplecticOp::identity(int modes) {
  return SymplecticOp(Matrix::Identity(2 * modes, 2 * modes), Trusted{});
}

SymplecticOp operator*(const SymplecticOp& a, const SymplecticOp& b) {
  if (a.modes() != b.modes()) throw InvalidArgument("cannot compose ops on different mode counts");
  return SymplecticOp(a.s_ * b.s_, SymplecticOp::Trusted{});
}

LossChannel::LossChannel(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("transmissivity must lie in [0, 1]");
}

GaussianState vacuum_state(int modes) {
  if (modes < 1) throw InvalidArgument("vacuum_state needs at least one mode");
  return GaussianState(0.5 * Matrix::Identity(2 * modes, 2 * modes), Vector::Zero(2 * modes));
}

GaussianState thermal_state(int modes, double n_bar) {
  if (modes < 1) throw InvalidArgument("thermal_state needs at least one mode");
  if (!(n_bar >= 0.0)) throw InvalidArgument("thermal photon number must be non-negative");
  return GaussianState((n_bar + 0.5) * Matrix::Identity(2 * modes, 2 * modes),
                       Vector::Zero(2 * modes));
}

SymplecticOp phase_shift_symplectic(std::span<const double> phis) {
  const int m = static_cast<int>(phis.size());
  if (m == 0) throw InvalidArgument("phase_shift_symplectic needs at least one angle");
  Matrix s = Matrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    const double c = std::cos(phis[i]);
    const double sn = std::sin(phis[i]);
    s(2 * i, 2 * i) = c;
    s(2 * i, 2 * i + 1) = sn;
    s(2 * i + 1, 2 * i) = -sn;
    s(2 * i + 1, 2 * i + 1) = c;
  }
  return SymplecticOp(std::move(s));
}

SymplecticOp beam_splitter_symplectic(int i, int j, double theta, int modes) {
  if (i == j) throw InvalidArgument("beam splitter needs two distinct modes");
  if (i < 0 || j < 0 || i >= modes || j >= modes) {
    throw InvalidArgument("beam splitter mode index out of range");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix b = Matrix::Identity(2 * modes, 2 * modes);
  for (int q = 0; q < 2; ++q) {
    const int a = 2 * i + q;
    const int d = 2 * j + q;
    b(a, a) = c;
    b(a, d) = -s;
    b(d, a) = s;
    b(d, d) = c;
  }
  return SymplecticOp(std::move(b));
}

SymplecticOp single_mode_squeezer(double r) {
  if (!std::isfinite(r)) throw InvalidArgument("squeezing parameter must be finite");
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = std::exp(r);
  s(1, 1) = std::exp(-r);
  return SymplecticOp(std::move(s));
}

SymplecticOp embed_single_mode(const SymplecticOp& op, int mode, int modes) {
  if (op.modes() != 1) throw InvalidArgument("embed_single_mode expects a single-mode op");
  if (mode < 0 || mode >= modes) throw InvalidArgument("mode index out of range");
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  s.block<2, 2>(2 * mode, 2 * mode) = op.matrix();
  return SymplecticOp(std::move(s));
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& s) {
  if (state.modes() != s.modes()) {
    throw InvalidArgument("symplectic op and state have different mode counts");
  }
  const Matrix& m = s.matrix();
  return GaussianState(m * state.cov() * m.transpose(), m * state.mean());
}

GaussianState apply_loss(const GaussianState& state, const LossChannel& channel) {
  const double eta = channel.eta();
  const int n = 2 * state.modes();
  return GaussianState(eta * state.cov() + 0.5 * (1.0 - eta) * Matrix::Identity(n, n),
                       std::sqrt(eta) * state.mean());
}

double mean_photon_number(const GaussianState& state) {
  double total = 0.0;
  for (int i = 0; i < state.modes(); ++i) {
    const auto b = state.block(i, i);
    const auto d = state.mean_of(i);
    total += 0.5 * (b(0, 0) + b(1, 1) - 1.0) + 0.5 * d.squaredNorm();
  }
  return total;
}

double photon_number_variance(const GaussianState& state, int mode) {
  if (mode < 0 || mode >= state.modes()) throw InvalidArgument("mode index out of range");
  const Eigen::Matrix2d b = state.block(mode, mode);
  const Eigen::Vector2d d = state.mean_of(mode);
  return 0.5 * (b * b).trace() - 0.25 + d.dot(b * d);
}

std::vector<double> symplectic_eigenvalues(const Matrix& cov, const NumericPolicy& policy) {
  require_symmetric(cov, policy);
  if (cov.rows() == 0 || cov.rows() % 2 != 0) {
    throw InvalidArgument("covariance must have even, non-zero dimension");
  }
  const int m = static_cast<int>(cov.rows() / 2);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (cov + cov.transpose()));
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidArgument("covariance is not positive definite");
  }
  const Matrix root = eig.operatorSqrt();
  // A = cov^1/2 Omega cov^1/2 is antisymmetric with eigenvalues +-i nu_k, so
  // A^T A has each nu_k^2 twice.
  const Matrix a = root * symplectic_form(m) * root;
  Eigen::SelfAdjointEigenSolver<Matrix> sq(a.transpose() * a, Eigen::EigenvaluesOnly);
  std::vector<double> squares(sq.eigenvalues().data(), sq.eigenvalues().data() + 2 * m);
  std::sort(squares.begin(), squares.end(), std::greater<>());
  std::vector<double> nu(m);
  for (int k = 0; k < m; ++k) {
    nu[k] = std::sqrt(std::max(0.0, 0.5 * (squares[2 * k] + squares[2 * k + 1])));
  }
  return nu;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.cov());
}

GaussianState tensor_product(const GaussianState& a, const GaussianState& b) {
  const auto na = a.cov().rows();
  const auto nb = b.cov().rows();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  return GaussianState(std::move(cov), std::move(mean));
}

}  // namespace gsense
