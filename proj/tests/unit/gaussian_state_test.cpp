#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gsense/errors.hpp"
#include "gsense/gaussian_state.hpp"
#include "gsense/linalg.hpp"

using namespace gsense;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

GaussianState squeezed(double r) {
  return apply_symplectic(vacuum_state(1), single_mode_squeezer(r));
}

}  // namespace

TEST(Vacuum, CovarianceIsHalfIdentity) {
  const auto v1 = vacuum_state(1);
  EXPECT_EQ(v1.cov(), 0.5 * Matrix::Identity(2, 2));
  EXPECT_TRUE(v1.mean().isZero(0.0));
  const auto v3 = vacuum_state(3);
  EXPECT_EQ(v3.cov(), 0.5 * Matrix::Identity(6, 6));
  for (double nu : symplectic_eigenvalues(v3)) EXPECT_NEAR(nu, 0.5, 1e-14);
}

TEST(Vacuum, ZeroModesRejected) { EXPECT_THROW(vacuum_state(0), InvalidArgument); }

TEST(GaussianStateValidation, RejectsUnphysicalCovariance) {
  EXPECT_THROW(GaussianState(0.4 * Matrix::Identity(2, 2), Vector::Zero(2)), InvalidArgument);
}

TEST(GaussianStateValidation, RejectsAsymmetricCovariance) {
  Matrix c = Matrix::Identity(2, 2);
  c(0, 1) = 0.1;
  EXPECT_THROW(GaussianState(c, Vector::Zero(2)), InvalidArgument);
}

TEST(GaussianStateValidation, RejectsOddOrMismatchedDimensions) {
  EXPECT_THROW(GaussianState(Matrix::Identity(3, 3), Vector::Zero(3)), InvalidArgument);
  EXPECT_THROW(GaussianState(Matrix::Identity(2, 2), Vector::Zero(4)), InvalidArgument);
}

TEST(GaussianStateValidation, AcceptsEigenvalueJustBelowHalfWithinTolerance) {
  EXPECT_NO_THROW(GaussianState((0.5 - 1e-12) * Matrix::Identity(2, 2), Vector::Zero(2)));
}

TEST(PhaseShift, ZeroAnglesGiveIdentity) {
  const std::vector<double> phis(3, 0.0);
  EXPECT_EQ(phase_shift_symplectic(phis).matrix(), Matrix::Identity(6, 6));
}

TEST(PhaseShift, QuarterTurnOnOneMode) {
  const std::vector<double> phis{std::numbers::pi / 2};
  const Matrix s = phase_shift_symplectic(phis).matrix();
  EXPECT_NEAR(s(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(s(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(s(1, 0), -1.0, 1e-15);
  EXPECT_NEAR(s(1, 1), 0.0, 1e-15);
}

TEST(PhaseShift, PreservesSymplecticForm) {
  const std::vector<double> phis{0.3, -1.2, 2.9};
  const Matrix s = phase_shift_symplectic(phis).matrix();
  const Matrix om = symplectic_form(3);
  EXPECT_LT(max_abs(s * om * s.transpose() - om), 1e-12);
}

TEST(BeamSplitter, ZeroAngleIsIdentity) {
  EXPECT_EQ(beam_splitter_symplectic(0, 1, 0.0, 2).matrix(), Matrix::Identity(4, 4));
}

TEST(BeamSplitter, RejectsEqualOrOutOfRangeModes) {
  EXPECT_THROW(beam_splitter_symplectic(1, 1, 0.3, 2), InvalidArgument);
  EXPECT_THROW(beam_splitter_symplectic(0, 2, 0.3, 2), InvalidArgument);
}

TEST(BeamSplitter, QuarterTurnSwapsModes) {
  GaussianState s(0.5 * Matrix::Identity(4, 4), (Vector(4) << 1.0, 2.0, 0.0, 0.0).finished());
  const auto out = apply_symplectic(s, beam_splitter_symplectic(0, 1, std::numbers::pi / 2, 2));
  EXPECT_NEAR(out.mean()(0), 0.0, 1e-15);
  EXPECT_NEAR(out.mean()(2), 1.0, 1e-15);
  EXPECT_NEAR(out.mean()(3), 2.0, 1e-15);
}

TEST(BeamSplitter, BalancedSplitOfSqueezedVacuum) {
  const double r = 0.7;
  const auto in = tensor_product(squeezed(r), vacuum_state(1));
  const auto out = apply_symplectic(in, beam_splitter_symplectic(0, 1, std::numbers::pi / 4, 2));
  EXPECT_NEAR(out.cov()(0, 2), (std::exp(2 * r) - 1) / 4, 1e-14);
  EXPECT_NEAR(out.cov()(1, 3), (std::exp(-2 * r) - 1) / 4, 1e-14);
  EXPECT_NEAR(out.cov()(0, 0), out.cov()(2, 2), 1e-14);
}

TEST(Squeezer, ZeroIsIdentity) {
  EXPECT_EQ(single_mode_squeezer(0.0).matrix(), Matrix::Identity(2, 2));
}

TEST(Squeezer, PositiveRSqueezesP) {
  const double r = 0.4;
  EXPECT_LT(max_abs(squeezed(r).cov() - diag2(std::exp(2 * r), std::exp(-2 * r)) / 2), 1e-15);
}

TEST(Squeezer, UnitPhotonNumber) {
  const double r = std::log(1.0 + std::sqrt(2.0));
  EXPECT_NEAR(mean_photon_number(squeezed(r)), 1.0, 1e-14);
}

TEST(Squeezer, PhotonNumberVariance) {
  for (double r : {0.1, 0.5, 1.3}) {
    EXPECT_NEAR(photon_number_variance(squeezed(r), 0), (std::cosh(4 * r) - 1) / 4,
                1e-12 * std::cosh(4 * r));
  }
}

TEST(Squeezer, RejectsNonFinite) {
  EXPECT_THROW(single_mode_squeezer(std::nan("")), InvalidArgument);
}

TEST(SymplecticOpValidation, RejectsNonSymplectic) {
  EXPECT_THROW(SymplecticOp(2.0 * Matrix::Identity(2, 2)), InvalidArgument);
}

TEST(SymplecticOpValidation, CompositionAppliesRightOperandFirst) {
  const auto sq = single_mode_squeezer(0.5);
  const std::vector<double> quarter{std::numbers::pi / 2};
  const auto rot = phase_shift_symplectic(quarter);
  const auto out = apply_symplectic(vacuum_state(1), rot * sq);
  const double r = 0.5;
  EXPECT_LT(max_abs(out.cov() - diag2(std::exp(-2 * r), std::exp(2 * r)) / 2), 1e-14);
}

TEST(ApplySymplectic, IdentityLeavesStateUnchanged) {
  const auto s = squeezed(0.3);
  const auto out = apply_symplectic(s, SymplecticOp::identity(1));
  EXPECT_EQ(out.cov(), s.cov());
}

TEST(ApplySymplectic, PhaseShiftFixesVacuum) {
  const std::vector<double> phis{1.1, -0.4};
  const auto out = apply_symplectic(vacuum_state(2), phase_shift_symplectic(phis));
  EXPECT_LT(max_abs(out.cov() - 0.5 * Matrix::Identity(4, 4)), 1e-15);
}

TEST(ApplySymplectic, DimensionMismatchRejected) {
  EXPECT_THROW(apply_symplectic(vacuum_state(2), single_mode_squeezer(0.1)), InvalidArgument);
}

TEST(Loss, UnitTransmissivityIsIdentity) {
  const auto s = squeezed(0.8);
  EXPECT_EQ(apply_loss(s, LossChannel(1.0)).cov(), s.cov());
}

TEST(Loss, VacuumIsFixed) {
  for (double eta : {0.0, 0.3, 0.9}) {
    EXPECT_LT(max_abs(apply_loss(vacuum_state(2), LossChannel(eta)).cov() -
                      0.5 * Matrix::Identity(4, 4)),
              1e-15);
  }
}

TEST(Loss, HalfTransmissivityOnSqueezedVacuum) {
  const double r = 0.6;
  const auto out = apply_loss(squeezed(r), LossChannel(0.5));
  EXPECT_LT(max_abs(out.cov() - diag2((std::exp(2 * r) + 1) / 4, (std::exp(-2 * r) + 1) / 4)),
            1e-15);
}

TEST(Loss, MeanScalesWithSqrtEta) {
  GaussianState s(0.5 * Matrix::Identity(2, 2), (Vector(2) << 2.0, -1.0).finished());
  const auto out = apply_loss(s, LossChannel(0.25));
  EXPECT_NEAR(out.mean()(0), 1.0, 1e-15);
  EXPECT_NEAR(out.mean()(1), -0.5, 1e-15);
}

TEST(Loss, InvalidTransmissivityRejected) {
  EXPECT_THROW(LossChannel(-0.1), InvalidArgument);
  EXPECT_THROW(LossChannel(1.1), InvalidArgument);
}

TEST(MeanPhotonNumber, CoherentState) {
  GaussianState s(0.5 * Matrix::Identity(2, 2), (Vector(2) << 3.0, 4.0).finished());
  EXPECT_NEAR(mean_photon_number(s), 12.5, 1e-14);
  EXPECT_NEAR(mean_photon_number(vacuum_state(4)), 0.0, 1e-15);
}

TEST(SymplecticEigenvalues, LossySqueezedVacuum) {
  const auto out = apply_loss(squeezed(1.0), LossChannel(0.5));
  const double expected =
      std::sqrt((std::exp(2.0) + 1) / 4 * (std::exp(-2.0) + 1) / 4);
  EXPECT_NEAR(symplectic_eigenvalues(out)[0], expected, 1e-12);
  EXPECT_NEAR(expected, 0.771540317, 1e-9);
}

TEST(SymplecticEigenvalues, SqueezedVacuumIsPure) {
  for (double r : {0.0, 0.5, 2.0}) EXPECT_NEAR(symplectic_eigenvalues(squeezed(r))[0], 0.5, 1e-12);
}

TEST(SymplecticEigenvalues, SortedDescending) {
  Matrix c = Matrix::Identity(4, 4);
  c(0, 0) = c(1, 1) = 2.5;
  c(2, 2) = c(3, 3) = 0.7;
  const auto nu = symplectic_eigenvalues(c);
  EXPECT_NEAR(nu[0], 2.5, 1e-12);
  EXPECT_NEAR(nu[1], 0.7, 1e-12);
}

TEST(SymplecticEigenvalues, RejectsAsymmetricInput) {
  Matrix c = Matrix::Identity(2, 2);
  c(1, 0) = 0.2;
  EXPECT_THROW(symplectic_eigenvalues(c), InvalidArgument);
}

TEST(TensorProduct, BlockDiagonal) {
  const auto t = tensor_product(squeezed(0.2), thermal_state(1, 1.0));
  EXPECT_EQ(t.modes(), 2);
  EXPECT_NEAR(t.cov()(2, 2), 1.5, 1e-15);
  EXPECT_EQ(t.cov()(0, 2), 0.0);
}
