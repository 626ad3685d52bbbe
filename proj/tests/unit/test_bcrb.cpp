#include <gtest/gtest.h>

#include "otfs/bcrb.hpp"
#include "otfs/dictionary.hpp"
#include "otfs/errors.hpp"
#include "test_util.hpp"

namespace otfs {
namespace {

CMatrix kron_identity(Index copies, const CMatrix& a) {
  CMatrix out = CMatrix::Zero(copies * a.rows(), copies * a.cols());
  for (Index b = 0; b < copies; ++b) out.block(b * a.rows(), b * a.cols(), a.rows(), a.cols()) = a;
  return out;
}

// Materialises every Kronecker product and inverts J directly.
double explicit_bound(const BcrbInput& in) {
  const Index nt = in.tx_antennas, nr = in.rx_antennas;
  CMatrix j = in.phi.adjoint() * in.noise_var.cwiseInverse().asDiagonal() * in.phi;
  j.diagonal() += in.lambda.replicate(nt, 1).cwiseInverse().cast<Complex>();
  const CMatrix big_zeta = kron_identity(nr * nt, in.zeta);
  const CMatrix big_j_inv = kron_identity(nr, j.inverse());
  return (big_zeta * big_j_inv * big_zeta.adjoint()).trace().real();
}

BcrbInput random_input(Rng& rng, Index rows, Index n, Index nt, Index nr) {
  BcrbInput in;
  in.phi = rng.complex_normal(rows, n * nt);
  in.noise_var = RVector::Constant(rows, 0.1);
  in.lambda = RVector::LinSpaced(n, 0.2, 1.0);
  in.zeta = rng.complex_normal(9, n);
  in.tx_antennas = nt;
  in.rx_antennas = nr;
  return in;
}

TEST(Bcrb, ScalarFormula) {
  BcrbInput in;
  const Complex phi(0.8, -0.6), zeta(1.5, 0.5);
  const double s2 = 0.2, lambda = 0.7;
  in.phi = CMatrix::Constant(1, 1, phi);
  in.noise_var = RVector::Constant(1, s2);
  in.lambda = RVector::Constant(1, lambda);
  in.zeta = CMatrix::Constant(1, 1, zeta);
  const double expect = std::norm(zeta) / (std::norm(phi) / s2 + 1.0 / lambda);
  EXPECT_NEAR(bcrb_siso(in), expect, 1e-14);
}

TEST(Bcrb, PriorOnly) {
  Rng rng(1);
  BcrbInput in = random_input(rng, 6, 4, 1, 1);
  in.phi.setZero();
  const CMatrix prior = in.lambda.cast<Complex>().asDiagonal();
  EXPECT_NEAR(bcrb_siso(in), (in.zeta * prior * in.zeta.adjoint()).trace().real(), 1e-12);
}

TEST(Bcrb, MonotoneInSnr) {
  Rng rng(2);
  BcrbInput in = random_input(rng, 8, 5, 1, 1);
  double prev = 1e300;
  for (int k = 0; k < 10; ++k) {
    in.noise_var.setConstant(std::pow(10.0, -k / 2.0));
    const double b = bcrb_siso(in);
    EXPECT_LE(b, prev * (1.0 + 1e-12));
    EXPECT_GE(b, 0.0);
    prev = b;
  }
}

TEST(Bcrb, SisoEqualsMimoOneByOneAndRejectsAntennas) {
  Rng rng(3);
  BcrbInput in = random_input(rng, 8, 4, 1, 1);
  EXPECT_EQ(bcrb_siso(in), bcrb_mimo(in));
  in.rx_antennas = 2;
  EXPECT_THROW(bcrb_siso(in), std::invalid_argument);
}

TEST(Bcrb, MatchesExplicitKronecker) {
  Rng rng(4);
  for (auto [nt, nr] : {std::pair<Index, Index>{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 2}}) {
    const BcrbInput in = random_input(rng, 10, 3, nt, nr);
    EXPECT_NEAR(bcrb_mimo(in), explicit_bound(in), 1e-10 * explicit_bound(in));
  }
}

TEST(Bcrb, ScalesWithReceiveAntennas) {
  Rng rng(5);
  BcrbInput in = random_input(rng, 10, 3, 2, 1);
  const double one = bcrb_mimo(in);
  in.rx_antennas = 2;
  EXPECT_NEAR(bcrb_mimo(in), 2.0 * one, 1e-12 * one);
  EXPECT_NEAR(bcrb_mimo(in), explicit_bound(in), 1e-10 * one);
}

TEST(Bcrb, ZeroDictionaryMimo) {
  Rng rng(6);
  BcrbInput in = random_input(rng, 6, 3, 2, 2);
  in.phi.setZero();
  const CMatrix prior = in.lambda.cast<Complex>().asDiagonal();
  const double per = (in.zeta * prior * in.zeta.adjoint()).trace().real();
  EXPECT_NEAR(bcrb_mimo(in), 4.0 * per, 1e-12 * per);
  EXPECT_NEAR(explicit_bound(in), 4.0 * per, 1e-10 * per);
}

TEST(Bcrb, NestedDictionariesNeverIncrease) {
  Rng rng(7);
  BcrbInput in = random_input(rng, 12, 6, 1, 1);
  const CMatrix full = in.phi;
  double prev = 1e300;
  for (Index rows = 1; rows <= 12; ++rows) {
    in.phi = full.topRows(rows);
    in.noise_var = RVector::Constant(rows, 0.1);
    const double b = bcrb_siso(in);
    EXPECT_LE(b, prev * (1.0 + 1e-12));
    prev = b;
  }
}

TEST(Bcrb, FloorEntriesStayAccurate) {
  Rng rng(8);
  BcrbInput in = random_input(rng, 12, 6, 1, 1);
  in.lambda(2) = 1e-12;
  in.lambda(4) = 1e-12;
  EXPECT_NEAR(bcrb_siso(in), explicit_bound(in), 1e-8 * explicit_bound(in));
}

TEST(Bcrb, Errors) {
  Rng rng(9);
  BcrbInput in = random_input(rng, 6, 3, 1, 1);
  in.noise_var(0) = 0.0;
  EXPECT_THROW(bcrb_siso(in), NumericalError);
  in = random_input(rng, 6, 3, 1, 1);
  in.zeta = CMatrix::Zero(9, 2);
  EXPECT_THROW(bcrb_siso(in), std::invalid_argument);
}

TEST(Bcrb, TrueHyperparameters) {
  CMatrix c(3, 2);
  c << Complex(1, 0), Complex(0, 1), Complex(0, 0), Complex(0, 0), Complex(3, 4), Complex(0, 0);
  const RVector l = true_hyperparameters(c, 1e-12);
  EXPECT_DOUBLE_EQ(l(0), 1.0);
  EXPECT_DOUBLE_EQ(l(1), 1e-12);
  EXPECT_DOUBLE_EQ(l(2), 12.5);
}

TEST(Bcrb, ProjectionRecoversGridCoefficients) {
  Rng rng(10);
  const OtfsGrid g = OtfsGrid::rectangular(8, 8, 15e3);
  const ChannelSupport s(3, 2, 4);
  const CMatrix z = zeta_matrix(g, s);
  const CVector h = rng.complex_normal(s.size(), 1);
  EXPECT_LT(testing::max_abs(project_onto_grid(unvec(z * h, 8, 8), z) - h), 1e-10);
  EXPECT_THROW(project_onto_grid(CMatrix::Zero(4, 4), z), std::invalid_argument);
}

}  // namespace
}  // namespace otfs
