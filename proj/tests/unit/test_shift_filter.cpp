#include "dsgso/errors.hpp"
#include "dsgso/shift_filter.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dsgso {
namespace {

using testing::dense_operator;
using testing::signal;

const DSOperator& half() {
  static const DSOperator op = dense_operator({{0.5, 0.5}, {0.5, 0.5}});
  return op;
}

const DSOperator& third() {
  static const DSOperator op = dense_operator({{1.0 / 3, 2.0 / 3}, {2.0 / 3, 1.0 / 3}});
  return op;
}

TEST(ApplyShift, IdentityLeavesSignal) {
  const DSOperator op = DSOperator::from_matrix(Matrix::identity(3));
  const GraphSignal x = signal({1.5, -2.0, 7.0});
  EXPECT_EQ(apply_shift(op, x), x);
}

TEST(ApplyShift, UniformAveraging) {
  EXPECT_EQ(apply_shift(half(), signal({0, 2})), signal({1, 1}));
}

TEST(ApplyShift, HandProductAndL1Isometry) {
  const GraphSignal y = apply_shift(third(), signal({3, 0}));
  EXPECT_NEAR(y(0), 1.0, 1e-15);
  EXPECT_NEAR(y(1), 2.0, 1e-15);
  EXPECT_NEAR(vector_norm(y, NormType::kL1), 3.0, 1e-15);
}

TEST(ApplyShift, LengthMismatchThrows) {
  EXPECT_THROW(apply_shift(half(), signal({1, 2, 3})), InvalidParameter);
}

TEST(Filter, ZerothOrderIsIdentity) {
  const GraphSignal x = signal({0.25, 4.0});
  EXPECT_EQ(apply_filter(third(), FilterSpec({1.0}), x), x);
}

TEST(Filter, PureShiftMatchesApplyShiftExactly) {
  const GraphSignal x = signal({0.3, -1.7});
  EXPECT_EQ(apply_filter(third(), FilterSpec({0.0, 1.0}), x), apply_shift(third(), x));
}

TEST(Filter, HandEvaluatedFirstOrder) {
  const GraphSignal y = apply_filter(half(), FilterSpec({0.5, 0.5}), signal({0, 2}));
  EXPECT_EQ(y, signal({0.5, 1.5}));
}

// Oracle: explicit sum of h_k S^k x with dense matrix powers.
TEST(Filter, HornerMatchesExplicitPowers) {
  testing::Rng rng(9);
  const DSOperator op = testing::random_operator(rng, 12);
  const std::vector<double> h{0.4, -1.2, 0.7, 0.05, -0.3};
  const GraphSignal x = testing::random_signal(rng, 12);
  const DenseMatrix s = op.matrix().to_dense();
  GraphSignal expected = GraphSignal::Zero(12);
  DenseMatrix power = DenseMatrix::Identity(12, 12);
  for (double hk : h) {
    expected += hk * (power * x);
    power = s * power;
  }
  EXPECT_LE((apply_filter(op, FilterSpec(h), x) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Filter, SpecValidationAndGain) {
  EXPECT_THROW(FilterSpec({}), InvalidParameter);
  EXPECT_THROW(FilterSpec({1.0, NAN}), InvalidParameter);
  const FilterSpec f({1.0, -2.0, 0.5});
  EXPECT_EQ(f.order(), 2);
  EXPECT_EQ(f.absolute_gain(), 3.5);
}

TEST(Diffuse, ZeroStepsIsIdentity) {
  const GraphSignal x = signal({3, 0});
  EXPECT_EQ(diffuse(third(), x, 0), x);
  EXPECT_THROW(diffuse(third(), x, -1), InvalidParameter);
}

TEST(Diffuse, RankOneProjectorIsIdempotent) {
  for (int k : {1, 2, 5}) EXPECT_EQ(diffuse(half(), signal({0, 2}), k), signal({1, 1}));
}

TEST(Diffuse, SecondEigenvalueDecay) {
  const GraphSignal y = diffuse(third(), signal({3, 0}), 20);
  EXPECT_NEAR(y(0), 1.5, 1e-4);
  EXPECT_NEAR(y(1), 1.5, 1e-4);
  // Error is exactly 1.5 (1/3)^20 in magnitude.
  EXPECT_NEAR(std::abs(y(0) - 1.5), 1.5 * std::pow(1.0 / 3, 20), 1e-14);
}

TEST(DiffuseToMean, ConvergesForPositiveOperator) {
  const DiffusionReport r = diffuse_to_mean(third(), signal({3, 0}));
  EXPECT_EQ(r.status, DiffusionStatus::kConverged);
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_EQ(r.residual_history.size(), static_cast<std::size_t>(r.steps) + 1);
  EXPECT_EQ(r.residual_history.front(), 1.5);
}

TEST(DiffuseToMean, PermutationIsReportedNonConvergent) {
  const DSOperator swap = dense_operator({{0, 1}, {1, 0}});
  const DiffusionReport r = diffuse_to_mean(swap, signal({1, 0}));
  EXPECT_EQ(r.status, DiffusionStatus::kNonConvergent);
  EXPECT_EQ(r.residual, 0.5);
  EXPECT_LT(r.steps, 20);
}

TEST(DiffuseToMean, StepBudget) {
  DiffusionOptions opt;
  opt.max_steps = 3;
  const DiffusionReport r = diffuse_to_mean(third(), signal({3, 0}), opt);
  EXPECT_EQ(r.status, DiffusionStatus::kMaxSteps);
  EXPECT_EQ(r.steps, 3);
}

TEST(Norms, ParseNames) {
  EXPECT_EQ(parse_norm_type("1"), NormType::kL1);
  EXPECT_EQ(parse_norm_type("2"), NormType::kL2);
  EXPECT_EQ(parse_norm_type("inf"), NormType::kInf);
  EXPECT_EQ(parse_norm_type("Infinity"), NormType::kInf);
  EXPECT_THROW(parse_norm_type("3"), InvalidParameter);
}

TEST(Norms, DoublyStochasticHasUnitNorms) {
  for (NormType p : {NormType::kL1, NormType::kL2, NormType::kInf}) {
    EXPECT_NEAR(matrix_norm(third().matrix(), p), 1.0, 1e-8);
    EXPECT_NEAR(matrix_norm(half().matrix(), p), 1.0, 1e-8);
  }
}

TEST(Norms, DiagonalHandValues) {
  DenseMatrix a(2, 2);
  a << 3, 0, 0, -4;
  for (NormType p : {NormType::kL1, NormType::kL2, NormType::kInf}) {
    EXPECT_NEAR(matrix_norm(Matrix(a), p), 4.0, 1e-9);
  }
}

TEST(Norms, NilpotentHandValues) {
  DenseMatrix a(2, 2);
  a << 0, 2, 0, 0;
  EXPECT_NEAR(matrix_norm(Matrix(a), NormType::kL1), 2.0, 1e-15);
  EXPECT_NEAR(matrix_norm(Matrix(a), NormType::kInf), 2.0, 1e-15);
  EXPECT_NEAR(matrix_norm(Matrix(a), NormType::kL2), 2.0, 1e-9);
}

TEST(Norms, SpectralNormMatchesSvdOracle) {
  testing::Rng rng(21);
  DenseMatrix a = DenseMatrix::NullaryExpr(15, 15, [&] { return testing::uniform(rng, -1, 1); });
  const double oracle = Eigen::JacobiSVD<DenseMatrix>(a).singularValues()(0);
  EXPECT_NEAR(matrix_norm(Matrix(a), NormType::kL2), oracle, 1e-8 * oracle);
}

TEST(Norms, VectorNorms) {
  const GraphSignal x = signal({3, -4});
  EXPECT_EQ(vector_norm(x, NormType::kL1), 7.0);
  EXPECT_EQ(vector_norm(x, NormType::kL2), 5.0);
  EXPECT_EQ(vector_norm(x, NormType::kInf), 4.0);
}

DenseMatrix equicorrelated(Index n, double sigma, double rho) {
  return sigma * sigma *
         (rho * DenseMatrix::Ones(n, n) + (1 - rho) * DenseMatrix::Identity(n, n));
}

TEST(Wss, ConstantMeanAndPermutationPreserveMoments) {
  const DSOperator p = dense_operator({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const WssDiagnostics d = wss_check(p, Vector::Constant(3, 2.0), equicorrelated(3, 1.5, 0.3), 1e-12);
  EXPECT_TRUE(d.passed);
  EXPECT_EQ(d.mean_residual, 0.0);
  EXPECT_EQ(d.covariance_residual, 0.0);
}

TEST(Wss, ConstantMeanSurvivesAnyOperator) {
  testing::Rng rng(2);
  const DSOperator op = testing::random_operator(rng, 6);
  EXPECT_LE(wss_check(op, Vector::Constant(6, -1.0), equicorrelated(6, 1, 0.5), 1e-6).mean_residual,
            1e-12);
}

TEST(Wss, NonConstantMeanFails) {
  const WssDiagnostics d = wss_check(half(), signal({1, 2}), DenseMatrix::Zero(2, 2), 1e-6);
  EXPECT_FALSE(d.passed);
  EXPECT_NEAR(d.mean_residual, 0.5, 1e-15);
}

TEST(Wss, IdentityCovarianceIsNotPreservedByAveraging) {
  const WssDiagnostics d = wss_check(half(), signal({1, 1}), DenseMatrix::Identity(2, 2), 1e-6);
  EXPECT_FALSE(d.passed);
  EXPECT_NEAR(d.covariance_residual, 0.5, 1e-15);
}

TEST(Wss, RejectsInvalidCovariance) {
  DenseMatrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  DenseMatrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  EXPECT_THROW(wss_check(half(), signal({1, 1}), asym, 1e-6), InvalidParameter);
  EXPECT_THROW(wss_check(half(), signal({1, 1}), indefinite, 1e-6), InvalidParameter);
  EXPECT_THROW(wss_check(half(), signal({1, 1, 1}), indefinite, 1e-6), InvalidParameter);
}

}  // namespace
}  // namespace dsgso
