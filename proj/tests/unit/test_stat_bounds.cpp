#include "dsgso/errors.hpp"
#include "dsgso/random.hpp"
#include "dsgso/stat_bounds.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace dsgso {
namespace {

using testing::dense_operator;

const DSOperator& third() {
  static const DSOperator op = dense_operator({{1.0 / 3, 2.0 / 3}, {2.0 / 3, 1.0 / 3}});
  return op;
}

TEST(RandomStream, StreamsAreReproducibleAndDistinct) {
  RandomStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(Samplers, RademacherIsPlusMinusOne) {
  RandomStream rng(1, 0);
  std::vector<double> z(1000);
  rademacher_sampler()(rng, z);
  double sum = 0.0;
  for (double v : z) {
    EXPECT_EQ(std::abs(v), 1.0);
    sum += v;
  }
  EXPECT_LT(std::abs(sum), 4.0 * std::sqrt(1000.0));
}

TEST(Samplers, GaussianMoments) {
  RandomStream rng(2, 0);
  std::vector<double> z(200000);
  gaussian_sampler()(rng, z);
  const double n = static_cast<double>(z.size());
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= n - 1;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(n));
  EXPECT_LT(std::abs(var - 1.0), 4.0 * std::sqrt(2.0 / n));
}

TEST(Moments, Validation) {
  EXPECT_NO_THROW(validate_moments({0.0, 0.0, 1.0}));
  EXPECT_THROW(validate_moments({0.0, -1.0, 0.0}), InvalidParameter);
  EXPECT_THROW(validate_moments({0.0, 1.0, 1.5}), InvalidParameter);
  EXPECT_THROW(validate_moments({NAN, 1.0, 0.0}), InvalidParameter);
}

TEST(Model, PerNeighborhoodRejectsConflicts) {
  // Vertex 0 belongs to both neighbourhoods, so its mean must agree.
  const Graph g(Matrix(DenseMatrix::Ones(2, 2)));
  EXPECT_NO_THROW(RandomSignalModel::per_neighborhood(g, {{1, 1, 0.2}, {1, 1, 0.2}}));
  EXPECT_THROW(RandomSignalModel::per_neighborhood(g, {{1, 1, 0.2}, {2, 1, 0.2}}),
               InvalidParameter);
  EXPECT_THROW(RandomSignalModel::per_neighborhood(g, {{1, 1, 0.2}, {1, 1, 0.3}}),
               InvalidParameter);
  EXPECT_THROW(RandomSignalModel::per_neighborhood(g, {{1, 1, 0.2}}), InvalidParameter);
}

TEST(Model, DisjointNeighborhoodsMayDiffer) {
  const Graph g(Matrix::identity(2));
  const auto model = RandomSignalModel::per_neighborhood(g, {{1, 1, 0}, {5, 2, 0}});
  EXPECT_EQ(model.moments(1).mean, 5.0);
}

TEST(LocalBounds, UniformRow) {
  const LocalBounds b = local_bounds(testing::uniform_operator(4), 2);
  EXPECT_EQ(b.lower, 0.25);
  EXPECT_EQ(b.upper, 0.25);
  EXPECT_EQ(b.size, 4);
}

TEST(LocalBounds, TwoEntryRow) {
  const LocalBounds b = local_bounds(third(), 0);
  EXPECT_EQ(b.lower, 1.0 / 3);
  EXPECT_EQ(b.upper, 2.0 / 3);
  EXPECT_EQ(b.size, 2);
}

TEST(LocalBounds, MatchesExhaustiveScan) {
  testing::Rng rng(10);
  const DSOperator op = testing::random_operator(rng, 10);
  const DenseMatrix s = op.matrix().to_dense();
  for (Index m = 0; m < 10; ++m) {
    const LocalBounds b = local_bounds(op, m);
    EXPECT_EQ(b.lower, s.row(m).minCoeff());
    EXPECT_EQ(b.upper, s.row(m).maxCoeff());
    EXPECT_EQ(b.size, 10);
  }
}

TEST(LocalBounds, SkipsStructuralZeros) {
  const DSOperator op = dense_operator({{0.5, 0.5, 0}, {0.5, 0.5, 0}, {0, 0, 1}});
  EXPECT_EQ(local_bounds(op, 0).size, 2);
  EXPECT_THROW(local_bounds(op, 3), InvalidParameter);
}

TEST(Kantorovich, UniformRowIsTight) {
  for (Index n : {1, 3, 8}) {
    const DSOperator op = testing::uniform_operator(n);
    EXPECT_DOUBLE_EQ(kantorovich_bound(op, 0), 1.0 / static_cast<double>(n));
    EXPECT_DOUBLE_EQ(row_energy(op, 0), 1.0 / static_cast<double>(n));
  }
}

TEST(Kantorovich, BoundsRowEnergy) {
  testing::Rng rng(6);
  const DSOperator op = testing::random_operator(rng, 20);
  for (Index m = 0; m < 20; ++m) EXPECT_LE(row_energy(op, m), kantorovich_bound(op, m));
}

TEST(AmGm, HandValues) {
  EXPECT_EQ(amgm_bias_term(0.3, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(amgm_bias_term(1.0, 4.0), 25.0 / 16.0);
  EXPECT_THROW(amgm_bias_term(0.0, 1.0), InvalidParameter);
  EXPECT_THROW(amgm_bias_term(0.5, 0.4), InvalidParameter);
}

TEST(VarianceBound, HandValues) {
  EXPECT_EQ(variance_upper_bound(third(), 0, 0.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(variance_upper_bound(testing::uniform_operator(5), 0, 1.0, 0.0), 0.2);
  EXPECT_NEAR(variance_upper_bound(third(), 0, 1.0, 0.5), 10.0 / 9.0, 1e-15);
}

TEST(ExactVariance, HandValues) {
  EXPECT_NEAR(exact_shift_variance(third(), 0, 1.0, 0.0), 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(exact_shift_variance(third(), 0, 1.0, 1.0), 1.0, 1e-15);
  testing::Rng rng(1);
  const DSOperator op = testing::random_operator(rng, 7);
  EXPECT_NEAR(exact_shift_variance(op, 3, 1.0, 1.0), 1.0, 1e-9);
}

// Oracle: e^T Sigma e with the full equicorrelated covariance.
TEST(ExactVariance, MatchesQuadraticForm) {
  testing::Rng rng(13);
  const DSOperator op = testing::random_operator(rng, 9);
  const double sigma = 1.7;
  const double rho = 0.35;
  const DenseMatrix cov =
      sigma * sigma * (rho * DenseMatrix::Ones(9, 9) + (1 - rho) * DenseMatrix::Identity(9, 9));
  const Vector row = op.matrix().to_dense().row(4).transpose();
  EXPECT_NEAR(exact_shift_variance(op, 4, sigma, rho), row.dot(cov * row), 1e-13);
  EXPECT_LE(exact_shift_variance(op, 4, sigma, rho), variance_upper_bound(op, 4, sigma, rho));
}

TEST(AsymptoticBound, HandValues) {
  EXPECT_EQ(asymptotic_variance_bound(3.0, 0.0, 0.1, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(asymptotic_variance_bound(1.0, 0.5, 0.2, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(asymptotic_variance_bound(2.0, 0.25, 0.1, 0.4), 1.5625);
  EXPECT_THROW(asymptotic_variance_bound(1.0, 0.5, 0.2, 1.0), InvalidParameter);
}

TEST(PowerBounds, HandValues) {
  const PowerBounds zero_rho = l2_upper_bound(1.5, 2.0, 0.0, 0.1, 0.4);
  EXPECT_EQ(zero_rho.lower, 2.25);
  EXPECT_EQ(zero_rho.upper, 2.25);
  const PowerBounds flat = l2_upper_bound(2.0, 1.0, 0.5, 0.25, 0.25);
  EXPECT_EQ(flat.lower, 4.0);
  EXPECT_EQ(flat.upper, 4.5);
  EXPECT_DOUBLE_EQ(l2_upper_bound(1.0, 2.0, 0.25, 0.1, 0.4).upper, 2.5625);
}

TEST(Sampling, ZeroSigmaGivesTheMean) {
  const Neighborhood nb{0, {0, 1, 2}};
  const GraphSignal x = sample_local_signal(SignalMoments{3.5, 0.0, 0.4}, nb, 1);
  EXPECT_EQ(x, GraphSignal::Constant(3, 3.5));
}

TEST(Sampling, FullCorrelationGivesIdenticalMembers) {
  const Neighborhood nb{0, {0, 1, 2, 3}};
  for (std::uint64_t s = 0; s < 5; ++s) {
    const GraphSignal x = sample_local_signal(SignalMoments{0.0, 2.0, 1.0}, nb, 7, s);
    EXPECT_EQ(x.maxCoeff(), x.minCoeff());
  }
}

TEST(Sampling, StreamsAreReproducible) {
  const Neighborhood nb{0, {0, 1}};
  const SignalMoments mo{0, 1, 0.5};
  EXPECT_EQ(sample_local_signal(mo, nb, 3, 9), sample_local_signal(mo, nb, 3, 9));
  EXPECT_NE(sample_local_signal(mo, nb, 3, 9), sample_local_signal(mo, nb, 3, 10));
}

TEST(MonteCarlo, ZeroSigmaIsExact) {
  const auto model = RandomSignalModel::uniform({2.0, 0.0, 0.3});
  const ShiftStats s = monte_carlo_shift_stats(testing::uniform_operator(4), 0, model, {1000, 1, 1, {}});
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_EQ(s.variance, 0.0);
  EXPECT_EQ(s.power, 4.0);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  testing::Rng rng(4);
  const DSOperator op = testing::random_operator(rng, 16);
  const auto model = RandomSignalModel::uniform({1.0, 2.0, 0.3});
  const ShiftStats a = monte_carlo_shift_stats(op, 5, model, {20000, 9, 1, {}});
  const ShiftStats b = monte_carlo_shift_stats(op, 5, model, {20000, 9, 4, {}});
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.power, b.power);
}

TEST(MonteCarlo, AgreesWithClosedFormUnderRademacherNoise) {
  // The moment formulas only need zero-mean unit-variance noise.
  testing::Rng rng(14);
  const DSOperator op = testing::random_operator(rng, 12);
  const SignalMoments mo{-0.5, 1.5, 0.4};
  const ShiftStats s = monte_carlo_shift_stats(op, 2, RandomSignalModel::uniform(mo),
                                               {100000, 5, 1, rademacher_sampler()});
  EXPECT_LE(std::abs(s.mean - mo.mean), 4 * s.stderr_mean);
  EXPECT_LE(std::abs(s.variance - exact_shift_variance(op, 2, mo.sigma, mo.rho)),
            4 * s.stderr_variance);
}

TEST(MonteCarlo, RejectsTooFewTrials) {
  EXPECT_THROW(monte_carlo_shift_stats(third(), 0, RandomSignalModel::uniform({}), {1, 1, 1, {}}),
               InvalidParameter);
}

TEST(BoundsReport, SingleEntryRowOmitsAsymptoticBounds) {
  const BoundsReport r = compute_bounds_report(DSOperator::from_matrix(Matrix::identity(3)), 1,
                                               {1.0, 1.0, 0.5}, std::nullopt);
  EXPECT_FALSE(r.variance_asymptotic.has_value());
  EXPECT_FALSE(r.power_upper.has_value());
  EXPECT_FALSE(r.monte_carlo.has_value());
  EXPECT_EQ(r.local.size, 1);
  EXPECT_EQ(r.row_energy, 1.0);
}

TEST(BoundsReport, FieldsAgreeWithFreeFunctions) {
  const SignalMoments mo{1.0, 2.0, 0.25};
  const BoundsReport r = compute_bounds_report(third(), 1, mo, MonteCarloOptions{1000, 3, 1, {}});
  EXPECT_EQ(r.variance_exact, exact_shift_variance(third(), 1, 2.0, 0.25));
  EXPECT_EQ(r.variance_bound, variance_upper_bound(third(), 1, 2.0, 0.25));
  ASSERT_TRUE(r.power_upper.has_value());
  EXPECT_EQ(*r.power_upper, l2_upper_bound(1.0, 2.0, 0.25, 1.0 / 3, 2.0 / 3).upper);
  ASSERT_TRUE(r.monte_carlo.has_value());
  EXPECT_EQ(r.monte_carlo->trials, 1000);
}

}  // namespace
}  // namespace dsgso
