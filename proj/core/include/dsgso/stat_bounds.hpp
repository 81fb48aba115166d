#pragma once

#include "dsgso/balance.hpp"
#include "dsgso/graph.hpp"
#include "dsgso/random.hpp"
#include "dsgso/shift_filter.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dsgso {

/// Locally stationary moments shared by every member of one neighbourhood:
/// mean, standard deviation and pairwise (equi)correlation.
struct SignalMoments {
  double mean = 0.0;
  double sigma = 1.0;
  double rho = 0.0;
};

/// Throws InvalidParameter unless sigma >= 0, rho in [0, 1], all finite.
void validate_moments(const SignalMoments& moments);

class RandomSignalModel {
 public:
  /// Same moments in every neighbourhood.
  static RandomSignalModel uniform(const SignalMoments& moments);

  /// One entry per vertex m, describing its incoming neighbourhood.
  /// Overlapping neighbourhoods must agree: a vertex shared by two
  /// neighbourhoods needs the same mean and sigma in both, and a pair
  /// shared by two neighbourhoods the same rho. Conflicts throw
  /// InvalidParameter.
  static RandomSignalModel per_neighborhood(
      const Graph& graph, std::vector<SignalMoments> moments);

  const SignalMoments& moments(Index m) const;

 private:
  std::optional<SignalMoments> shared_;
  std::vector<SignalMoments> per_vertex_;
};

struct LocalBounds {
  double lower = 0.0;  // L: smallest positive entry of the row
  double upper = 0.0;  // U: largest entry of the row
  Index size = 0;      // N_m: positive entries in the row
};

/// Throws InvalidParameter for a bad id or a row without positive entries.
LocalBounds local_bounds(const DSOperator& op, Index m);

/// sum_n S_mn^2.
double row_energy(const DSOperator& op, Index m);

/// (L + U)^2 / (4 L U); at least 1, equal to 1 iff L == U.
double amgm_bias_term(double lower, double upper);

/// (1 / N_m) (L + U)^2 / (4 L U), an upper bound on row_energy(op, m).
///
/// The bound drops below one only when the AM-GM term is smaller than N_m,
/// i.e. for rows that are homogeneous enough relative to their size; it is
/// not clamped or asserted. Throws Error(kNumericalFailure) if the computed
/// row energy exceeds the bound beyond rounding.
double kantorovich_bound(const DSOperator& op, Index m);

/// sigma^2 (1 + N_m rho) sum_n S_mn^2.
double variance_upper_bound(const DSOperator& op, Index m, double sigma,
                            double rho);

/// sigma^2 (sum_n S_mn^2 + rho sum_{n != k} S_mn S_mk).
double exact_shift_variance(const DSOperator& op, Index m, double sigma,
                            double rho);

/// rho sigma^2 (L + U)^2 / (4 L U): limit of the variance bound as the
/// neighbourhood grows with L and U held fixed.
double asymptotic_variance_bound(double sigma, double rho, double lower,
                                 double upper);

struct PowerBounds {
  double lower = 0.0;  // mu^2
  double upper = 0.0;  // mu^2 + rho sigma^2 (L + U)^2 / (4 L U)
};

/// Asymptotic bounds on E[(S x)_m^2].
PowerBounds l2_upper_bound(double mu, double sigma, double rho, double lower,
                           double upper);

/// x_n = mu + sigma (sqrt(rho) z_0 + sqrt(1 - rho) z_n) for each member,
/// z drawn from `sampler` on the stream (seed, stream).
GraphSignal sample_local_signal(const SignalMoments& moments,
                                const Neighborhood& neighborhood,
                                std::uint64_t seed, std::uint64_t stream = 0,
                                const StandardSampler& sampler = {});
GraphSignal sample_local_signal(const RandomSignalModel& model,
                                const Neighborhood& neighborhood,
                                std::uint64_t seed, std::uint64_t stream = 0,
                                const StandardSampler& sampler = {});

struct ShiftStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double power = 0.0;     // mean of squares
  double stderr_mean = 0.0;
  double stderr_variance = 0.0;
  double stderr_power = 0.0;
  std::int64_t trials = 0;
};

struct MonteCarloOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 42;
  /// Worker threads; results are identical for any value.
  unsigned threads = 1;
  StandardSampler sampler;  // empty => Gaussian
};

/// Sample statistics of the shifted value (S x)_m over independent draws of
/// the neighbourhood signal. Trial t uses random stream (seed, t).
/// Throws InvalidParameter for fewer than 2 trials.
ShiftStats monte_carlo_shift_stats(const DSOperator& op, Index m,
                                   const RandomSignalModel& model,
                                   const MonteCarloOptions& options = {});

/// Everything the `bounds` command reports for one vertex.
struct BoundsReport {
  Index vertex = 0;
  SignalMoments moments;
  LocalBounds local;
  double kantorovich = 0.0;
  double row_energy = 0.0;
  double variance_exact = 0.0;
  double variance_bound = 0.0;
  double power_lower = 0.0;
  // The asymptotic bounds need U < 1; absent for single-entry rows.
  std::optional<double> variance_asymptotic;
  std::optional<double> power_upper;
  std::optional<ShiftStats> monte_carlo;
};

BoundsReport compute_bounds_report(const DSOperator& op, Index m,
                                   const SignalMoments& moments,
                                   const std::optional<MonteCarloOptions>& mc);

}  // namespace dsgso
