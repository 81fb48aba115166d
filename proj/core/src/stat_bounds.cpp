#include "dsgso/stat_bounds.hpp"

#include "dsgso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <thread>
#include <utility>

namespace dsgso {
namespace {

void check_vertex(const DSOperator& op, Index m) {
  if (m < 0 || m >= op.size()) {
    throw InvalidParameter("vertex id " + std::to_string(m) +
                           " out of range [0, " + std::to_string(op.size()) +
                           ")");
  }
}

void check_sigma_rho(double sigma, double rho) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidParameter("sigma must be finite and nonnegative");
  }
  if (!std::isfinite(rho) || rho < 0.0 || rho > 1.0) {
    throw InvalidParameter("rho must lie in [0, 1]");
  }
}

void check_open_bounds(double lower, double upper) {
  if (!(lower > 0.0) || !(lower <= upper) || !(upper < 1.0)) {
    throw InvalidParameter("bounds must satisfy 0 < L <= U < 1");
  }
}

/// Positive entries of row m.
std::vector<std::pair<Index, double>> positive_row(const DSOperator& op,
                                                   Index m) {
  check_vertex(op, m);
  auto row = op.matrix().row(m);
  std::erase_if(row, [](const auto& e) { return !(e.second > 0.0); });
  return row;
}

bool same(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void validate_moments(const SignalMoments& moments) {
  if (!std::isfinite(moments.mean)) throw InvalidParameter("mean must be finite");
  check_sigma_rho(moments.sigma, moments.rho);
}

RandomSignalModel RandomSignalModel::uniform(const SignalMoments& moments) {
  validate_moments(moments);
  RandomSignalModel model;
  model.shared_ = moments;
  return model;
}

RandomSignalModel RandomSignalModel::per_neighborhood(
    const Graph& graph, std::vector<SignalMoments> moments) {
  if (static_cast<Index>(moments.size()) != graph.n_vertices()) {
    throw InvalidParameter("need one moment record per vertex");
  }
  for (const auto& mo : moments) validate_moments(mo);

  // First neighbourhood seen for each vertex and for each unordered pair.
  std::vector<Index> owner(moments.size(), -1);
  std::map<std::pair<Index, Index>, Index> pair_owner;
  for (Index m = 0; m < graph.n_vertices(); ++m) {
    const auto hood = incoming_neighborhood(graph, m);
    const auto& mine = moments[static_cast<std::size_t>(m)];
    for (std::size_t a = 0; a < hood.members.size(); ++a) {
      const Index n = hood.members[a];
      Index& first = owner[static_cast<std::size_t>(n)];
      if (first < 0) {
        first = m;
      } else {
        const auto& theirs = moments[static_cast<std::size_t>(first)];
        if (!same(theirs.mean, mine.mean) || !same(theirs.sigma, mine.sigma)) {
          throw InvalidParameter(
              "conflicting moments for vertex " + std::to_string(n) +
              " shared by neighbourhoods " + std::to_string(first) + " and " +
              std::to_string(m));
        }
      }
      for (std::size_t b = a + 1; b < hood.members.size(); ++b) {
        const auto [it, inserted] =
            pair_owner.try_emplace({n, hood.members[b]}, m);
        if (inserted) continue;
        const auto& theirs = moments[static_cast<std::size_t>(it->second)];
        if (!same(theirs.rho, mine.rho)) {
          throw InvalidParameter(
              "conflicting correlation for pair (" + std::to_string(n) + ", " +
              std::to_string(hood.members[b]) + ") shared by neighbourhoods " +
              std::to_string(it->second) + " and " + std::to_string(m));
        }
      }
    }
  }
  RandomSignalModel model;
  model.per_vertex_ = std::move(moments);
  return model;
}

const SignalMoments& RandomSignalModel::moments(Index m) const {
  if (shared_) return *shared_;
  if (m < 0 || m >= static_cast<Index>(per_vertex_.size())) {
    throw InvalidParameter("vertex id " + std::to_string(m) +
                           " has no moments in this model");
  }
  return per_vertex_[static_cast<std::size_t>(m)];
}

LocalBounds local_bounds(const DSOperator& op, Index m) {
  const auto row = positive_row(op, m);
  if (row.empty()) {
    throw InvalidParameter("row " + std::to_string(m) +
                           " has no positive entries");
  }
  LocalBounds b{row.front().second, row.front().second,
                static_cast<Index>(row.size())};
  for (const auto& [n, v] : row) {
    b.lower = std::min(b.lower, v);
    b.upper = std::max(b.upper, v);
  }
  return b;
}

double row_energy(const DSOperator& op, Index m) {
  double total = 0.0;
  for (const auto& [n, v] : positive_row(op, m)) total += v * v;
  return total;
}

double amgm_bias_term(double lower, double upper) {
  if (!(lower > 0.0) || !(upper >= lower) || !std::isfinite(upper)) {
    throw InvalidParameter("AM-GM term needs 0 < L <= U");
  }
  // (L + U)^2 / (4 L U) written as 1 + (U - L)^2 / (4 L U) so that it is
  // exactly 1 when L == U.
  const double gap = upper - lower;
  return 1.0 + gap * gap / (4.0 * lower * upper);
}

double kantorovich_bound(const DSOperator& op, Index m) {
  const LocalBounds b = local_bounds(op, m);
  const double bound =
      amgm_bias_term(b.lower, b.upper) / static_cast<double>(b.size);
  const double energy = row_energy(op, m);
  if (energy > bound * (1.0 + 1e-12) + 1e-15) {
    throw Error(ErrorKind::kNumericalFailure,
                "row energy exceeds Kantorovich bound on row " +
                    std::to_string(m));
  }
  return bound;
}

double variance_upper_bound(const DSOperator& op, Index m, double sigma,
                            double rho) {
  check_sigma_rho(sigma, rho);
  const auto n_m = static_cast<double>(positive_row(op, m).size());
  return sigma * sigma * (1.0 + n_m * rho) * row_energy(op, m);
}

double exact_shift_variance(const DSOperator& op, Index m, double sigma,
                            double rho) {
  check_sigma_rho(sigma, rho);
  double sum = 0.0;
  double energy = 0.0;
  for (const auto& [n, v] : positive_row(op, m)) {
    sum += v;
    energy += v * v;
  }
  // sum_{n != k} S_mn S_mk = (sum S)^2 - sum S^2
  const double cross = std::max(sum * sum - energy, 0.0);
  return sigma * sigma * (energy + rho * cross);
}

double asymptotic_variance_bound(double sigma, double rho, double lower,
                                 double upper) {
  check_sigma_rho(sigma, rho);
  check_open_bounds(lower, upper);
  return rho * sigma * sigma * amgm_bias_term(lower, upper);
}

PowerBounds l2_upper_bound(double mu, double sigma, double rho, double lower,
                           double upper) {
  if (!std::isfinite(mu)) throw InvalidParameter("mean must be finite");
  const double mean_power = mu * mu;
  return PowerBounds{
      mean_power,
      mean_power + asymptotic_variance_bound(sigma, rho, lower, upper)};
}

GraphSignal sample_local_signal(const SignalMoments& moments,
                                const Neighborhood& neighborhood,
                                std::uint64_t seed, std::uint64_t stream,
                                const StandardSampler& sampler) {
  validate_moments(moments);
  const StandardSampler& draw = sampler ? sampler : gaussian_sampler();
  const auto size = static_cast<std::size_t>(neighborhood.size());
  std::vector<double> z(size + 1);
  RandomStream rng(seed, stream);
  draw(rng, z);

  const double shared = std::sqrt(moments.rho);
  const double own = std::sqrt(1.0 - moments.rho);
  GraphSignal x(neighborhood.size());
  for (std::size_t i = 0; i < size; ++i) {
    x(static_cast<Index>(i)) =
        moments.mean + moments.sigma * (shared * z[0] + own * z[i + 1]);
  }
  return x;
}

GraphSignal sample_local_signal(const RandomSignalModel& model,
                                const Neighborhood& neighborhood,
                                std::uint64_t seed, std::uint64_t stream,
                                const StandardSampler& sampler) {
  return sample_local_signal(model.moments(neighborhood.center), neighborhood,
                             seed, stream, sampler);
}

ShiftStats monte_carlo_shift_stats(const DSOperator& op, Index m,
                                   const RandomSignalModel& model,
                                   const MonteCarloOptions& options) {
  if (options.trials < 2) {
    throw InvalidParameter("Monte Carlo needs at least 2 trials");
  }
  const auto row = positive_row(op, m);
  if (row.empty()) {
    throw InvalidParameter("row " + std::to_string(m) +
                           " has no positive entries");
  }
  const SignalMoments& mo = model.moments(m);
  const StandardSampler sampler =
      options.sampler ? options.sampler : gaussian_sampler();

  const auto trials = static_cast<std::size_t>(options.trials);
  std::vector<double> shifted(trials);
  const double shared = std::sqrt(mo.rho);
  const double own = std::sqrt(1.0 - mo.rho);

  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<double> z(row.size() + 1);
    for (std::size_t t = begin; t < end; ++t) {
      RandomStream rng(options.seed, t);
      sampler(rng, z);
      double s = 0.0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        const double x = mo.mean + mo.sigma * (shared * z[0] + own * z[i + 1]);
        s += row[i].second * x;
      }
      shifted[t] = s;
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(options.threads, 1, trials);
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  // Aggregation in trial order keeps the result schedule-independent.
  const double count = static_cast<double>(trials);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double s : shifted) {
    sum += s;
    sum_sq += s * s;
  }
  ShiftStats stats;
  stats.trials = options.trials;
  stats.mean = sum / count;
  stats.power = sum_sq / count;

  double m2 = 0.0;
  double m4 = 0.0;
  double power_dev = 0.0;
  for (double s : shifted) {
    const double d = s - stats.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
    const double p = s * s - stats.power;
    power_dev += p * p;
  }
  stats.variance = m2 / (count - 1.0);
  stats.stderr_mean = std::sqrt(stats.variance / count);
  stats.stderr_power = std::sqrt(power_dev / (count - 1.0) / count);
  const double fourth = m4 / count;
  const double var_of_var =
      (fourth - stats.variance * stats.variance * (count - 3.0) / (count - 1.0)) /
      count;
  stats.stderr_variance = std::sqrt(std::max(var_of_var, 0.0));
  return stats;
}

BoundsReport compute_bounds_report(const DSOperator& op, Index m,
                                   const SignalMoments& moments,
                                   const std::optional<MonteCarloOptions>& mc) {
  validate_moments(moments);
  BoundsReport r;
  r.vertex = m;
  r.moments = moments;
  r.local = local_bounds(op, m);
  r.kantorovich = kantorovich_bound(op, m);
  r.row_energy = row_energy(op, m);
  r.variance_exact = exact_shift_variance(op, m, moments.sigma, moments.rho);
  r.variance_bound = variance_upper_bound(op, m, moments.sigma, moments.rho);
  r.power_lower = moments.mean * moments.mean;
  if (r.local.upper < 1.0) {
    r.variance_asymptotic = asymptotic_variance_bound(
        moments.sigma, moments.rho, r.local.lower, r.local.upper);
    r.power_upper = l2_upper_bound(moments.mean, moments.sigma, moments.rho,
                                   r.local.lower, r.local.upper)
                        .upper;
  }
  if (mc) {
    r.monte_carlo = monte_carlo_shift_stats(
        op, m, RandomSignalModel::uniform(moments), *mc);
  }
  return r;
}

}  // namespace dsgso
