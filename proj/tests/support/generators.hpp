#pragma once

// Random inputs shared by the unit, property and acceptance tests.

#include "dsgso/balance.hpp"
#include "dsgso/matrix.hpp"
#include "dsgso/shift_filter.hpp"

#include <random>
#include <vector>

namespace dsgso::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

/// Dense matrix with every entry drawn from [lo, hi].
inline Matrix random_positive_matrix(Rng& rng, Index n, double lo = 0.1,
                                     double hi = 1.0) {
  DenseMatrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = uniform(rng, lo, hi);
  }
  return Matrix(std::move(a));
}

/// Positive diagonal plus a symmetric off-diagonal pattern of the given
/// density, with independent values. Every such pattern has total support
/// (each off-diagonal entry lies on a transposition), so it balances.
inline Matrix random_sparse_pattern(Rng& rng, Index n, double density,
                                    Storage storage = Storage::kAuto) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, uniform(rng, 0.1, 1.0)});
    for (Index j = i + 1; j < n; ++j) {
      if (uniform(rng, 0.0, 1.0) < density) {
        t.push_back({i, j, uniform(rng, 0.1, 1.0)});
        t.push_back({j, i, uniform(rng, 0.1, 1.0)});
      }
    }
  }
  return Matrix::from_triplets(n, n, t, storage);
}

/// Balanced to 1e-14 rather than the default 1e-10: column-sum error feeds
/// straight into sum(Sx) - sum(x), and several checks are tighter than
/// 1e-10 * ||x||_1.
inline constexpr double kTightBalance = 1e-14;

inline DSOperator random_operator(Rng& rng, Index n) {
  return sinkhorn_knopp(random_positive_matrix(rng, n), {kTightBalance, 10000}).op;
}

inline DSOperator uniform_operator(Index n) {
  return DSOperator::from_matrix(
      Matrix(DenseMatrix::Constant(n, n, 1.0 / static_cast<double>(n))));
}

inline DSOperator dense_operator(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Index>(rows.size());
  DenseMatrix a(n, n);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return DSOperator::from_matrix(Matrix(std::move(a)), 1e-12);
}

inline GraphSignal random_signal(Rng& rng, Index n, double lo = -1.0,
                                 double hi = 1.0) {
  GraphSignal x(n);
  for (Index i = 0; i < n; ++i) x(i) = uniform(rng, lo, hi);
  return x;
}

inline GraphSignal signal(std::initializer_list<double> values) {
  GraphSignal x(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) x(i++) = v;
  return x;
}

}  // namespace dsgso::testing
