#include "dsgso/birkhoff.hpp"

#include "dsgso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dsgso {
namespace {

/// Kuhn-style augmenting paths with a persistent partial matching so that
/// each extraction step only re-augments the rows it lost.
class Matcher {
 public:
  Matcher(const std::vector<std::vector<Index>>& adjacency, Index n_cols)
      : adjacency_(adjacency),
        row_match_(adjacency.size(), -1),
        col_match_(static_cast<std::size_t>(n_cols), -1),
        visited_(static_cast<std::size_t>(n_cols), 0) {}

  /// Tries to match every unmatched row; false if some row cannot be.
  bool complete() {
    for (std::size_t row = 0; row < row_match_.size(); ++row) {
      if (row_match_[row] >= 0) continue;
      ++stamp_;
      if (!augment(static_cast<Index>(row))) return false;
    }
    return true;
  }

  void unmatch(Index row) {
    auto& col = row_match_[static_cast<std::size_t>(row)];
    if (col >= 0) col_match_[static_cast<std::size_t>(col)] = -1;
    col = -1;
  }

  const Permutation& rows() const { return row_match_; }

 private:
  bool augment(Index row) {
    for (Index col : adjacency_[static_cast<std::size_t>(row)]) {
      auto& seen = visited_[static_cast<std::size_t>(col)];
      if (seen == stamp_) continue;
      seen = stamp_;
      const Index owner = col_match_[static_cast<std::size_t>(col)];
      if (owner < 0 || augment(owner)) {
        row_match_[static_cast<std::size_t>(row)] = col;
        col_match_[static_cast<std::size_t>(col)] = row;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<Index>>& adjacency_;
  Permutation row_match_;
  std::vector<Index> col_match_;
  std::vector<unsigned> visited_;
  unsigned stamp_ = 0;
};

}  // namespace

double BirkhoffDecomposition::coefficient_sum() const {
  double total = 0.0;
  for (const auto& t : terms) total += t.coefficient;
  return total;
}

Index birkhoff_term_bound(Index n) {
  if (n <= 0) return 0;
  return (n - 1) * (n - 1) + 1;
}

std::optional<Permutation> find_perfect_matching(
    const std::vector<std::vector<Index>>& adjacency, Index n_cols) {
  if (static_cast<Index>(adjacency.size()) != n_cols) return std::nullopt;
  for (const auto& cols : adjacency) {
    for (Index c : cols) {
      if (c < 0 || c >= n_cols) throw InvalidParameter("column id out of range");
    }
  }
  Matcher matcher(adjacency, n_cols);
  if (!matcher.complete()) return std::nullopt;
  return matcher.rows();
}

BirkhoffDecomposition birkhoff_decompose(const DSOperator& op,
                                         const BirkhoffOptions& options) {
  if (!(options.zero_tol > 0.0)) {
    throw InvalidParameter("zero_tol must be positive");
  }
  const DSDiagnostics check = verify_doubly_stochastic(op.matrix(), 1e-8);
  if (!check.passed) {
    throw InvalidParameter("operator is not doubly stochastic to 1e-8");
  }

  const Index n = op.size();
  BirkhoffDecomposition out;
  out.dimension = n;
  if (n == 0) return out;

  const auto un = static_cast<std::size_t>(n);
  DenseMatrix residual = op.matrix().to_dense();
  std::vector<std::vector<Index>> adjacency(un);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (residual(i, j) > options.zero_tol) {
        adjacency[static_cast<std::size_t>(i)].push_back(j);
      } else {
        residual(i, j) = 0.0;
      }
    }
  }

  const double dn = static_cast<double>(n);
  const double mass_tol =
      dn * std::max(options.zero_tol, 2.0 * dn * check.residual());

  Matcher matcher(adjacency, n);
  for (;;) {
    const double mass = residual.sum();
    if (mass <= mass_tol) break;
    if (!matcher.complete()) {
      throw DecompositionFailed(
          mass, "decomposition failed: no perfect matching with residual "
                "mass " + std::to_string(mass));
    }
    const Permutation& perm = matcher.rows();
    double a = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) a = std::min(a, residual(i, perm[static_cast<std::size_t>(i)]));
    out.terms.push_back({a, perm});

    for (Index i = 0; i < n; ++i) {
      const Index j = perm[static_cast<std::size_t>(i)];
      double& entry = residual(i, j);
      entry -= a;
      if (entry > options.zero_tol) continue;
      entry = 0.0;
      auto& cols = adjacency[static_cast<std::size_t>(i)];
      cols.erase(std::find(cols.begin(), cols.end(), j));
      matcher.unmatch(i);
    }
  }

  const double total = out.coefficient_sum();
  if (!(total > 0.0)) {
    throw DecompositionFailed(residual.sum(), "decomposition produced no terms");
  }
  for (auto& t : out.terms) t.coefficient /= total;
  return out;
}

Matrix reconstruct(const BirkhoffDecomposition& decomposition, Index n) {
  if (n < 0) throw InvalidParameter("dimension must be nonnegative");
  std::vector<Triplet> triplets;
  triplets.reserve(decomposition.terms.size() * static_cast<std::size_t>(n));
  std::vector<char> hit(static_cast<std::size_t>(n));
  for (const auto& term : decomposition.terms) {
    if (static_cast<Index>(term.permutation.size()) != n) {
      throw InvalidParameter("permutation of length " +
                             std::to_string(term.permutation.size()) +
                             " in a decomposition of dimension " +
                             std::to_string(n));
    }
    std::fill(hit.begin(), hit.end(), 0);
    for (Index i = 0; i < n; ++i) {
      const Index j = term.permutation[static_cast<std::size_t>(i)];
      if (j < 0 || j >= n || hit[static_cast<std::size_t>(j)]) {
        throw InvalidParameter("permutation is not a bijection on [0, " +
                               std::to_string(n) + ")");
      }
      hit[static_cast<std::size_t>(j)] = 1;
      triplets.push_back({i, j, term.coefficient});
    }
  }
  return Matrix::from_triplets(n, n, triplets);
}

}  // namespace dsgso
