#pragma once

#include "dsgso/balance.hpp"
#include "dsgso/matrix.hpp"

#include <optional>
#include <vector>

namespace dsgso {

/// Permutation as an image array: row i maps to column image[i].
using Permutation = std::vector<Index>;

struct BirkhoffTerm {
  double coefficient = 0.0;
  Permutation permutation;
};

struct BirkhoffDecomposition {
  Index dimension = 0;
  std::vector<BirkhoffTerm> terms;

  Index count() const { return static_cast<Index>(terms.size()); }
  double coefficient_sum() const;
};

/// Upper bound (n - 1)^2 + 1 on the number of permutations needed.
Index birkhoff_term_bound(Index n);

/// Perfect matching of rows to columns on a bipartite graph given as
/// per-row ascending column lists. Augmenting paths are tried in ascending
/// row and column order, so the result is deterministic. Returns nullopt
/// when no perfect matching exists.
std::optional<Permutation> find_perfect_matching(
    const std::vector<std::vector<Index>>& adjacency, Index n_cols);

struct BirkhoffOptions {
  /// Residual entries at or below this are structural zeros.
  double zero_tol = 1e-12;
};

/// Greedy Birkhoff-von Neumann extraction.
///
/// Repeatedly matches rows to columns over the residual entries above
/// `zero_tol`, takes the smallest matched entry as the coefficient and
/// subtracts that permutation. Coefficients are renormalised to sum to one
/// once the residual mass is negligible. The negligible-mass level is
/// n * max(zero_tol, 2 n eps) where eps is the operator's own row/column
/// sum residual, since an operator balanced to eps cannot be peeled below
/// that level.
///
/// Throws DecompositionFailed if no perfect matching exists while the
/// residual mass is still above that level.
BirkhoffDecomposition birkhoff_decompose(const DSOperator& op,
                                         const BirkhoffOptions& options = {});

/// sum_i a_i P_i. Throws InvalidParameter when a permutation has the wrong
/// length or is not a bijection on [0, n).
Matrix reconstruct(const BirkhoffDecomposition& decomposition, Index n);

}  // namespace dsgso
