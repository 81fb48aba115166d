#include "dsgso/birkhoff.hpp"
#include "dsgso/errors.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace dsgso {
namespace {

using testing::dense_operator;

const Permutation kIdentity2{0, 1};
const Permutation kSwap2{1, 0};

double coefficient_of(const BirkhoffDecomposition& d, const Permutation& p) {
  double total = 0.0;
  for (const auto& t : d.terms) {
    if (t.permutation == p) total += t.coefficient;
  }
  return total;
}

TEST(Birkhoff, TermBound) {
  EXPECT_EQ(birkhoff_term_bound(1), 1);
  EXPECT_EQ(birkhoff_term_bound(2), 2);
  EXPECT_EQ(birkhoff_term_bound(8), 50);
}

TEST(Birkhoff, PermutationIsASingleTerm) {
  const DSOperator p = dense_operator({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const auto d = birkhoff_decompose(p);
  ASSERT_EQ(d.count(), 1);
  EXPECT_EQ(d.terms[0].coefficient, 1.0);
  EXPECT_EQ(d.terms[0].permutation, (Permutation{2, 0, 1}));
}

TEST(Birkhoff, UniformTwoByTwo) {
  const auto d = birkhoff_decompose(dense_operator({{0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_EQ(d.count(), 2);
  EXPECT_DOUBLE_EQ(coefficient_of(d, kIdentity2), 0.5);
  EXPECT_DOUBLE_EQ(coefficient_of(d, kSwap2), 0.5);
}

TEST(Birkhoff, UnevenTwoByTwo) {
  const auto d = birkhoff_decompose(dense_operator({{1.0 / 3, 2.0 / 3}, {2.0 / 3, 1.0 / 3}}));
  EXPECT_EQ(d.count(), 2);
  EXPECT_NEAR(coefficient_of(d, kIdentity2), 1.0 / 3, 1e-15);
  EXPECT_NEAR(coefficient_of(d, kSwap2), 2.0 / 3, 1e-15);
  EXPECT_NEAR(d.coefficient_sum(), 1.0, 1e-15);
}

TEST(Birkhoff, ReconstructHandCases) {
  BirkhoffDecomposition id{2, {{1.0, kIdentity2}}};
  EXPECT_EQ(max_abs_difference(reconstruct(id, 2), Matrix::identity(2)), 0.0);
  BirkhoffDecomposition half{2, {{0.5, kIdentity2}, {0.5, kSwap2}}};
  EXPECT_EQ(max_abs_difference(reconstruct(half, 2),
                               Matrix(DenseMatrix::Constant(2, 2, 0.5))),
            0.0);
}

TEST(Birkhoff, ReconstructRejectsMalformedTerms) {
  BirkhoffDecomposition short_perm{2, {{1.0, {0}}}};
  BirkhoffDecomposition repeated{2, {{1.0, {1, 1}}}};
  EXPECT_THROW(reconstruct(short_perm, 2), InvalidParameter);
  EXPECT_THROW(reconstruct(repeated, 2), InvalidParameter);
}

TEST(Birkhoff, BalancedEightByEightRoundTrip) {
  testing::Rng rng(8);
  const DSOperator op = testing::random_operator(rng, 8);
  const auto d = birkhoff_decompose(op);
  EXPECT_LE(max_abs_difference(reconstruct(d, 8), op.matrix()), 1e-8);
  EXPECT_LE(d.count(), birkhoff_term_bound(8));
  EXPECT_NEAR(d.coefficient_sum(), 1.0, 1e-10);
  for (const auto& t : d.terms) EXPECT_GT(t.coefficient, 0.0);
}

TEST(Birkhoff, SparseOperatorRoundTrip) {
  testing::Rng rng(4);
  const DSOperator op =
      sinkhorn_knopp(testing::random_sparse_pattern(rng, 12, 0.25, Storage::kSparse)).op;
  const auto d = birkhoff_decompose(op);
  EXPECT_LE(max_abs_difference(reconstruct(d, 12), op.matrix()), 1e-8);
  // Every permutation stays inside the support of the operator.
  for (const auto& t : d.terms) {
    for (Index i = 0; i < 12; ++i) EXPECT_GT(op.matrix()(i, t.permutation[i]), 0.0);
  }
}

TEST(Birkhoff, RejectsBadZeroTol) {
  BirkhoffOptions opt;
  opt.zero_tol = 0.0;
  EXPECT_THROW(birkhoff_decompose(dense_operator({{1, 0}, {0, 1}}), opt), InvalidParameter);
}

TEST(Matching, FindsPerfectMatching) {
  const std::vector<std::vector<Index>> adj{{0, 1}, {0}, {1, 2}};
  const auto m = find_perfect_matching(adj, 3);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(*m, (Permutation{1, 0, 2}));
}

TEST(Matching, ReportsMissingMatching) {
  const std::vector<std::vector<Index>> adj{{0}, {0}, {1, 2}};
  EXPECT_FALSE(find_perfect_matching(adj, 3).has_value());
}

// Oracle: exhaustive search over all permutations of a small bipartite graph.
TEST(Matching, AgreesWithExhaustiveSearch) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = testing::uniform_index(rng, 1, 6);
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (testing::uniform(rng, 0, 1) < 0.4) adj[static_cast<std::size_t>(i)].push_back(j);
      }
    }
    Permutation p(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    bool exists = false;
    do {
      bool ok = true;
      for (Index i = 0; i < n && ok; ++i) {
        const auto& row = adj[static_cast<std::size_t>(i)];
        ok = std::binary_search(row.begin(), row.end(), p[static_cast<std::size_t>(i)]);
      }
      exists |= ok;
    } while (!exists && std::next_permutation(p.begin(), p.end()));

    const auto found = find_perfect_matching(adj, n);
    ASSERT_EQ(found.has_value(), exists) << "trial " << trial;
    if (found) {
      for (Index i = 0; i < n; ++i) {
        const auto& row = adj[static_cast<std::size_t>(i)];
        EXPECT_TRUE(std::binary_search(row.begin(), row.end(), (*found)[static_cast<std::size_t>(i)]));
      }
    }
  }
}

}  // namespace
}  // namespace dsgso
