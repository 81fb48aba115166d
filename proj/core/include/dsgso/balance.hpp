#pragma once

#include "dsgso/graph.hpp"
#include "dsgso/matrix.hpp"

namespace dsgso {

struct BalanceOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

struct BalanceResult;

/// Sinkhorn-Knopp alternating normalisation.
///
/// Starts from r = 1 and repeats c <- 1 / (W^T r), r <- 1 / (W c) until the
/// worst row or column sum of diag(r) W diag(c) is within `tol` of one.
///
/// Throws Unbalanceable for empty rows/columns (checked before iterating),
/// NotConverged when `max_iter` sweeps do not reach `tol` or a scaling
/// entry underflows below 1e-300.
BalanceResult sinkhorn_knopp(const Matrix& weights,
                             const BalanceOptions& options = {});
BalanceResult sinkhorn_knopp(const Graph& graph,
                             const BalanceOptions& options = {});

/// Doubly stochastic shift operator: nonnegative, unit row and column sums.
class DSOperator {
 public:
  /// Wraps an existing matrix after checking it is doubly stochastic to
  /// `tol`. Throws InvalidParameter otherwise.
  static DSOperator from_matrix(Matrix matrix, double tol = 1e-8);

  const Matrix& matrix() const { return matrix_; }
  Index size() const { return matrix_.rows(); }

  /// Worst row/column sum residual measured when the operator was built.
  double tolerance_achieved() const { return tolerance_achieved_; }
  /// Sinkhorn sweeps used to build it; 0 when wrapped from a matrix.
  int iterations_used() const { return iterations_used_; }

 private:
  friend BalanceResult sinkhorn_knopp(const Matrix&, const BalanceOptions&);

  DSOperator(Matrix matrix, double tolerance_achieved, int iterations_used)
      : matrix_(std::move(matrix)),
        tolerance_achieved_(tolerance_achieved),
        iterations_used_(iterations_used) {}

  Matrix matrix_;
  double tolerance_achieved_ = 0.0;
  int iterations_used_ = 0;
};

/// S = diag(row_scaling) * W * diag(col_scaling).
struct BalanceResult {
  DSOperator op;
  Vector row_scaling;
  Vector col_scaling;
};

struct DSDiagnostics {
  double max_row_residual = 0.0;
  double max_col_residual = 0.0;
  double min_entry = 0.0;
  bool passed = false;

  double residual() const {
    return max_row_residual > max_col_residual ? max_row_residual
                                               : max_col_residual;
  }
};

/// Throws InvalidParameter for a non-square matrix.
DSDiagnostics verify_doubly_stochastic(const Matrix& matrix, double tol);

}  // namespace dsgso
