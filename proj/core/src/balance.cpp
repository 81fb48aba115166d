#include "dsgso/balance.hpp"

#include "dsgso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dsgso {
namespace {

constexpr double kScalingFloor = 1e-300;

double unit_residual(const Vector& scale, const Vector& sums) {
  return (scale.cwiseProduct(sums).array() - 1.0).abs().maxCoeff();
}

bool scaling_ok(const Vector& v) {
  return v.allFinite() && v.minCoeff() >= kScalingFloor;
}

std::string format_residual(double r) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << r;
  return os.str();
}

}  // namespace

DSOperator DSOperator::from_matrix(Matrix matrix, double tol) {
  const DSDiagnostics diag = verify_doubly_stochastic(matrix, tol);
  if (!diag.passed) {
    throw InvalidParameter(
        "matrix is not doubly stochastic (row residual " +
        format_residual(diag.max_row_residual) + ", column residual " +
        format_residual(diag.max_col_residual) + ", min entry " +
        format_residual(diag.min_entry) + ")");
  }
  return DSOperator(std::move(matrix), diag.residual(), 0);
}

BalanceResult sinkhorn_knopp(const Matrix& weights,
                             const BalanceOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidParameter("tol must be positive");
  if (options.max_iter <= 0) throw InvalidParameter("max_iter must be positive");

  const WeightDiagnostics check = validate_weights(weights);
  if (!check.square) throw InvalidParameter(check.issues.front());
  if (weights.rows() == 0) throw InvalidParameter("empty weight matrix");
  if (check.negative_entries > 0 || check.non_finite_entries > 0) {
    throw InvalidParameter("weights must be finite and nonnegative");
  }
  if (!check.zero_rows.empty()) {
    throw Unbalanceable("empty row " + std::to_string(check.zero_rows.front()));
  }
  if (!check.zero_cols.empty()) {
    throw Unbalanceable("empty column " +
                        std::to_string(check.zero_cols.front()));
  }

  const Index n = weights.rows();
  Vector r = Vector::Ones(n);
  Vector c(n);
  Vector col_sums = weights.multiply_transposed(r);
  double residual = std::numeric_limits<double>::infinity();
  int sweep = 0;
  while (sweep < options.max_iter) {
    ++sweep;
    c = col_sums.cwiseInverse();
    const Vector row_sums = weights.multiply(c);
    r = row_sums.cwiseInverse();
    if (!scaling_ok(c) || !scaling_ok(r)) {
      throw NotConverged(residual, sweep,
                         "scaling vector underflow after " +
                             std::to_string(sweep) + " sweeps");
    }
    col_sums = weights.multiply_transposed(r);
    residual = std::max(unit_residual(r, row_sums), unit_residual(c, col_sums));
    if (residual <= options.tol) break;
  }
  if (residual > options.tol) {
    throw NotConverged(residual, sweep,
                       "not converged: residual " + format_residual(residual) +
                           " after " + std::to_string(sweep) +
                           " sweeps (weights may lack total support)");
  }

  Matrix s = weights.scaled(r, c);
  const DSDiagnostics diag = verify_doubly_stochastic(s, options.tol);
  return BalanceResult{DSOperator(std::move(s), diag.residual(), sweep),
                       std::move(r), std::move(c)};
}

BalanceResult sinkhorn_knopp(const Graph& graph, const BalanceOptions& options) {
  return sinkhorn_knopp(graph.weights(), options);
}

DSDiagnostics verify_doubly_stochastic(const Matrix& matrix, double tol) {
  if (!matrix.is_square()) {
    throw InvalidParameter("doubly stochastic check needs a square matrix");
  }
  DSDiagnostics d;
  if (matrix.rows() == 0) {
    d.passed = true;
    return d;
  }
  d.max_row_residual = (matrix.row_sums().array() - 1.0).abs().maxCoeff();
  d.max_col_residual = (matrix.col_sums().array() - 1.0).abs().maxCoeff();
  if (const auto* dense = matrix.dense()) {
    d.min_entry = dense->minCoeff();
  } else {
    const bool has_structural_zero =
        matrix.sparse()->nonZeros() < matrix.rows() * matrix.cols();
    double min_entry = has_structural_zero
                           ? 0.0
                           : std::numeric_limits<double>::infinity();
    matrix.for_each_nonzero([&min_entry](Index, Index, double v) {
      min_entry = std::min(min_entry, v);
    });
    d.min_entry = min_entry;
  }
  d.passed = std::isfinite(d.max_row_residual) &&
             std::isfinite(d.max_col_residual) && d.min_entry >= 0.0 &&
             d.residual() <= tol;
  return d;
}

}  // namespace dsgso
