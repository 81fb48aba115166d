#pragma once

#include "dsgso/balance.hpp"
#include "dsgso/matrix.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace dsgso {

/// Real-valued signal, one value per vertex.
using GraphSignal = Vector;

/// Polynomial graph filter y = sum_k h_k S^k x.
class FilterSpec {
 public:
  /// Throws InvalidParameter for an empty or non-finite coefficient list.
  explicit FilterSpec(std::vector<double> coefficients);

  const std::vector<double>& coefficients() const { return coefficients_; }
  int order() const { return static_cast<int>(coefficients_.size()) - 1; }

  /// Sum of |h_k|; bounds the filter gain in every L_p norm.
  double absolute_gain() const;

 private:
  std::vector<double> coefficients_;
};

/// y = S x. Throws InvalidParameter on a length mismatch.
GraphSignal apply_shift(const DSOperator& op, const GraphSignal& x);

/// Evaluated Horner-style with one shift per order, never forming S^k.
GraphSignal apply_filter(const DSOperator& op, const FilterSpec& filter,
                         const GraphSignal& x);

/// S^k x by k repeated shifts.
GraphSignal diffuse(const DSOperator& op, const GraphSignal& x, int steps);

enum class DiffusionStatus {
  kConverged,      // reached the requested distance from mean(x) * 1
  kNonConvergent,  // residual stalled for a full window (periodic support)
  kMaxSteps,       // still decreasing when the step budget ran out
};

struct DiffusionReport {
  GraphSignal signal;
  int steps = 0;
  double residual = 0.0;  // ||S^k x - mean(x) 1||_inf
  DiffusionStatus status = DiffusionStatus::kMaxSteps;
  std::vector<double> residual_history;  // entry k is the residual after k shifts
};

struct DiffusionOptions {
  double tol = 1e-6;
  int max_steps = 1000;
  int stall_window = 10;
};

/// Shifts until the signal is within `tol` of its mean in the sup norm.
///
/// Convergence to the mean only holds for primitive operators. When the
/// residual fails to decrease over `stall_window` consecutive shifts (as for
/// a permutation or any periodic support) the run stops and reports
/// kNonConvergent instead.
DiffusionReport diffuse_to_mean(const DSOperator& op, const GraphSignal& x,
                                const DiffusionOptions& options = {});

enum class NormType { kL1, kL2, kInf };

/// Parses "1", "2", "inf" or "infinity" (any case). Throws InvalidParameter.
NormType parse_norm_type(std::string_view text);

/// Induced matrix norm. L1: max column abs sum; Inf: max row abs sum; L2:
/// sqrt of the top eigenvalue of A^T A by power iteration from a fixed-seed
/// start vector, relative tolerance 1e-10.
double matrix_norm(const Matrix& a, NormType p);

double vector_norm(const GraphSignal& x, NormType p);

struct WssDiagnostics {
  double mean_residual = 0.0;        // ||S mu - mu||_inf
  double covariance_residual = 0.0;  // max |S Sigma S^T - Sigma|
  bool passed = false;
};

/// Closed-form check of first- and second-moment invariance under the
/// shift. The operator is treated as deterministic.
///
/// Throws InvalidParameter on dimension mismatch, a covariance asymmetric
/// beyond 1e-12, or one with a negative eigenvalue.
WssDiagnostics wss_check(const DSOperator& op, const Vector& mean,
                         const DenseMatrix& covariance, double tol);

}  // namespace dsgso
