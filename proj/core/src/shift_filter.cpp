#include "dsgso/shift_filter.hpp"

#include "dsgso/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace dsgso {
namespace {

constexpr std::uint64_t kPowerIterationSeed = 0x5eed'd5d5'0f1e'1d00ULL;
constexpr int kPowerIterationCap = 100000;
constexpr double kPowerIterationTol = 1e-10;

void check_length(const DSOperator& op, const GraphSignal& x) {
  if (x.size() != op.size()) {
    throw InvalidParameter("signal has " + std::to_string(x.size()) +
                           " entries but the operator is " +
                           std::to_string(op.size()) + "x" +
                           std::to_string(op.size()));
  }
}

double mean_residual(const GraphSignal& x, double mean) {
  if (x.size() == 0) return 0.0;
  return (x.array() - mean).abs().maxCoeff();
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  std::mt19937_64 rng(kPowerIterationSeed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = unit(rng);
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < kPowerIterationCap; ++it) {
    const Vector w = a.multiply_transposed(a.multiply(v));
    lambda = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    if ((w - lambda * v).norm() <= kPowerIterationTol * lambda) break;
    v = w / wn;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace

FilterSpec::FilterSpec(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) {
    throw InvalidParameter("filter needs at least one coefficient");
  }
  for (double h : coefficients_) {
    if (!std::isfinite(h)) throw InvalidParameter("non-finite filter coefficient");
  }
}

double FilterSpec::absolute_gain() const {
  double total = 0.0;
  for (double h : coefficients_) total += std::abs(h);
  return total;
}

GraphSignal apply_shift(const DSOperator& op, const GraphSignal& x) {
  check_length(op, x);
  return op.matrix().multiply(x);
}

GraphSignal apply_filter(const DSOperator& op, const FilterSpec& filter,
                         const GraphSignal& x) {
  check_length(op, x);
  const auto& h = filter.coefficients();
  // y = h_0 x + S (h_1 x + S (h_2 x + ...))
  GraphSignal y = h.back() * x;
  for (auto k = static_cast<std::ptrdiff_t>(h.size()) - 2; k >= 0; --k) {
    y = op.matrix().multiply(y) + h[static_cast<std::size_t>(k)] * x;
  }
  return y;
}

GraphSignal diffuse(const DSOperator& op, const GraphSignal& x, int steps) {
  check_length(op, x);
  if (steps < 0) throw InvalidParameter("diffusion step count must be >= 0");
  GraphSignal y = x;
  for (int k = 0; k < steps; ++k) y = op.matrix().multiply(y);
  return y;
}

DiffusionReport diffuse_to_mean(const DSOperator& op, const GraphSignal& x,
                                const DiffusionOptions& options) {
  check_length(op, x);
  if (options.max_steps < 0 || options.stall_window <= 0) {
    throw InvalidParameter("invalid diffusion options");
  }
  const double target = x.size() > 0 ? x.mean() : 0.0;

  DiffusionReport report;
  report.signal = x;
  report.residual = mean_residual(x, target);
  report.residual_history.push_back(report.residual);
  if (report.residual <= options.tol) {
    report.status = DiffusionStatus::kConverged;
    return report;
  }
  const auto window = static_cast<std::size_t>(options.stall_window);
  for (int k = 1; k <= options.max_steps; ++k) {
    report.signal = op.matrix().multiply(report.signal);
    report.steps = k;
    report.residual = mean_residual(report.signal, target);
    report.residual_history.push_back(report.residual);
    if (report.residual <= options.tol) {
      report.status = DiffusionStatus::kConverged;
      return report;
    }
    const auto& hist = report.residual_history;
    if (hist.size() > window && hist.back() >= hist[hist.size() - 1 - window]) {
      report.status = DiffusionStatus::kNonConvergent;
      return report;
    }
  }
  report.status = DiffusionStatus::kMaxSteps;
  return report;
}

NormType parse_norm_type(std::string_view text) {
  if (text == "1") return NormType::kL1;
  if (text == "2") return NormType::kL2;
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinity") return NormType::kInf;
  throw InvalidParameter("unsupported norm '" + std::string(text) +
                         "', expected 1, 2 or inf");
}

double matrix_norm(const Matrix& a, NormType p) {
  if (!a.is_square()) throw InvalidParameter("matrix norm needs a square matrix");
  if (a.rows() == 0) return 0.0;
  switch (p) {
    case NormType::kL1:
    case NormType::kInf: {
      Vector abs_sums = Vector::Zero(a.rows());
      a.for_each_nonzero([&](Index i, Index j, double v) {
        abs_sums(p == NormType::kL1 ? j : i) += std::abs(v);
      });
      return abs_sums.maxCoeff();
    }
    case NormType::kL2:
      return spectral_norm(a);
  }
  throw InvalidParameter("unsupported norm type");
}

double vector_norm(const GraphSignal& x, NormType p) {
  if (x.size() == 0) return 0.0;
  switch (p) {
    case NormType::kL1:
      return x.lpNorm<1>();
    case NormType::kL2:
      return x.norm();
    case NormType::kInf:
      return x.lpNorm<Eigen::Infinity>();
  }
  throw InvalidParameter("unsupported norm type");
}

WssDiagnostics wss_check(const DSOperator& op, const Vector& mean,
                         const DenseMatrix& covariance, double tol) {
  const Index n = op.size();
  if (mean.size() != n || covariance.rows() != n || covariance.cols() != n) {
    throw InvalidParameter("mean/covariance dimensions do not match operator");
  }
  if (n > 0 && (covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidParameter("covariance is not symmetric");
  }
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(covariance,
                                                   Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      throw InvalidParameter("covariance is not positive semidefinite");
    }
  }

  WssDiagnostics d;
  if (n == 0) {
    d.passed = true;
    return d;
  }
  const DenseMatrix s = op.matrix().to_dense();
  d.mean_residual = (s * mean - mean).lpNorm<Eigen::Infinity>();
  d.covariance_residual =
      (s * covariance * s.transpose() - covariance).cwiseAbs().maxCoeff();
  d.passed = d.mean_residual <= tol && d.covariance_residual <= tol;
  return d;
}

}  // namespace dsgso
