#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace dsgso {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Dimension above which matrices built from triplets default to sparse
/// storage.
inline constexpr Index kSparseThreshold = 512;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

enum class Storage { kAuto, kDense, kSparse };

/// Real matrix held either densely or in row-major compressed form.
///
/// Every algorithm in the library reads matrices through this type, so the
/// same code path serves desk-sized dense operators and large sparse ones.
/// Explicitly stored zeros are never reported as nonzeros.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(DenseMatrix dense) : data_(std::move(dense)) {}
  explicit Matrix(SparseMatrix sparse) : data_(std::move(sparse)) {
    std::get<SparseMatrix>(data_).makeCompressed();
  }

  /// Duplicate (row, col) entries are summed.
  static Matrix from_triplets(Index rows, Index cols,
                              std::span<const Triplet> triplets,
                              Storage storage = Storage::kAuto);
  static Matrix identity(Index n, Storage storage = Storage::kAuto);

  Index rows() const;
  Index cols() const;
  bool is_square() const { return rows() == cols(); }
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(data_); }

  /// Number of entries that are not exactly zero.
  Index nonzeros() const;

  double operator()(Index row, Index col) const;

  Vector multiply(const Vector& x) const;
  Vector multiply_transposed(const Vector& x) const;
  Vector row_sums() const;
  Vector col_sums() const;

  /// diag(row_scale) * A * diag(col_scale), same storage as A.
  Matrix scaled(const Vector& row_scale, const Vector& col_scale) const;
  Matrix transposed() const;
  Matrix with_storage(Storage storage) const;

  /// Nonzero entries of one row in ascending column order.
  std::vector<std::pair<Index, double>> row(Index i) const;

  /// Visits every nonzero entry as f(row, col, value), row-major order.
  template <typename F>
  void for_each_nonzero(F&& f) const {
    if (const auto* d = std::get_if<DenseMatrix>(&data_)) {
      for (Index i = 0; i < d->rows(); ++i) {
        for (Index j = 0; j < d->cols(); ++j) {
          const double v = (*d)(i, j);
          if (v != 0.0) f(i, j, v);
        }
      }
      return;
    }
    const auto& s = std::get<SparseMatrix>(data_);
    for (Index i = 0; i < s.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
        if (it.value() != 0.0) f(it.row(), it.col(), it.value());
      }
    }
  }

  DenseMatrix to_dense() const;
  SparseMatrix to_sparse() const;

  const DenseMatrix* dense() const { return std::get_if<DenseMatrix>(&data_); }
  const SparseMatrix* sparse() const {
    return std::get_if<SparseMatrix>(&data_);
  }

 private:
  std::variant<DenseMatrix, SparseMatrix> data_;
};

/// Largest absolute entrywise difference. Shapes must agree.
double max_abs_difference(const Matrix& a, const Matrix& b);

}  // namespace dsgso
