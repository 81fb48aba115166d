#include "dsgso/matrix.hpp"

#include "dsgso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsgso {
namespace {

Storage resolve(Storage storage, Index n) {
  if (storage != Storage::kAuto) return storage;
  return n > kSparseThreshold ? Storage::kSparse : Storage::kDense;
}

}  // namespace

Matrix Matrix::from_triplets(Index rows, Index cols,
                             std::span<const Triplet> triplets,
                             Storage storage) {
  if (rows < 0 || cols < 0) {
    throw InvalidParameter("matrix dimensions must be nonnegative");
  }
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidParameter("triplet (" + std::to_string(t.row) + ", " +
                             std::to_string(t.col) + ") outside " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  if (resolve(storage, std::max(rows, cols)) == Storage::kDense) {
    DenseMatrix d = DenseMatrix::Zero(rows, cols);
    for (const auto& t : triplets) d(t.row, t.col) += t.value;
    return Matrix(std::move(d));
  }
  std::vector<Eigen::Triplet<double>> eigen_triplets;
  eigen_triplets.reserve(triplets.size());
  for (const auto& t : triplets) eigen_triplets.emplace_back(t.row, t.col, t.value);
  SparseMatrix s(rows, cols);
  s.setFromTriplets(eigen_triplets.begin(), eigen_triplets.end());
  s.prune(0.0);
  return Matrix(std::move(s));
}

Matrix Matrix::identity(Index n, Storage storage) {
  if (resolve(storage, n) == Storage::kDense) {
    return Matrix(DenseMatrix(DenseMatrix::Identity(n, n)));
  }
  SparseMatrix s(n, n);
  s.setIdentity();
  return Matrix(std::move(s));
}

Index Matrix::rows() const {
  return std::visit([](const auto& m) { return Index{m.rows()}; }, data_);
}

Index Matrix::cols() const {
  return std::visit([](const auto& m) { return Index{m.cols()}; }, data_);
}

Index Matrix::nonzeros() const {
  Index count = 0;
  for_each_nonzero([&count](Index, Index, double) { ++count; });
  return count;
}

double Matrix::operator()(Index row, Index col) const {
  if (row < 0 || row >= rows() || col < 0 || col >= cols()) {
    throw InvalidParameter("matrix index out of range");
  }
  if (const auto* d = dense()) return (*d)(row, col);
  return sparse()->coeff(row, col);
}

Vector Matrix::multiply(const Vector& x) const {
  if (x.size() != cols()) {
    throw InvalidParameter("dimension mismatch: matrix has " +
                           std::to_string(cols()) + " columns, vector has " +
                           std::to_string(x.size()) + " entries");
  }
  return std::visit([&x](const auto& m) -> Vector { return m * x; }, data_);
}

Vector Matrix::multiply_transposed(const Vector& x) const {
  if (x.size() != rows()) {
    throw InvalidParameter("dimension mismatch: matrix has " +
                           std::to_string(rows()) + " rows, vector has " +
                           std::to_string(x.size()) + " entries");
  }
  return std::visit(
      [&x](const auto& m) -> Vector { return m.transpose() * x; }, data_);
}

Vector Matrix::row_sums() const {
  return multiply(Vector::Ones(cols()));
}

Vector Matrix::col_sums() const {
  return multiply_transposed(Vector::Ones(rows()));
}

Matrix Matrix::scaled(const Vector& row_scale, const Vector& col_scale) const {
  if (row_scale.size() != rows() || col_scale.size() != cols()) {
    throw InvalidParameter("scaling vector length does not match matrix");
  }
  if (const auto* d = dense()) {
    return Matrix(DenseMatrix(row_scale.asDiagonal() * (*d) *
                              col_scale.asDiagonal()));
  }
  SparseMatrix s = *sparse();
  for (Index i = 0; i < s.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
      it.valueRef() *= row_scale(it.row()) * col_scale(it.col());
    }
  }
  return Matrix(std::move(s));
}

Matrix Matrix::transposed() const {
  if (const auto* d = dense()) return Matrix(DenseMatrix(d->transpose()));
  return Matrix(SparseMatrix(sparse()->transpose()));
}

Matrix Matrix::with_storage(Storage storage) const {
  storage = resolve(storage, std::max(rows(), cols()));
  if (storage == Storage::kDense) {
    return dense() ? *this : Matrix(to_dense());
  }
  return sparse() ? *this : Matrix(to_sparse());
}

std::vector<std::pair<Index, double>> Matrix::row(Index i) const {
  if (i < 0 || i >= rows()) throw InvalidParameter("row index out of range");
  std::vector<std::pair<Index, double>> entries;
  if (const auto* d = dense()) {
    for (Index j = 0; j < d->cols(); ++j) {
      if ((*d)(i, j) != 0.0) entries.emplace_back(j, (*d)(i, j));
    }
    return entries;
  }
  for (SparseMatrix::InnerIterator it(*sparse(), i); it; ++it) {
    if (it.value() != 0.0) entries.emplace_back(it.col(), it.value());
  }
  return entries;
}

DenseMatrix Matrix::to_dense() const {
  if (const auto* d = dense()) return *d;
  return DenseMatrix(*sparse());
}

SparseMatrix Matrix::to_sparse() const {
  if (const auto* s = sparse()) return *s;
  SparseMatrix s = dense()->sparseView(0.0, 0.0);
  s.makeCompressed();
  return s;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidParameter("matrix shapes differ");
  }
  if (a.dense() && b.dense()) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return (*a.dense() - *b.dense()).cwiseAbs().maxCoeff();
  }
  const SparseMatrix diff = a.to_sparse() - b.to_sparse();
  double worst = 0.0;
  for (Index i = 0; i < diff.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(diff, i); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

}  // namespace dsgso
