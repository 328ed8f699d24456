#include "pcm/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "pcm/error.hpp"

namespace pcm {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ArgumentError("Matrix: ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

Matrix pairwise_distances(const Matrix& points) {
  const std::size_t n = points.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = distance(points.row(i), points.row(j));
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

double asymmetry(const Matrix& m) noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

double frobenius_norm(const Matrix& m) noexcept {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return std::sqrt(s);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

}  // namespace pcm
