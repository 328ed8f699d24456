#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pcm {

// Dense row-major matrix of doubles. Rows are points, columns are features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transposed() const;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
double distance(std::span<const double> a, std::span<const double> b) noexcept;

// Full N x N Euclidean distance matrix between the rows of `points`.
Matrix pairwise_distances(const Matrix& points);

// Largest |a_ij - a_ji|.
double asymmetry(const Matrix& m) noexcept;

// Frobenius norm.
double frobenius_norm(const Matrix& m) noexcept;

Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace pcm
