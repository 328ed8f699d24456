#include "pcm/eigen.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcm/error.hpp"

namespace pcm {

namespace {

void require_symmetric(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) throw ArgumentError(std::string(who) + ": matrix must be square");
  double scale = 0.0;
  for (double v : m.values()) scale = std::max(scale, std::abs(v));
  if (asymmetry(m) > 1e-10 * std::max(1.0, scale))
    throw ArgumentError(std::string(who) + ": matrix is not symmetric");
  if (!m.all_finite()) throw NumericError(std::string(who) + ": non-finite entry");
}

// Sorts eigenpairs ascending; orients each eigenvector so its largest-magnitude
// component (first on ties) is positive.
EigenDecomposition sorted(std::vector<double> values, const Matrix& vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = values[src];
    std::size_t pivot = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (std::abs(vectors(r, src)) > std::abs(vectors(pivot, src)) + 1e-14) pivot = r;
    const double sign = vectors(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = sign * vectors(r, src);
  }
  return out;
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& matrix) {
  require_symmetric(matrix, "symmetric_eigen");
  const auto n = static_cast<Eigen::Index>(matrix.rows());
  if (n == 0) return {};
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = 0.5 * (matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                       matrix(static_cast<std::size_t>(j), static_cast<std::size_t>(i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric_eigen: solver did not converge");
  std::vector<double> values(static_cast<std::size_t>(n));
  Matrix vectors(values.size(), values.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    for (Eigen::Index r = 0; r < n; ++r)
      vectors(static_cast<std::size_t>(r), static_cast<std::size_t>(i)) = solver.eigenvectors()(r, i);
  }
  return sorted(std::move(values), vectors);
}

EigenDecomposition jacobi_eigen(const Matrix& matrix) {
  require_symmetric(matrix, "jacobi_eigen");
  const std::size_t n = matrix.rows();
  Matrix a = matrix;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (matrix(i, j) + matrix(j, i));
  Matrix v = Matrix::identity(n);
  const double norm = frobenius_norm(a);
  const auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 50 && off_norm() >= 1e-12 * norm; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation zeroing a(p,q); t = tan(theta), the smaller root.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return sorted(std::move(values), v);
}

std::size_t eigen_gap_count(std::span<const double> eigenvalues) {
  const std::size_t n = eigenvalues.size();
  if (n < 2) throw ArgumentError("eigen_gap_count: need at least two eigenvalues");
  const std::size_t gaps = std::max<std::size_t>(1, std::min(n - 1, n / 2));
  std::size_t best = 0;
  double best_gap = eigenvalues[1] - eigenvalues[0];
  for (std::size_t i = 1; i < gaps; ++i) {
    const double g = eigenvalues[i + 1] - eigenvalues[i];
    if (g > best_gap) {
      best_gap = g;
      best = i;
    }
  }
  return best + 1;
}

}  // namespace pcm
