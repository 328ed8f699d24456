#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcm/matrix.hpp"

namespace pcm {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

// Full decomposition of a symmetric matrix. Throws ArgumentError when the
// input is not square or is asymmetric beyond 1e-10 (relative).
EigenDecomposition symmetric_eigen(const Matrix& matrix);

// Cyclic Jacobi rotations; sweeps until the off-diagonal Frobenius norm is
// below 1e-12 * |A| or 50 sweeps. O(N^3) per sweep, so meant for small N.
EigenDecomposition jacobi_eigen(const Matrix& matrix);

/// 1-based index i maximising lambda_{i+1} - lambda_i over the first
/// min(N-1, N/2) gaps (at least one), smallest i on ties.
std::size_t eigen_gap_count(std::span<const double> eigenvalues);

}  // namespace pcm
