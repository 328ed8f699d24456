#pragma once

#include "pcm/matrix.hpp"

namespace pcm {

enum class KernelKind { Gaussian, Quartic };

const char* to_string(KernelKind kind) noexcept;
KernelKind kernel_from_string(const char* name);

/// Compact-support interaction kernel.
///
/// Gaussian: U(r) = -exp(-r^2/sigma^2), phi(r) = exp(-r^2/sigma^2).
/// Quartic:  U(r) = -(r^2 - r*^2)^2 / r*^4, phi(r) = 1 - r^2/r*^2.
/// Both vanish for r >= r_star. In each case dU/dr = c * r * phi(r) for the
/// constant c returned by gradient_scale().
struct PotentialSpec {
  KernelKind kind = KernelKind::Gaussian;
  double sigma = 1.0;
  double r_star = 3.0;

  // r* = 3 sigma.
  static PotentialSpec gaussian(double sigma);
  static PotentialSpec gaussian(double sigma, double r_star);
  // sigma is carried as r*/3 so the 3-sigma relation holds for both kernels.
  static PotentialSpec quartic(double r_star);

  // Throws ConfigError unless sigma > 0 and r_star > 0 (r_star may be +inf
  // for the untruncated Gaussian).
  void validate() const;

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

// Interaction weight in [0, 1]; exactly zero for r >= r_star.
double phi(double r, const PotentialSpec& spec);

// Weight from a squared distance; skips the sqrt on the hot path.
double phi_squared(double r2, const PotentialSpec& spec) noexcept;

// U(r) <= 0, minimum at r = 0, zero for r >= r_star.
double potential_value(double r, const PotentialSpec& spec);

// c with dU/dr = c * r * phi(r): 2/sigma^2 (Gaussian) or 4/r*^2 (quartic).
double gradient_scale(const PotentialSpec& spec);

/// Bandwidth heuristic: sample standard deviation (n-1 denominator) of all
/// N(N-1)/2 pairwise distances divided by the feature dimension. When the
/// spread is zero the mean pairwise distance is used instead.
///
/// Throws InsufficientDataError for N < 2 and ConfigError when every point
/// coincides.
double auto_tune_sigma(const Matrix& points);

// Same statistic over the strict upper triangle of a distance matrix.
double auto_tune_sigma_from_distances(const Matrix& distances, std::size_t dimension = 1);

}  // namespace pcm
