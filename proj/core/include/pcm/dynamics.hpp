#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcm/matrix.hpp"
#include "pcm/potential.hpp"

namespace pcm {

/// Particle positions (N x M) with per-particle masses. A mass above one
/// stands for several coalesced data points.
struct ParticleState {
  Matrix positions;
  std::vector<double> masses;
  std::size_t step_index = 0;

  // Unit masses, step 0.
  static ParticleState from_points(Matrix points);

  std::size_t size() const noexcept { return positions.rows(); }
  std::size_t dim() const noexcept { return positions.cols(); }
  double total_mass() const noexcept;

  // Throws ArgumentError on shape problems, NumericError on non-finite data.
  void validate() const;
};

// Symmetric N x N graph Laplacian: off-diagonal -phi_ij sqrt(m_i m_j),
// diagonal the compensating positive sum, so every row sums to zero.
struct LaplacianMatrix {
  Matrix entries;
};

/// Per-particle neighbour lists for far-pair pruning. Each list is sorted by
/// ascending index and excludes the particle itself.
struct NeighborLists {
  std::vector<std::vector<std::uint32_t>> neighbors;
  double threshold = 0.0;
};

NeighborLists build_neighbor_lists(const ParticleState& state, double threshold);

/// Row k = sum_l m_l phi(|x_k - x_l|) (x_l - x_k), summed in ascending l.
/// With `pruned`, only the listed neighbours contribute.
Matrix force_field(const ParticleState& state, const PotentialSpec& spec,
                   const NeighborLists* pruned = nullptr);

/// One explicit Euler step computed from the current snapshot, all particles
/// updated together. Masses are untouched; step_index advances by one.
ParticleState euler_step(const ParticleState& state, const PotentialSpec& spec, double dt,
                         const NeighborLists* pruned = nullptr);

LaplacianMatrix build_laplacian(const ParticleState& state, const PotentialSpec& spec);

// Applies L to every coordinate column: returns L X (N x M) without forming
// the NM x NM Kronecker product. Equals -force_field for unit masses.
Matrix apply_laplacian(const LaplacianMatrix& laplacian, const Matrix& positions);

// sum over ordered pairs i != j of m_i m_j U(|x_i - x_j|).
double total_potential(const ParticleState& state, const PotentialSpec& spec);

// 1/2 sum_i |x_i - x_ref|^2 over the members, x_ref the highest-indexed one.
double lyapunov_value(const ParticleState& state, std::span<const std::size_t> members);

// 1 / max_k sum_{l != k} m_l phi_kl, or +inf when no pair interacts. For dt
// at or below this bound each update is a convex combination.
double stability_max_dt(const ParticleState& state, const PotentialSpec& spec);

// Message when dt exceeds the stability bound, nullopt otherwise.
std::optional<std::string> check_step_size(const ParticleState& state, const PotentialSpec& spec,
                                           double dt);

// Mass-weighted mean position.
std::vector<double> centroid(const ParticleState& state);

}  // namespace pcm
