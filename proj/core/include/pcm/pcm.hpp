#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcm/cluster.hpp"
#include "pcm/dynamics.hpp"
#include "pcm/matrix.hpp"
#include "pcm/potential.hpp"

namespace pcm {

struct PcmConfig {
  // sigma is auto-tuned (Gaussian, r* = 3 sigma) when absent.
  std::optional<PotentialSpec> potential;
  // Fixed step. When absent: 0.9 * stability_max_dt, capped at 1, refreshed
  // every `dt_refresh_interval` iterations.
  std::optional<double> dt;
  std::size_t max_iters = 10000;
  // Default stop: dispersion / pair count < stop_tol.
  double stop_tol = 1e-5;
  // Stop when dispersion < N r* instead.
  bool radius_stop_rule = false;
  // Clusters smaller than max(2, ceil(fraction * N0)) points are merged.
  double min_cluster_fraction = 0.05;
  // Points closer than this are fused into one weighted particle. Disabled
  // when absent.
  std::optional<double> coalesce_eps;
  // Pairs farther apart than this are dropped from the force sum; the lists
  // are rebuilt every `dt_refresh_interval` iterations.
  std::optional<double> prune_threshold;
  std::size_t dt_refresh_interval = 50;

  void validate() const;
};

struct PcmResult {
  ClusterAssignment assignment;  // labels over the original data points
  std::size_t iterations_used = 0;
  std::vector<double> dispersion_trace;  // one entry per iteration
  std::vector<std::string> warnings;
  double tuned_sigma = 0.0;
  PotentialSpec potential;
  bool converged = false;
  double initial_spread = 0.0;  // max pairwise distance at tau = 0
  double final_dt = 0.0;
  std::size_t particle_count = 0;  // after coalescing
  std::size_t pre_merge_cluster_count = 0;
  ParticleState final_state;
};

// sum over unordered pairs of |e_ij(curr) - e_ij(prev)| with e_ij = x_i - x_j.
double dispersion(const Matrix& prev_positions, const Matrix& curr_positions);

// Connected components of the graph with edges |x_i - x_j| < r_star. Sizes
// count mass, centers are mass-weighted component means.
ClusterAssignment extract_clusters(const ParticleState& state, double r_star);

// Absorbs every cluster below min_size into the other surviving cluster with
// the smallest mass-weighted average member distance. Repeats smallest
// cluster first (lowest id on ties) until every cluster meets min_size or
// one cluster remains.
ClusterAssignment merge_small_clusters(const ClusterAssignment& assignment,
                                       const ParticleState& state, std::size_t min_size);

// max(2, ceil(fraction * n)).
std::size_t min_cluster_size(double fraction, std::size_t n);

struct CoalescedState {
  ParticleState state;
  // representative[i] = particle that original point i was fused into.
  std::vector<std::size_t> representative;
};

// Greedy ascending scan: a point joins the first representative seed closer
// than eps, otherwise it seeds a new one. Each particle sits at the
// mass-weighted mean of its group.
CoalescedState coalesce_particles(const ParticleState& state, double eps);

/// Iteration-level driver. run_pcm() is the usual entry point; the solver is
/// exposed so callers can time or observe single iterations.
class PcmSolver {
 public:
  PcmSolver(const Matrix& data, const PcmConfig& config);

  // One Euler step; returns its dispersion. Does not check stopping.
  double step();
  bool should_stop(double last_dispersion) const;

  const ParticleState& state() const noexcept { return state_; }
  const PotentialSpec& potential() const noexcept { return potential_; }
  double current_dt() const noexcept { return dt_; }

  // Runs to the stopping rule (or max_iters) and extracts clusters.
  PcmResult run();

 private:
  void refresh_step_parameters();
  PcmResult finish(bool converged);

  PcmConfig config_;
  std::size_t original_count_ = 0;
  PotentialSpec potential_;
  double tuned_sigma_ = 0.0;
  ParticleState state_;
  std::vector<std::size_t> representative_;
  std::optional<NeighborLists> neighbors_;
  double dt_ = 1.0;
  double initial_spread_ = 0.0;
  std::vector<double> trace_;
  std::vector<std::string> warnings_;
  bool warned_dt_ = false;
};

PcmResult run_pcm(const Matrix& data, const PcmConfig& config = {});

}  // namespace pcm
