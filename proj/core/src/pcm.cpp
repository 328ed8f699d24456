#include "pcm/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "merge_detail.hpp"
#include "pcm/error.hpp"

namespace pcm {

void PcmConfig::validate() const {
  if (potential) potential->validate();
  if (dt && (!(*dt > 0.0) || !std::isfinite(*dt))) throw ConfigError("pcm: dt must be positive");
  if (max_iters < 1) throw ConfigError("pcm: max_iters must be at least 1");
  if (!(stop_tol > 0.0)) throw ConfigError("pcm: stop_tol must be positive");
  if (!(min_cluster_fraction >= 0.0 && min_cluster_fraction < 1.0))
    throw ConfigError("pcm: min_cluster_fraction must lie in [0, 1)");
  if (coalesce_eps && !(*coalesce_eps >= 0.0)) throw ConfigError("pcm: coalesce_eps must be >= 0");
  if (prune_threshold && !(*prune_threshold > 0.0))
    throw ConfigError("pcm: prune_threshold must be positive");
  if (dt_refresh_interval < 1) throw ConfigError("pcm: dt_refresh_interval must be at least 1");
}

double dispersion(const Matrix& prev_positions, const Matrix& curr_positions) {
  if (prev_positions.rows() != curr_positions.rows() ||
      prev_positions.cols() != curr_positions.cols())
    throw ArgumentError("dispersion: snapshots have different shapes");
  const std::size_t n = prev_positions.rows();
  const std::size_t m = prev_positions.cols();
  // e_ij(t+1) - e_ij(t) = delta_i - delta_j with delta the per-particle move.
  Matrix delta(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < m; ++c) delta(i, c) = curr_positions(i, c) - prev_positions(i, c);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += distance(delta.row(i), delta.row(j));
  return s;
}

namespace {

ClusterAssignment assignment_from_labels(const ParticleState& state,
                                         const std::vector<std::size_t>& raw) {
  ClusterAssignment a = canonical_assignment(raw);
  const std::size_t p = a.sizes.size();
  const std::size_t m = state.dim();
  a.centers = Matrix(p, m);
  std::vector<double> mass(p, 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    const std::size_t c = a.labels[i];
    mass[c] += state.masses[i];
    for (std::size_t d = 0; d < m; ++d) a.centers(c, d) += state.masses[i] * state.positions(i, d);
  }
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t d = 0; d < m; ++d) a.centers(c, d) /= mass[c];
    a.sizes[c] = static_cast<std::size_t>(std::llround(mass[c]));
  }
  return a;
}

}  // namespace

ClusterAssignment extract_clusters(const ParticleState& state, double r_star) {
  const std::size_t n = state.size();
  UnionFind uf(n);
  const double r2 = r_star * r_star;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (squared_distance(state.positions.row(i), state.positions.row(j)) < r2) uf.unite(i, j);
  return assignment_from_labels(state, uf.component_labels());
}

std::size_t min_cluster_size(double fraction, std::size_t n) {
  const auto scaled = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  return std::max<std::size_t>(2, scaled);
}


ClusterAssignment merge_small_clusters(const ClusterAssignment& assignment,
                                       const ParticleState& state, std::size_t min_size) {
  if (assignment.labels.size() != state.size())
    throw ArgumentError("merge_small_clusters: assignment and state sizes differ");
  const auto labels = detail::merge_labels(
      assignment.labels, state.masses, min_size, [&](std::size_t i, std::size_t j) {
        return distance(state.positions.row(i), state.positions.row(j));
      });
  return assignment_from_labels(state, labels);
}

CoalescedState coalesce_particles(const ParticleState& state, double eps) {
  if (!(eps >= 0.0)) throw ArgumentError("coalesce_particles: eps must be nonnegative");
  const std::size_t n = state.size();
  const std::size_t m = state.dim();
  std::vector<std::size_t> seeds;
  CoalescedState out;
  out.representative.resize(n);
  const double eps2 = eps * eps;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t group = seeds.size();
    for (std::size_t g = 0; g < seeds.size(); ++g) {
      if (squared_distance(state.positions.row(i), state.positions.row(seeds[g])) < eps2) {
        group = g;
        break;
      }
    }
    if (group == seeds.size()) seeds.push_back(i);
    out.representative[i] = group;
  }
  const std::size_t p = seeds.size();
  out.state.positions = Matrix(p, m);
  out.state.masses.assign(p, 0.0);
  out.state.step_index = state.step_index;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = out.representative[i];
    out.state.masses[g] += state.masses[i];
    for (std::size_t d = 0; d < m; ++d)
      out.state.positions(g, d) += state.masses[i] * state.positions(i, d);
  }
  for (std::size_t g = 0; g < p; ++g)
    for (std::size_t d = 0; d < m; ++d) out.state.positions(g, d) /= out.state.masses[g];
  return out;
}

// ---------------------------------------------------------------------------

PcmSolver::PcmSolver(const Matrix& data, const PcmConfig& config) : config_(config) {
  config_.validate();
  if (data.rows() == 0 || data.cols() == 0) throw ArgumentError("run_pcm: empty input");
  if (!data.all_finite()) throw NumericError("run_pcm: input contains non-finite values");
  original_count_ = data.rows();

  if (config_.potential) {
    potential_ = *config_.potential;
    tuned_sigma_ = potential_.sigma;
  } else if (data.rows() >= 2) {
    tuned_sigma_ = auto_tune_sigma(data);
    potential_ = PotentialSpec::gaussian(tuned_sigma_);
  } else {
    // A single point never interacts; any valid kernel will do.
    tuned_sigma_ = 1.0;
    potential_ = PotentialSpec::gaussian(1.0);
  }

  ParticleState initial = ParticleState::from_points(data);
  double spread = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = i + 1; j < data.rows(); ++j)
      spread = std::max(spread, squared_distance(data.row(i), data.row(j)));
  initial_spread_ = std::sqrt(spread);

  if (config_.coalesce_eps && *config_.coalesce_eps > 0.0) {
    CoalescedState c = coalesce_particles(initial, *config_.coalesce_eps);
    state_ = std::move(c.state);
    representative_ = std::move(c.representative);
  } else {
    state_ = std::move(initial);
    representative_.resize(original_count_);
    for (std::size_t i = 0; i < original_count_; ++i) representative_[i] = i;
  }
  refresh_step_parameters();
}

void PcmSolver::refresh_step_parameters() {
  if (config_.prune_threshold) neighbors_ = build_neighbor_lists(state_, *config_.prune_threshold);
  if (config_.dt) {
    dt_ = *config_.dt;
    if (!warned_dt_) {
      if (auto w = check_step_size(state_, potential_, dt_)) {
        warnings_.push_back(*w);
        warned_dt_ = true;
      }
    }
  } else {
    const double bound = stability_max_dt(state_, potential_);
    dt_ = std::isfinite(bound) ? std::min(1.0, 0.9 * bound) : 1.0;
  }
}

double PcmSolver::step() {
  if (state_.step_index > 0 && state_.step_index % config_.dt_refresh_interval == 0)
    refresh_step_parameters();
  ParticleState next = euler_step(state_, potential_, dt_, neighbors_ ? &*neighbors_ : nullptr);
  const double s = dispersion(state_.positions, next.positions);
  state_ = std::move(next);
  trace_.push_back(s);
  return s;
}

bool PcmSolver::should_stop(double last_dispersion) const {
  const double n = static_cast<double>(state_.size());
  if (config_.radius_stop_rule) return last_dispersion < n * potential_.r_star;
  const double pairs = n * (n - 1.0) / 2.0;
  return last_dispersion / pairs < config_.stop_tol;
}

PcmResult PcmSolver::run() {
  if (state_.size() < 2) return finish(true);
  for (std::size_t it = 0; it < config_.max_iters; ++it) {
    if (should_stop(step())) return finish(true);
  }
  return finish(false);
}

PcmResult PcmSolver::finish(bool converged) {
  PcmResult r;
  r.iterations_used = trace_.size();
  r.dispersion_trace = trace_;
  r.warnings = warnings_;
  r.tuned_sigma = tuned_sigma_;
  r.potential = potential_;
  r.converged = converged;
  r.initial_spread = initial_spread_;
  r.final_dt = dt_;
  r.particle_count = state_.size();
  if (!converged) {
    std::ostringstream os;
    os << "did not converge within max_iters=" << config_.max_iters << " (last dispersion "
       << (trace_.empty() ? 0.0 : trace_.back()) << ")";
    r.warnings.push_back(os.str());
  }

  const ClusterAssignment raw = extract_clusters(state_, potential_.r_star);
  r.pre_merge_cluster_count = raw.cluster_count();
  const ClusterAssignment merged =
      merge_small_clusters(raw, state_, min_cluster_size(config_.min_cluster_fraction, original_count_));

  // Map particle labels back to the original points, then renumber by first
  // appearance over the original order.
  std::vector<std::size_t> labels(original_count_);
  for (std::size_t i = 0; i < original_count_; ++i) labels[i] = merged.labels[representative_[i]];
  ClusterAssignment a = canonical_assignment(labels);
  std::vector<std::size_t> to_merged(a.sizes.size());
  for (std::size_t i = 0; i < original_count_; ++i) to_merged[a.labels[i]] = labels[i];
  a.centers = Matrix(a.sizes.size(), state_.dim());
  for (std::size_t c = 0; c < a.sizes.size(); ++c)
    for (std::size_t d = 0; d < state_.dim(); ++d) a.centers(c, d) = merged.centers(to_merged[c], d);
  r.assignment = std::move(a);
  r.final_state = state_;
  return r;
}

PcmResult run_pcm(const Matrix& data, const PcmConfig& config) {
  PcmSolver solver(data, config);
  return solver.run();
}

}  // namespace pcm
