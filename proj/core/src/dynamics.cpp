#include "pcm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pcm/error.hpp"

namespace pcm {

ParticleState ParticleState::from_points(Matrix points) {
  ParticleState s;
  s.masses.assign(points.rows(), 1.0);
  s.positions = std::move(points);
  return s;
}

double ParticleState::total_mass() const noexcept {
  double m = 0.0;
  for (double v : masses) m += v;
  return m;
}

void ParticleState::validate() const {
  if (positions.rows() == 0 || positions.cols() == 0)
    throw ArgumentError("particle state: need at least one particle and one feature");
  if (masses.size() != positions.rows())
    throw ArgumentError("particle state: mass count does not match particle count");
  for (double m : masses)
    if (!(m > 0.0) || !std::isfinite(m)) throw ArgumentError("particle state: masses must be positive");
  if (!positions.all_finite()) throw NumericError("particle state: non-finite coordinate");
}

NeighborLists build_neighbor_lists(const ParticleState& state, double threshold) {
  const std::size_t n = state.size();
  NeighborLists lists;
  lists.threshold = threshold;
  lists.neighbors.resize(n);
  const double t2 = threshold * threshold;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (squared_distance(state.positions.row(i), state.positions.row(j)) <= t2)
        lists.neighbors[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return lists;
}

namespace {

// Force on particle k into `out`; returns the summed weight sum_l m_l phi_kl.
template <typename Indices>
double accumulate_row(const ParticleState& state, const PotentialSpec& spec, std::size_t k,
                      const Indices& indices, std::span<double> out) {
  const std::size_t m = state.dim();
  const auto xk = state.positions.row(k);
  double weight_sum = 0.0;
  for (auto l : indices) {
    if (static_cast<std::size_t>(l) == k) continue;
    const auto xl = state.positions.row(l);
    const double w = phi_squared(squared_distance(xk, xl), spec);
    if (w == 0.0) continue;
    const double mw = state.masses[l] * w;
    weight_sum += mw;
    for (std::size_t c = 0; c < m; ++c) out[c] += mw * (xl[c] - xk[c]);
  }
  return weight_sum;
}

struct IndexRange {
  std::size_t n;
  struct iterator {
    std::size_t i;
    std::size_t operator*() const noexcept { return i; }
    iterator& operator++() noexcept { ++i; return *this; }
    bool operator!=(const iterator& o) const noexcept { return i != o.i; }
  };
  iterator begin() const noexcept { return {0}; }
  iterator end() const noexcept { return {n}; }
};

void check_finite(const ParticleState& state, const char* what) {
  if (!state.positions.all_finite())
    throw NumericError(std::string(what) + ": non-finite coordinate");
}

}  // namespace

Matrix force_field(const ParticleState& state, const PotentialSpec& spec,
                   const NeighborLists* pruned) {
  check_finite(state, "force_field");
  const std::size_t n = state.size();
  Matrix f(n, state.dim());
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < rows; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (pruned)
      accumulate_row(state, spec, kk, pruned->neighbors[kk], f.row(kk));
    else
      accumulate_row(state, spec, kk, IndexRange{n}, f.row(kk));
  }
  return f;
}

ParticleState euler_step(const ParticleState& state, const PotentialSpec& spec, double dt,
                         const NeighborLists* pruned) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("euler_step: dt must be positive");
  const Matrix f = force_field(state, spec, pruned);
  ParticleState next = state;
  auto x = next.positions.values();
  const auto fv = f.values();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt * fv[i];
  ++next.step_index;
  check_finite(next, "euler_step");
  return next;
}

LaplacianMatrix build_laplacian(const ParticleState& state, const PotentialSpec& spec) {
  check_finite(state, "build_laplacian");
  const std::size_t n = state.size();
  LaplacianMatrix lap{Matrix(n, n)};
  auto& l = lap.entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = phi_squared(squared_distance(state.positions.row(i), state.positions.row(j)), spec);
      if (w == 0.0) continue;
      const double v = w * std::sqrt(state.masses[i] * state.masses[j]);
      l(i, j) = -v;
      l(j, i) = -v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s -= l(i, j);
    l(i, i) = s;
  }
  return lap;
}

Matrix apply_laplacian(const LaplacianMatrix& laplacian, const Matrix& positions) {
  return matmul(laplacian.entries, positions);
}

double total_potential(const ParticleState& state, const PotentialSpec& spec) {
  const std::size_t n = state.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = distance(state.positions.row(i), state.positions.row(j));
      total += state.masses[i] * state.masses[j] * potential_value(r, spec);
    }
  return total;
}

double lyapunov_value(const ParticleState& state, std::span<const std::size_t> members) {
  if (members.empty()) throw ArgumentError("lyapunov_value: member set is empty");
  std::size_t ref = members.front();
  for (std::size_t i : members) {
    if (i >= state.size()) throw ArgumentError("lyapunov_value: member index out of range");
    if (i > ref) ref = i;
  }
  double v = 0.0;
  for (std::size_t i : members) v += squared_distance(state.positions.row(i), state.positions.row(ref));
  return 0.5 * v;
}

double stability_max_dt(const ParticleState& state, const PotentialSpec& spec) {
  const std::size_t n = state.size();
  double max_weight = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l == k) continue;
      s += state.masses[l] *
           phi_squared(squared_distance(state.positions.row(k), state.positions.row(l)), spec);
    }
    max_weight = std::max(max_weight, s);
  }
  if (max_weight == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / max_weight;
}

std::optional<std::string> check_step_size(const ParticleState& state, const PotentialSpec& spec,
                                           double dt) {
  const double bound = stability_max_dt(state, spec);
  if (dt <= bound) return std::nullopt;
  std::ostringstream os;
  os.precision(6);
  os << "dt " << dt << " exceeds the explicit-Euler stability bound " << bound << " at step "
     << state.step_index << "; particles may overshoot";
  return os.str();
}

std::vector<double> centroid(const ParticleState& state) {
  std::vector<double> c(state.dim(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto x = state.positions.row(i);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += state.masses[i] * x[d];
    total += state.masses[i];
  }
  for (double& v : c) v /= total;
  return c;
}

}  // namespace pcm
