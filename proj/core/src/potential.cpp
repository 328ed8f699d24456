#include "pcm/potential.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "pcm/error.hpp"

namespace pcm {

const char* to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Quartic: return "quartic";
  }
  return "unknown";
}

KernelKind kernel_from_string(const char* name) {
  if (std::strcmp(name, "gaussian") == 0) return KernelKind::Gaussian;
  if (std::strcmp(name, "quartic") == 0) return KernelKind::Quartic;
  throw ConfigError(std::string("unknown kernel '") + name + "' (expected gaussian or quartic)");
}

PotentialSpec PotentialSpec::gaussian(double sigma) { return gaussian(sigma, 3.0 * sigma); }

PotentialSpec PotentialSpec::gaussian(double sigma, double r_star) {
  PotentialSpec spec{KernelKind::Gaussian, sigma, r_star};
  spec.validate();
  return spec;
}

PotentialSpec PotentialSpec::quartic(double r_star) {
  PotentialSpec spec{KernelKind::Quartic, r_star / 3.0, r_star};
  spec.validate();
  return spec;
}

void PotentialSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError("potential: sigma must be a positive finite number, got " +
                      std::to_string(sigma));
  if (!(r_star > 0.0))
    throw ConfigError("potential: r_star must be positive, got " + std::to_string(r_star));
  if (kind == KernelKind::Quartic && !std::isfinite(r_star))
    throw ConfigError("potential: quartic kernel needs a finite r_star");
}

double phi_squared(double r2, const PotentialSpec& spec) noexcept {
  if (r2 >= spec.r_star * spec.r_star) return 0.0;
  switch (spec.kind) {
    case KernelKind::Gaussian: return std::exp(-r2 / (spec.sigma * spec.sigma));
    case KernelKind::Quartic: return 1.0 - r2 / (spec.r_star * spec.r_star);
  }
  return 0.0;
}

double phi(double r, const PotentialSpec& spec) {
  spec.validate();
  if (!(r >= 0.0)) throw ArgumentError("phi: distance must be nonnegative");
  if (r >= spec.r_star) return 0.0;
  return phi_squared(r * r, spec);
}

double potential_value(double r, const PotentialSpec& spec) {
  spec.validate();
  if (!(r >= 0.0)) throw ArgumentError("potential_value: distance must be nonnegative");
  if (r >= spec.r_star) return 0.0;
  switch (spec.kind) {
    case KernelKind::Gaussian: return -std::exp(-(r * r) / (spec.sigma * spec.sigma));
    case KernelKind::Quartic: {
      const double rs2 = spec.r_star * spec.r_star;
      const double t = r * r - rs2;
      return -(t * t) / (rs2 * rs2);
    }
  }
  return 0.0;
}

double gradient_scale(const PotentialSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case KernelKind::Gaussian: return 2.0 / (spec.sigma * spec.sigma);
    case KernelKind::Quartic: return 4.0 / (spec.r_star * spec.r_star);
  }
  return 0.0;
}

namespace {

double tune_from_values(const std::vector<double>& values, std::size_t dimension) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double m = static_cast<double>(dimension);
  // Equal distances leave rounding-level spread; treat that as zero.
  if (sd > 1e-12 * mean) return sd / m;
  if (mean > 0.0) return mean / m;
  throw ConfigError("auto_tune_sigma: all points coincide, sigma cannot be chosen");
}

}  // namespace

double auto_tune_sigma(const Matrix& points) {
  const std::size_t n = points.rows();
  if (n < 2) throw InsufficientDataError("auto_tune_sigma: need at least two points");
  if (points.cols() < 1) throw ArgumentError("auto_tune_sigma: points have no features");
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.push_back(distance(points.row(i), points.row(j)));
  return tune_from_values(d, points.cols());
}

double auto_tune_sigma_from_distances(const Matrix& distances, std::size_t dimension) {
  const std::size_t n = distances.rows();
  if (n < 2) throw InsufficientDataError("auto_tune_sigma: need at least two points");
  if (dimension < 1) throw ArgumentError("auto_tune_sigma: dimension must be at least 1");
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.push_back(distances(i, j));
  return tune_from_values(d, dimension);
}

}  // namespace pcm
