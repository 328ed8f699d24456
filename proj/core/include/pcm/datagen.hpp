#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pcm/matrix.hpp"

namespace pcm {

struct LabeledDataset {
  Matrix points;
  std::optional<std::vector<std::size_t>> labels;
  std::vector<std::string> class_names;  // index = class id, may be empty
  std::vector<std::string> feature_names;
  std::string name;
  std::string provenance;  // "generator:<kind> seed=<n>" or "file:<path>"

  std::size_t size() const noexcept { return points.rows(); }
  std::size_t dim() const noexcept { return points.cols(); }
  std::size_t class_count() const;
  void validate() const;
};

struct MixtureComponent {
  std::vector<double> center;
  Matrix covariance;  // M x M, symmetric positive semidefinite
  std::size_t count = 0;
};

// R diag(scales^2) R^T where R chains Givens rotations by `angle` in the
// planes (0,1), (1,2), ..., (M-2,M-1).
Matrix rotated_covariance(std::span<const double> scales, double angle);

/// Draws component by component, point by point: M normals z, then
/// x = center + L z with L the (semidefinite-tolerant) Cholesky factor.
/// Throws ArgumentError for a covariance that is not symmetric PSD.
LabeledDataset gen_gaussian_mixture(std::span<const MixtureComponent> components,
                                    std::uint64_t seed);

/// Four 5-D components of 100 points. Centres sit 16 apart on scaled axes;
/// the largest per-axis s.d. is 1 so centres are > 6 s.d. apart.
std::vector<MixtureComponent> default_mixture_components();

/// Uniform points inside balls: M normals give a direction, one uniform u
/// gives the radius r u^(1/M).
LabeledDataset gen_hypersphere_clusters(const Matrix& centers, std::span<const double> radii,
                                        std::span<const std::size_t> counts, std::uint64_t seed);

// Three unit balls in 3-D, 200 points each, centres 6 apart.
LabeledDataset default_hypersphere_clusters(std::uint64_t seed);

/// Two shells around the origin (inner = class 0, drawn first). Per point:
/// M normals for the direction, one normal n for the radius R + noise n.
/// Throws ArgumentError unless 0 <= inner < outer.
LabeledDataset gen_concentric_spheres(std::array<double, 2> radii,
                                      std::array<std::size_t, 2> counts, double noise,
                                      std::uint64_t seed, std::size_t dim = 3);

// Radii 0.5 and 3, 1000 + 1000 points, noise 0.05, 3-D.
LabeledDataset default_concentric_spheres(std::uint64_t seed);

// 100 points in four 2-D Gaussian blobs (s.d. 0.05) on the unit square corners.
LabeledDataset default_four_blobs(std::uint64_t seed);

// Column selector for load_csv: none, zero-based index, or header name.
using LabelColumn = std::variant<std::monostate, std::size_t, std::string>;

/// Comma-separated numeric features with an optional header line. The label
/// column may hold any text; ids follow first appearance. Empty lines are
/// skipped. Throws ParseError with row/column on bad cells and ArgumentError
/// when the label column does not exist.
LabeledDataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column = {},
                        bool has_header = true);
LabeledDataset parse_csv(const std::string& text, const LabelColumn& label_column = {},
                         bool has_header = true, const std::string& source = "<memory>");

// Features at round-trip precision, then a "label" column when present.
std::string format_csv(const LabeledDataset& dataset, bool header = true);

// Square numeric matrix, no header.
Matrix parse_matrix_csv(const std::string& text, const std::string& source = "<memory>");
std::string format_matrix_csv(const Matrix& matrix);

std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace pcm
