#include "pcm/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pcm/error.hpp"
#include "pcm/random.hpp"

namespace pcm {

std::size_t LabeledDataset::class_count() const {
  if (!labels || labels->empty()) return 0;
  return *std::max_element(labels->begin(), labels->end()) + 1;
}

void LabeledDataset::validate() const {
  if (labels && labels->size() != points.rows())
    throw ArgumentError("dataset '" + name + "': label count does not match point count");
  if (!points.all_finite()) throw NumericError("dataset '" + name + "': non-finite coordinate");
}

namespace {

std::string seed_provenance(const char* kind, std::uint64_t seed) {
  return std::string("generator:") + kind + " seed=" + std::to_string(seed);
}

// Lower-triangular L with L L^T = cov. Zero pivots (semidefinite directions)
// give zero columns; a negative pivot means cov is not PSD.
Matrix psd_cholesky(const Matrix& cov) {
  const std::size_t m = cov.rows();
  if (cov.cols() != m) throw ArgumentError("covariance must be square");
  double scale = 0.0;
  for (double v : cov.values()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  if (asymmetry(cov) > tol) throw ArgumentError("covariance is not symmetric");
  Matrix l(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    double d = cov(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -tol) throw ArgumentError("covariance is not positive semidefinite");
    if (d <= tol) {
      for (std::size_t i = j + 1; i < m; ++i) {
        double s = cov(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
        if (std::abs(s) > 1e-9 * std::max(1.0, scale))
          throw ArgumentError("covariance is not positive semidefinite");
      }
      continue;
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < m; ++i) {
      double s = cov(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

void random_direction(SplitMix64& rng, std::span<double> out) {
  for (;;) {
    double norm2 = 0.0;
    for (double& v : out) {
      v = rng.normal();
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& v : out) v *= inv;
      return;
    }
  }
}

}  // namespace

Matrix rotated_covariance(std::span<const double> scales, double angle) {
  const std::size_t m = scales.size();
  Matrix r = Matrix::identity(m);
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t p = 0; p + 1 < m; ++p) {
    // r <- r * G(p, p+1)
    for (std::size_t i = 0; i < m; ++i) {
      const double a = r(i, p), b = r(i, p + 1);
      r(i, p) = c * a - s * b;
      r(i, p + 1) = s * a + c * b;
    }
  }
  Matrix cov(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < m; ++k) v += r(i, k) * scales[k] * scales[k] * r(j, k);
      cov(i, j) = v;
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) cov(i, j) = cov(j, i) = 0.5 * (cov(i, j) + cov(j, i));
  return cov;
}

LabeledDataset gen_gaussian_mixture(std::span<const MixtureComponent> components,
                                    std::uint64_t seed) {
  if (components.empty()) throw ArgumentError("gaussian mixture: no components");
  const std::size_t m = components.front().center.size();
  if (m == 0) throw ArgumentError("gaussian mixture: centers have no coordinates");
  std::size_t total = 0;
  std::vector<Matrix> factors;
  for (const auto& c : components) {
    if (c.center.size() != m) throw ArgumentError("gaussian mixture: centers differ in dimension");
    if (c.count == 0) throw ArgumentError("gaussian mixture: counts must be positive");
    if (c.covariance.rows() != m) throw ArgumentError("gaussian mixture: covariance shape mismatch");
    factors.push_back(psd_cholesky(c.covariance));
    total += c.count;
  }
  SplitMix64 rng(seed);
  LabeledDataset ds;
  ds.points = Matrix(total, m);
  ds.labels.emplace();
  ds.labels->reserve(total);
  ds.name = "gaussian-mixture";
  ds.provenance = seed_provenance("mixture", seed);
  std::vector<double> z(m);
  std::size_t row = 0;
  for (std::size_t p = 0; p < components.size(); ++p) {
    const auto& l = factors[p];
    for (std::size_t i = 0; i < components[p].count; ++i, ++row) {
      for (double& v : z) v = rng.normal();
      for (std::size_t a = 0; a < m; ++a) {
        double x = components[p].center[a];
        for (std::size_t b = 0; b <= a; ++b) x += l(a, b) * z[b];
        ds.points(row, a) = x;
      }
      ds.labels->push_back(p);
    }
  }
  return ds;
}

std::vector<MixtureComponent> default_mixture_components() {
  constexpr std::size_t kDim = 5;
  constexpr double kSeparation = 16.0;
  const double scales[kDim] = {1.0, 0.8, 0.6, 0.5, 0.4};
  std::vector<MixtureComponent> out;
  for (std::size_t p = 0; p < 4; ++p) {
    MixtureComponent c;
    c.center.assign(kDim, 0.0);
    c.center[p] = kSeparation / std::sqrt(2.0);
    c.covariance = rotated_covariance(scales, 0.3 * static_cast<double>(p + 1));
    c.count = 100;
    out.push_back(std::move(c));
  }
  return out;
}

LabeledDataset gen_hypersphere_clusters(const Matrix& centers, std::span<const double> radii,
                                        std::span<const std::size_t> counts, std::uint64_t seed) {
  const std::size_t p = centers.rows();
  const std::size_t m = centers.cols();
  if (p == 0 || m == 0) throw ArgumentError("hypersphere clusters: no centers");
  if (radii.size() != p || counts.size() != p)
    throw ArgumentError("hypersphere clusters: need one radius and one count per center");
  for (double r : radii)
    if (!(r >= 0.0)) throw ArgumentError("hypersphere clusters: radius must be nonnegative");
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;

  SplitMix64 rng(seed);
  LabeledDataset ds;
  ds.points = Matrix(total, m);
  ds.labels.emplace();
  ds.name = "hypersphere-clusters";
  ds.provenance = seed_provenance("spheres", seed);
  std::vector<double> dir(m);
  std::size_t row = 0;
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i, ++row) {
      random_direction(rng, dir);
      const double r = radii[c] * std::pow(rng.uniform01(), 1.0 / static_cast<double>(m));
      for (std::size_t a = 0; a < m; ++a) ds.points(row, a) = centers(c, a) + r * dir[a];
      ds.labels->push_back(c);
    }
  }
  return ds;
}

LabeledDataset default_hypersphere_clusters(std::uint64_t seed) {
  const Matrix centers{{0.0, 0.0, 0.0}, {6.0, 0.0, 0.0}, {0.0, 6.0, 0.0}};
  const double radii[] = {1.0, 1.0, 1.0};
  const std::size_t counts[] = {200, 200, 200};
  return gen_hypersphere_clusters(centers, radii, counts, seed);
}

LabeledDataset gen_concentric_spheres(std::array<double, 2> radii,
                                      std::array<std::size_t, 2> counts, double noise,
                                      std::uint64_t seed, std::size_t dim) {
  if (!(radii[0] >= 0.0 && radii[0] < radii[1]))
    throw ArgumentError("concentric spheres: radii must satisfy 0 <= inner < outer");
  if (!(noise >= 0.0)) throw ArgumentError("concentric spheres: noise must be nonnegative");
  if (dim < 1) throw ArgumentError("concentric spheres: dimension must be at least 1");
  SplitMix64 rng(seed);
  LabeledDataset ds;
  ds.points = Matrix(counts[0] + counts[1], dim);
  ds.labels.emplace();
  ds.name = "concentric-spheres";
  ds.provenance = seed_provenance("concentric", seed);
  std::vector<double> dir(dim);
  std::size_t row = 0;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < counts[s]; ++i, ++row) {
      random_direction(rng, dir);
      const double r = radii[s] + noise * rng.normal();
      for (std::size_t a = 0; a < dim; ++a) ds.points(row, a) = r * dir[a];
      ds.labels->push_back(s);
    }
  }
  return ds;
}

LabeledDataset default_concentric_spheres(std::uint64_t seed) {
  return gen_concentric_spheres({0.5, 3.0}, {1000, 1000}, 0.05, seed);
}

LabeledDataset default_four_blobs(std::uint64_t seed) {
  const double corners[4][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  const double sd[] = {0.05, 0.05};
  std::vector<MixtureComponent> comps;
  for (const auto& c : corners)
    comps.push_back({{c[0], c[1]}, rotated_covariance(sd, 0.0), 25});
  LabeledDataset ds = gen_gaussian_mixture(comps, seed);
  ds.name = "four-blobs";
  ds.provenance = seed_provenance("blobs", seed);
  return ds;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

LabeledDataset parse_csv(const std::string& text, const LabelColumn& label_column, bool has_header,
                         const std::string& source) {
  std::vector<std::string> lines = split_lines(text);
  if (!lines.empty() && lines.front().rfind("\xEF\xBB\xBF", 0) == 0) lines.front().erase(0, 3);
  if (lines.empty() || (has_header && lines.size() < 2))
    throw ParseError(source + ": no data rows");

  std::vector<std::string> header;
  std::size_t first_row = 0;
  if (has_header) {
    header = split_line(lines.front());
    first_row = 1;
  }
  const std::size_t width = split_line(lines[first_row]).size();

  std::optional<std::size_t> label_index;
  if (const auto* idx = std::get_if<std::size_t>(&label_column)) {
    if (*idx >= width)
      throw ArgumentError(source + ": label column " + std::to_string(*idx) + " does not exist (" +
                          std::to_string(width) + " columns)");
    label_index = *idx;
  } else if (const auto* name = std::get_if<std::string>(&label_column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) {
      // Allow a numeric name when there is no matching header cell.
      std::size_t idx = 0;
      const auto [p, ec] = std::from_chars(name->data(), name->data() + name->size(), idx);
      if (ec != std::errc() || p != name->data() + name->size() || idx >= width)
        throw ArgumentError(source + ": label column '" + *name + "' not found");
      label_index = idx;
    } else {
      label_index = static_cast<std::size_t>(it - header.begin());
    }
  }

  const std::size_t features = width - (label_index ? 1 : 0);
  if (features == 0) throw ParseError(source + ": no feature columns");
  LabeledDataset ds;
  ds.name = std::filesystem::path(source).stem().string();
  ds.provenance = "file:" + source;
  ds.points = Matrix(lines.size() - first_row, features);
  if (label_index) ds.labels.emplace();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (!label_index || c != *label_index) ds.feature_names.push_back(header[c]);

  std::map<std::string, std::size_t> class_ids;
  for (std::size_t l = first_row; l < lines.size(); ++l) {
    const auto cells = split_line(lines[l]);
    const std::size_t row = l - first_row;
    if (cells.size() != width)
      throw ParseError(source + ": row " + std::to_string(l + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    std::size_t f = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (label_index && c == *label_index) {
        auto [it, inserted] = class_ids.try_emplace(cells[c], ds.class_names.size());
        if (inserted) ds.class_names.push_back(cells[c]);
        ds.labels->push_back(it->second);
        continue;
      }
      double v = 0.0;
      if (!parse_double(cells[c], v))
        throw ParseError(source + ": row " + std::to_string(l + 1) + ", column " +
                         std::to_string(c + 1) + ": '" + cells[c] + "' is not a finite number");
      ds.points(row, f++) = v;
    }
  }
  return ds;
}

LabeledDataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column,
                        bool has_header) {
  return parse_csv(read_text_file(path), label_column, has_header, path.string());
}

std::string format_csv(const LabeledDataset& dataset, bool header) {
  std::string out;
  const std::size_t m = dataset.dim();
  if (header) {
    for (std::size_t c = 0; c < m; ++c) {
      if (c) out += ',';
      out += c < dataset.feature_names.size() ? dataset.feature_names[c] : "x" + std::to_string(c);
    }
    if (dataset.labels) out += ",label";
    out += '\n';
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t c = 0; c < m; ++c) {
      if (c) out += ',';
      out += format_double(dataset.points(i, c));
    }
    if (dataset.labels) {
      out += ',';
      const std::size_t l = (*dataset.labels)[i];
      out += l < dataset.class_names.size() ? dataset.class_names[l] : std::to_string(l);
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source + ": empty matrix");
  const std::size_t width = split_line(lines.front()).size();
  Matrix m(lines.size(), width);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto cells = split_line(lines[r]);
    if (cells.size() != width)
      throw ParseError(source + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    for (std::size_t c = 0; c < width; ++c)
      if (!parse_double(cells[c], m(r, c)))
        throw ParseError(source + ": row " + std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1) + ": '" + cells[c] + "' is not a finite number");
  }
  return m;
}

std::string format_matrix_csv(const Matrix& matrix) {
  std::string out;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (c) out += ',';
      out += format_double(matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pcm
