#include "pcm/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "pcm/error.hpp"

namespace pcm {

using nlohmann::json;

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix JSON must be an array of rows");
  if (j.empty()) return {};
  const std::size_t cols = j.front().size();
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix JSON rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json to_json(const PotentialSpec& spec) {
  return {{"kind", to_string(spec.kind)}, {"sigma", spec.sigma}, {"r_star", spec.r_star}};
}

json to_json(const PcmConfig& c) {
  json j;
  j["potential"] = c.potential ? to_json(*c.potential) : json(nullptr);
  j["dt"] = c.dt ? json(*c.dt) : json(nullptr);
  j["max_iters"] = c.max_iters;
  j["stop_tol"] = c.stop_tol;
  j["radius_stop_rule"] = c.radius_stop_rule;
  j["min_cluster_fraction"] = c.min_cluster_fraction;
  j["coalesce_eps"] = c.coalesce_eps ? json(*c.coalesce_eps) : json(nullptr);
  j["prune_threshold"] = c.prune_threshold ? json(*c.prune_threshold) : json(nullptr);
  j["dt_refresh_interval"] = c.dt_refresh_interval;
  return j;
}

json to_json(const ClusterAssignment& a) {
  return {{"cluster_count", a.cluster_count()},
          {"labels", a.labels},
          {"sizes", a.sizes},
          {"centers", to_json(a.centers)}};
}

json to_json(const PcmResult& r) {
  return {{"assignment", to_json(r.assignment)},
          {"iterations_used", r.iterations_used},
          {"converged", r.converged},
          {"dispersion_trace", r.dispersion_trace},
          {"initial_spread", r.initial_spread},
          {"warnings", r.warnings},
          {"tuned_sigma", r.tuned_sigma},
          {"potential", to_json(r.potential)},
          {"final_dt", r.final_dt},
          {"particle_count", r.particle_count},
          {"pre_merge_cluster_count", r.pre_merge_cluster_count}};
}

json to_json(const GraphClusterResult& r) {
  return {{"assignment", to_json(r.assignment)},
          {"iterations_used", r.evolution.iterations},
          {"converged", r.evolution.converged},
          {"clamp_events", r.evolution.clamp_events},
          {"sigma", r.sigma},
          {"dt", r.dt},
          {"threshold", r.threshold},
          {"warnings", r.warnings}};
}

json to_json(const ConfusionMatrix& cm) {
  json rows = json::array();
  for (std::size_t r = 0; r < cm.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < cm.cols; ++c) row.push_back(cm(r, c));
    rows.push_back(row);
  }
  return {{"counts", rows}, {"row_labels", cm.row_labels}, {"col_labels", cm.col_labels}};
}

json to_json(const BenchmarkReport& report) {
  json algos = json::array();
  for (const auto& a : report.algorithms) {
    algos.push_back({{"name", a.name},
                     {"runs", a.runs},
                     {"min_error", a.min_error},
                     {"mean_error", a.mean_error},
                     {"sd_error", a.sd_error},
                     {"mean_f1", a.mean_f1},
                     {"sd_f1", a.sd_f1},
                     {"wall_time_seconds", a.wall_time_seconds},
                     {"cluster_count", a.cluster_count},
                     {"errors", a.errors},
                     {"best_confusion", to_json(a.best_confusion)}});
  }
  return {{"dataset",
           {{"name", report.dataset},
            {"provenance", report.provenance},
            {"points", report.points},
            {"dimension", report.dimension},
            {"classes", report.classes}}},
          {"runs", report.runs},
          {"seed", report.seed},
          {"algorithms", algos}};
}

json to_json(const LabeledDataset& ds) {
  json j{{"name", ds.name},
         {"provenance", ds.provenance},
         {"points", to_json(ds.points)},
         {"feature_names", ds.feature_names},
         {"class_names", ds.class_names}};
  j["labels"] = ds.labels ? json(*ds.labels) : json(nullptr);
  return j;
}

LabeledDataset dataset_from_json(const json& j) {
  LabeledDataset ds;
  try {
    ds.name = j.value("name", std::string{});
    ds.provenance = j.value("provenance", std::string{});
    ds.points = matrix_from_json(j.at("points"));
    if (j.contains("feature_names")) ds.feature_names = j["feature_names"].get<std::vector<std::string>>();
    if (j.contains("class_names")) ds.class_names = j["class_names"].get<std::vector<std::string>>();
    if (j.contains("labels") && !j["labels"].is_null())
      ds.labels = j["labels"].get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset JSON: ") + e.what());
  }
  ds.validate();
  return ds;
}

std::string benchmark_csv(const BenchmarkReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "name,runs,min_error,mean_error,sd_error,mean_f1,sd_f1,wall_time_seconds,cluster_count\n";
  for (const auto& a : report.algorithms)
    os << a.name << ',' << a.runs << ',' << a.min_error << ',' << a.mean_error << ',' << a.sd_error
       << ',' << a.mean_f1 << ',' << a.sd_f1 << ',' << a.wall_time_seconds << ',' << a.cluster_count
       << '\n';
  return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pcm
