#pragma once

#include <nlohmann/json.hpp>

#include "pcm/baselines.hpp"
#include "pcm/datagen.hpp"
#include "pcm/eval.hpp"
#include "pcm/graphdyn.hpp"
#include "pcm/pcm.hpp"

namespace pcm {

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const PotentialSpec& spec);
nlohmann::json to_json(const PcmConfig& config);
nlohmann::json to_json(const ClusterAssignment& assignment);
nlohmann::json to_json(const PcmResult& result);
nlohmann::json to_json(const GraphClusterResult& result);
nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const BenchmarkReport& report);
nlohmann::json to_json(const LabeledDataset& dataset);

Matrix matrix_from_json(const nlohmann::json& j);
LabeledDataset dataset_from_json(const nlohmann::json& j);

// One row per algorithm: name,runs,min_error,mean_error,sd_error,mean_f1,
// sd_f1,wall_time_seconds,cluster_count.
std::string benchmark_csv(const BenchmarkReport& report);

// FNV-1a 64-bit, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace pcm
