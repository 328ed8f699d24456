#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pcm/baselines.hpp"
#include "pcm/eigen.hpp"
#include "pcm/error.hpp"
#include "pcm/eval.hpp"
#include "pcm/serialize.hpp"

#ifndef PCM_VERSION
#define PCM_VERSION "0.0.0"
#endif

namespace pcm::cli {
namespace {

using nlohmann::json;

struct InputOptions {
  std::string path;
  std::string label_col;
  bool no_header = false;
};

struct OutputOptions {
  std::string path;
  std::string format;
  bool timings = false;
};

struct KernelOptions {
  std::optional<double> sigma;
  std::optional<double> r_star;
  std::string kernel = "gaussian";
};

struct PcmOptions {
  KernelOptions kernel;
  std::optional<double> dt;
  std::size_t max_iters = 10000;
  double stop_tol = 1e-5;
  bool radius_stop_rule = false;
  double min_cluster_fraction = 0.05;
  std::optional<double> coalesce_eps;
  std::optional<double> prune_threshold;
};

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void add_input(CLI::App* cmd, InputOptions& in, bool labels) {
  cmd->add_option("input", in.path, "input CSV file")->required();
  cmd->add_flag("--no-header", in.no_header, "first line is data, not column names");
  if (labels) cmd->add_option("--label-col", in.label_col, "label column (name or 0-based index)");
}

void add_output(CLI::App* cmd, OutputOptions& out, const std::string& default_format) {
  cmd->add_option("--output,-o", out.path, "write here instead of stdout");
  cmd->add_option("--format", out.format, "output format (default " + default_format + ")")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timings", out.timings, "include wall-clock timings in the record");
}

void add_kernel(CLI::App* cmd, KernelOptions& k) {
  cmd->add_option("--sigma", k.sigma, "kernel bandwidth (auto-tuned when absent)");
  cmd->add_option("--rstar", k.r_star, "interaction cutoff (default 3 sigma)");
  cmd->add_option("--kernel", k.kernel, "potential kernel")
      ->check(CLI::IsMember({"gaussian", "quartic"}))
      ->capture_default_str();
}

void add_pcm(CLI::App* cmd, PcmOptions& p) {
  add_kernel(cmd, p.kernel);
  cmd->add_option("--dt", p.dt, "fixed Euler step (default: from the stability bound)");
  cmd->add_option("--max-iter", p.max_iters, "iteration cap")->capture_default_str();
  cmd->add_option("--stop-tol", p.stop_tol, "stop when dispersion per pair drops below this")
      ->capture_default_str();
  cmd->add_flag("--radius-stop-rule", p.radius_stop_rule, "stop when dispersion < N * r*");
  cmd->add_option("--min-cluster-frac", p.min_cluster_fraction,
                  "merge clusters smaller than this fraction of N")
      ->capture_default_str();
  cmd->add_option("--coalesce-eps", p.coalesce_eps, "fuse points closer than this before running");
  cmd->add_option("--prune-threshold", p.prune_threshold, "ignore pairs farther apart than this");
}

std::optional<PotentialSpec> resolve_kernel(const KernelOptions& k) {
  const KernelKind kind = kernel_from_string(k.kernel.c_str());
  if (kind == KernelKind::Quartic) {
    if (k.r_star) return PotentialSpec::quartic(*k.r_star);
    if (k.sigma) return PotentialSpec::quartic(3.0 * *k.sigma);
    throw ArgumentError("--kernel quartic needs --rstar or --sigma");
  }
  if (k.sigma && k.r_star) return PotentialSpec::gaussian(*k.sigma, *k.r_star);
  if (k.sigma) return PotentialSpec::gaussian(*k.sigma);
  if (k.r_star) return PotentialSpec::gaussian(*k.r_star / 3.0, *k.r_star);
  return std::nullopt;
}

PcmConfig resolve_pcm(const PcmOptions& p) {
  PcmConfig c;
  c.potential = resolve_kernel(p.kernel);
  c.dt = p.dt;
  c.max_iters = p.max_iters;
  c.stop_tol = p.stop_tol;
  c.radius_stop_rule = p.radius_stop_rule;
  c.min_cluster_fraction = p.min_cluster_fraction;
  c.coalesce_eps = p.coalesce_eps;
  c.prune_threshold = p.prune_threshold;
  c.validate();
  return c;
}

LabelColumn resolve_label(const std::string& col) {
  if (col.empty()) return std::monostate{};
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(col.data(), col.data() + col.size(), idx);
  if (ec == std::errc() && ptr == col.data() + col.size()) return idx;
  return col;
}

struct LoadedInput {
  LabeledDataset dataset;
  std::string checksum;
};

LoadedInput load_input(const InputOptions& in) {
  const std::string text = read_text_file(in.path);
  LoadedInput out;
  out.dataset = parse_csv(text, resolve_label(in.label_col), !in.no_header, in.path);
  out.checksum = fnv1a_hex(text);
  return out;
}

// Output path and format flags don't change the result, so they are left out
// of the echo; two runs differing only in destination produce equal records.
json command_echo(const std::vector<std::string>& args) {
  json echo = json::array();
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--output" || a == "-o") {
      ++i;
      continue;
    }
    if (a.rfind("--output=", 0) == 0) continue;
    echo.push_back(a);
  }
  return echo;
}

json record_header(const std::vector<std::string>& args, const std::string& input,
                   const std::string& checksum) {
  json r;
  r["tool"] = "pcmtool";
  r["version"] = PCM_VERSION;
  r["command"] = command_echo(args);
  if (!input.empty()) r["input"] = {{"path", input}, {"checksum", checksum}};
  return r;
}

json evaluation(const LabeledDataset& data, const std::vector<std::size_t>& predicted) {
  if (!data.labels) return nullptr;
  const auto& truth = *data.labels;
  SortedConfusion sorted = diagonal_heavy_sort(confusion_matrix(truth, predicted));
  return {{"total_error", total_error(sorted.matrix)},
          {"macro_f1", macro_f1(truth, predicted)},
          {"confusion", to_json(sorted.matrix)},
          {"class_names", data.class_names}};
}

std::string assignment_csv(const ClusterAssignment& a) {
  std::string s;
  for (std::size_t label : a.labels) {
    s += std::to_string(label);
    s += '\n';
  }
  return s;
}

void emit(const OutputOptions& out, const std::string& contents, std::ostream& stdout_stream) {
  if (out.path.empty()) {
    stdout_stream << contents;
  } else {
    write_file_atomic(out.path, contents);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Particle clustering and baselines", "pcmtool"};
  app.set_version_flag("--version", PCM_VERSION);
  app.require_subcommand(1);

  InputOptions in;
  OutputOptions output;
  PcmOptions pcm_opts;
  KernelOptions kernel_opts;
  std::size_t k = 0;
  std::size_t restarts = 100;
  std::uint64_t seed = 0;
  std::size_t max_iters = 300;

  CLI::App* cluster = app.add_subcommand("cluster", "run particle clustering on a CSV");
  add_input(cluster, in, true);
  add_output(cluster, output, "json");
  add_pcm(cluster, pcm_opts);

  std::optional<double> graph_sigma;
  std::optional<double> graph_dt;
  std::optional<double> threshold;
  std::size_t graph_dim = 1;
  std::size_t graph_iters = 10000;
  double graph_tol = 1e-5;
  double graph_frac = 0.05;
  CLI::App* graph = app.add_subcommand("graph-cluster", "cluster a distance-matrix CSV");
  graph->add_option("input", in.path, "square distance matrix CSV, no header")->required();
  add_output(graph, output, "json");
  graph->add_option("--sigma", graph_sigma, "kernel bandwidth (auto-tuned when absent)");
  graph->add_option("--dt", graph_dt, "fixed Euler step");
  graph->add_option("--max-iter", graph_iters)->capture_default_str();
  graph->add_option("--stop-tol", graph_tol)->capture_default_str();
  graph->add_option("--threshold", threshold, "cluster linking distance (default 3 sigma)");
  graph->add_option("--dim", graph_dim, "dimension divisor for sigma auto-tuning")
      ->capture_default_str();
  graph->add_option("--min-cluster-frac", graph_frac)->capture_default_str();

  CLI::App* km = app.add_subcommand("kmeans", "Lloyd k-means with restarts");
  add_input(km, in, true);
  add_output(km, output, "json");
  km->add_option("--k", k, "cluster count")->required();
  km->add_option("--restarts", restarts)->capture_default_str();
  km->add_option("--seed", seed)->capture_default_str();
  km->add_option("--max-iter", max_iters)->capture_default_str();

  std::optional<std::size_t> spectral_k;
  std::size_t spectral_restarts = 1;
  CLI::App* spec = app.add_subcommand("spectral", "spectral clustering on the potential Laplacian");
  add_input(spec, in, true);
  add_output(spec, output, "json");
  add_kernel(spec, kernel_opts);
  spec->add_option("--k", spectral_k, "cluster count (eigen-gap when absent)");
  spec->add_option("--restarts", spectral_restarts, "k-means restarts on the embedding")
      ->capture_default_str();
  spec->add_option("--seed", seed)->capture_default_str();

  std::string gen_kind;
  std::uint64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic dataset");
  gen->add_option("kind", gen_kind, "dataset kind")
      ->required()
      ->check(CLI::IsMember({"mixture", "spheres", "concentric", "blobs"}));
  gen->add_option("--seed", gen_seed)->capture_default_str();
  add_output(gen, output, "csv");

  std::string algorithms = "pcm,kmeans,spectral";
  std::size_t runs = 100;
  std::uint64_t data_seed = 1;
  bool parallel = false;
  std::optional<std::size_t> bench_k;
  std::size_t bench_restarts = 1;
  CLI::App* bench = app.add_subcommand("bench", "compare algorithms on a labeled dataset");
  bench->add_option("input", in.path, "labeled CSV, or mixture|spheres|concentric|blobs")
      ->required();
  bench->add_flag("--no-header", in.no_header);
  bench->add_option("--label-col", in.label_col, "label column (name or 0-based index)");
  add_output(bench, output, "json");
  add_pcm(bench, pcm_opts);
  bench->add_option("--algorithms", algorithms, "comma-separated list")->capture_default_str();
  bench->add_option("--runs", runs, "runs per stochastic algorithm")->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--data-seed", data_seed, "generator seed for built-in datasets")
      ->capture_default_str();
  bench->add_option("--k", bench_k, "k-means/spectral cluster count (default: class count)");
  bench->add_option("--restarts", bench_restarts, "k-means restarts per run")
      ->capture_default_str();
  bench->add_flag("--parallel", parallel, "run algorithms concurrently");

  CLI::App* eig = app.add_subcommand("eigen", "Laplacian eigenvalues at the data");
  add_input(eig, in, true);
  add_output(eig, output, "csv");
  add_kernel(eig, kernel_opts);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << PCM_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pcmtool: " << e.what() << "\n";
    err << "run 'pcmtool --help' for usage\n";
    return kExitUsage;
  }

  try {
    const auto start = Clock::now();
    if (output.format.empty()) output.format = (*gen || *eig) ? "csv" : "json";
    const bool json_out = output.format == "json";

    if (*cluster) {
      PcmConfig config = resolve_pcm(pcm_opts);
      LoadedInput loaded = load_input(in);
      PcmResult result = run_pcm(loaded.dataset.points, config);
      for (const auto& w : result.warnings) err << "pcmtool: warning: " << w << "\n";
      if (!json_out) {
        emit(output, assignment_csv(result.assignment), out);
        return kExitOk;
      }
      json rec = record_header(args, in.path, loaded.checksum);
      PcmConfig resolved = config;
      resolved.potential = result.potential;
      rec["config"] = to_json(resolved);
      rec["config"]["sigma_auto_tuned"] = !config.potential.has_value();
      rec["result"] = to_json(result);
      rec["evaluation"] = evaluation(loaded.dataset, result.assignment.labels);
      if (output.timings) rec["timings"] = {{"total_seconds", seconds_since(start)}};
      emit(output, dump(rec), out);
      return kExitOk;
    }

    if (*graph) {
      const std::string text = read_text_file(in.path);
      DistanceMatrix d{parse_matrix_csv(text, in.path)};
      GraphClusterConfig config;
      config.sigma = graph_sigma;
      config.dimension = graph_dim;
      config.dt = graph_dt;
      config.max_iters = graph_iters;
      config.stop_tol = graph_tol;
      config.threshold = threshold;
      config.min_cluster_fraction = graph_frac;
      GraphClusterResult result = run_graph_clustering(d, config);
      for (const auto& w : result.warnings) err << "pcmtool: warning: " << w << "\n";
      if (!json_out) {
        emit(output, assignment_csv(result.assignment), out);
        return kExitOk;
      }
      json rec = record_header(args, in.path, fnv1a_hex(text));
      rec["config"] = {{"sigma", result.sigma},
                       {"sigma_auto_tuned", !graph_sigma.has_value()},
                       {"dimension", graph_dim},
                       {"dt", result.dt},
                       {"max_iters", graph_iters},
                       {"stop_tol", graph_tol},
                       {"threshold", result.threshold},
                       {"min_cluster_fraction", graph_frac}};
      rec["result"] = to_json(result);
      if (output.timings) rec["timings"] = {{"total_seconds", seconds_since(start)}};
      emit(output, dump(rec), out);
      return kExitOk;
    }

    if (*km) {
      LoadedInput loaded = load_input(in);
      KMeansConfig config{k, restarts, max_iters, seed};
      KMeansResult result = kmeans(loaded.dataset.points, config);
      if (!json_out) {
        emit(output, assignment_csv(result.assignment), out);
        return kExitOk;
      }
      json rec = record_header(args, in.path, loaded.checksum);
      rec["config"] = {{"k", k}, {"restarts", restarts}, {"max_iters", max_iters}, {"seed", seed}};
      rec["result"] = {{"assignment", to_json(result.assignment)},
                       {"inertia", result.inertia},
                       {"best_restart", result.best_restart}};
      rec["evaluation"] = evaluation(loaded.dataset, result.assignment.labels);
      if (output.timings) rec["timings"] = {{"total_seconds", seconds_since(start)}};
      emit(output, dump(rec), out);
      return kExitOk;
    }

    if (*spec) {
      LoadedInput loaded = load_input(in);
      std::optional<PotentialSpec> potential = resolve_kernel(kernel_opts);
      const bool tuned = !potential.has_value();
      if (!potential) potential = PotentialSpec::gaussian(auto_tune_sigma(loaded.dataset.points));
      SpectralEmbedding emb = spectral_embedding(loaded.dataset.points, *potential, spectral_k);
      ClusterAssignment result =
          cluster_embedding(emb, loaded.dataset.points, seed, spectral_restarts);
      if (!json_out) {
        emit(output, assignment_csv(result), out);
        return kExitOk;
      }
      json rec = record_header(args, in.path, loaded.checksum);
      rec["config"] = {{"potential", to_json(*potential)},
                       {"sigma_auto_tuned", tuned},
                       {"k", emb.k},
                       {"k_from_eigen_gap", !spectral_k.has_value()},
                       {"restarts", spectral_restarts},
                       {"seed", seed}};
      rec["result"] = {{"assignment", to_json(result)}};
      rec["evaluation"] = evaluation(loaded.dataset, result.labels);
      if (output.timings) rec["timings"] = {{"total_seconds", seconds_since(start)}};
      emit(output, dump(rec), out);
      return kExitOk;
    }

    if (*gen) {
      LabeledDataset data;
      if (gen_kind == "mixture") {
        data = gen_gaussian_mixture(default_mixture_components(), gen_seed);
      } else if (gen_kind == "spheres") {
        data = default_hypersphere_clusters(gen_seed);
      } else if (gen_kind == "concentric") {
        data = default_concentric_spheres(gen_seed);
      } else {
        data = default_four_blobs(gen_seed);
      }
      emit(output, json_out ? dump(to_json(data)) : format_csv(data), out);
      return kExitOk;
    }

    if (*bench) {
      LabeledDataset data;
      std::string checksum;
      static const std::map<std::string, LabeledDataset (*)(std::uint64_t)> builtins = {
          {"mixture",
           [](std::uint64_t s) { return gen_gaussian_mixture(default_mixture_components(), s); }},
          {"spheres", &default_hypersphere_clusters},
          {"concentric", &default_concentric_spheres},
          {"blobs", &default_four_blobs}};
      auto it = builtins.find(in.path);
      if (it != builtins.end() && !std::filesystem::exists(in.path)) {
        data = it->second(data_seed);
      } else {
        LoadedInput loaded = load_input(in);
        data = std::move(loaded.dataset);
        checksum = loaded.checksum;
      }
      std::vector<std::string> names;
      std::stringstream ss(algorithms);
      for (std::string name; std::getline(ss, name, ',');)
        if (!name.empty()) names.push_back(name);
      BenchmarkOptions options;
      options.pcm = resolve_pcm(pcm_opts);
      options.k = bench_k;
      options.kmeans_restarts = bench_restarts;
      options.spectral_potential = resolve_kernel(pcm_opts.kernel);
      options.parallel = parallel;
      BenchmarkReport report = run_benchmark(data, names, runs, seed, options);
      if (!json_out) {
        emit(output, benchmark_csv(report), out);
        return kExitOk;
      }
      json rec = record_header(args, checksum.empty() ? std::string() : in.path, checksum);
      rec["config"] = {{"algorithms", names},
                       {"runs", runs},
                       {"seed", seed},
                       {"data_seed", data_seed},
                       {"pcm", to_json(options.pcm)},
                       {"kmeans_restarts", bench_restarts}};
      rec["result"] = to_json(report);
      if (!output.timings) {
        for (auto& a : rec["result"]["algorithms"]) a.erase("wall_time_seconds");
      } else {
        rec["timings"] = {{"total_seconds", seconds_since(start)}};
      }
      emit(output, dump(rec), out);
      return kExitOk;
    }

    if (*eig) {
      LoadedInput loaded = load_input(in);
      std::optional<PotentialSpec> potential = resolve_kernel(kernel_opts);
      const bool tuned = !potential.has_value();
      if (!potential) potential = PotentialSpec::gaussian(auto_tune_sigma(loaded.dataset.points));
      std::vector<double> values = laplacian_spectrum(loaded.dataset.points, *potential);
      const std::size_t gap = eigen_gap_count(values);
      if (!json_out) {
        std::string s = "index,eigenvalue\n";
        for (std::size_t i = 0; i < values.size(); ++i)
          s += std::to_string(i + 1) + "," + format_double(values[i]) + "\n";
        emit(output, s, out);
        err << "eigen gap count: " << gap << "\n";
        return kExitOk;
      }
      json rec = record_header(args, in.path, loaded.checksum);
      rec["config"] = {{"potential", to_json(*potential)}, {"sigma_auto_tuned", tuned}};
      rec["result"] = {{"eigenvalues", values}, {"eigen_gap_count", gap}};
      if (output.timings) rec["timings"] = {{"total_seconds", seconds_since(start)}};
      emit(output, dump(rec), out);
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    // ArgumentError, ConfigError and InsufficientDataError.
    err << "pcmtool: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "pcmtool: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace pcm::cli
