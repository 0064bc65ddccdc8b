#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pfoco/alg2.hpp"
#include "pfoco/problems.hpp"
#include "pfoco/run_log.hpp"

namespace pfoco {

struct MatrixCompletionSpec {
  Eigen::Index m = 20;
  Eigen::Index n = 20;
  double k = 2.0;
  Eigen::Index b = 40;
};

struct ExperimentConfig {
  std::string problem_type = "matrix_completion";  // or "quadratic"
  MatrixCompletionSpec matrix;
  QuadraticConfig quadratic;
  std::vector<std::string> algorithms{"pdmfw"};  // "pdmfw" and/or "alg1"
  std::string oracle = "ocg";                    // inner oracle of alg1
  std::vector<std::size_t> horizons{64};
  double beta = 0.0;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> tape_path;

  // Optional behaviour switches.
  StartRule start = StartRule::warm;
  HistoryIndex history = HistoryIndex::through_current;
  PerturbationRange perturbation = PerturbationRange::pseudocode;
  bool check_feasibility = true;
  bool write_records = false;  // sweep: per-cell record CSVs
  std::size_t benchmark_iters = 5000;
};

// Parses the JSON config. Throws ConfigError whose message starts with
// "config:<line>:".
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunSummary {
  std::string algorithm;
  std::string oracle;
  std::size_t T = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double regret = 0.0;
  double violation = 0.0;
  double cumulative_violation = 0.0;
  double sum_lambda_sq = 0.0;
  double final_lambda = 0.0;
  double wall_time_s = 0.0;
  double benchmark_objective = 0.0;
  double benchmark_gap = 0.0;
  bool benchmark_flag = false;  // true when the benchmark solve missed its tolerance
  std::size_t feasibility_checks = 0;
  // Derived parameters (logged, never read from the config).
  std::size_t blocks = 0;  // Q (alg1)
  std::size_t inner = 0;   // K
  double theta = 0.0;
  double mu = 0.0;
  double delta = 0.0;  // FTPL (pdmfw)
  // R D sqrt(d) (3 T^{1/2+beta} + T^{-(1/2+beta)} sum lambda_t^2), pdmfw only.
  double ftpl_regret_bound = 0.0;
};

std::string summary_json(const RunSummary& s);

struct CellKey {
  std::string algorithm;
  std::size_t T = 0;
  std::uint64_t seed = 0;
};

struct CellResult {
  RunSummary summary;
  RunLog log;
  Point x_star;
};

std::uint64_t algorithm_id(const std::string& algorithm);

// One (algorithm, T, seed) run with its own streams: the instance depends on
// the seed only, the rounds on (seed) and the algorithm on (seed, T,
// algorithm), so cells of one seed share the same instance and round prefix.
CellResult run_cell(const ExperimentConfig& config, const CellKey& key);

// All cells of horizons x seeds x algorithms, evaluated on a worker pool
// capped by PFOCO_THREADS. Results are ordered by (algorithm, T, seed).
std::vector<CellResult> run_grid(const ExperimentConfig& config);

std::size_t worker_count();

// Per-cell rows (sweep.csv) and per-(algorithm, T) aggregates.
std::string sweep_csv(const std::vector<RunSummary>& rows);
std::string sweep_aggregate_csv(const std::vector<RunSummary>& rows);
std::vector<RunSummary> parse_sweep_csv(const std::string& text);

// Writes regret.svg, violation.svg and cumulative_violation.svg (seed mean
// with min-max band per algorithm, log-scaled horizon axis). Returns the
// written paths.
std::vector<std::filesystem::path> write_plots(const std::vector<RunSummary>& rows,
                                               const std::filesystem::path& out_dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace pfoco
