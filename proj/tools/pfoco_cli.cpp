#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "pfoco/acceptance.hpp"
#include "pfoco/error.hpp"
#include "pfoco/harness.hpp"
#include "pfoco/metrics.hpp"
#include "pfoco/tape.hpp"

namespace fs = std::filesystem;
using namespace pfoco;

namespace {

std::string cell_stem(const RunSummary& s) { return fmt::format("{}_T{}_seed{}", s.algorithm, s.T, s.seed); }

int cmd_run(const fs::path& config_path, const std::optional<fs::path>& out_override) {
  ExperimentConfig cfg = load_config(config_path);
  if (out_override) cfg.output_dir = *out_override;
  const auto cells = run_grid(cfg);
  const bool single = cells.size() == 1;
  for (const auto& c : cells) {
    const std::string stem = single ? "" : cell_stem(c.summary) + "_";
    write_text(cfg.output_dir / (stem + "records.csv"), records_csv(c.log.records));
    write_text(cfg.output_dir / (stem + "summary.json"), summary_json(c.summary));
    fmt::print("{} T={} seed={}: regret {:.6g}, violation {:.6g}, {:.2f}s\n", c.summary.algorithm, c.summary.T,
               c.summary.seed, c.summary.regret, c.summary.violation, c.summary.wall_time_s);
    if (c.summary.benchmark_flag) {
      fmt::print(stderr, "warning: benchmark solve for {} stopped at gap {:.3g}\n", cell_stem(c.summary),
                 c.summary.benchmark_gap);
    }
  }
  fmt::print("wrote {} run(s) to {}\n", cells.size(), cfg.output_dir.string());
  return 0;
}

int cmd_sweep(const fs::path& config_path, const std::optional<fs::path>& out_override) {
  ExperimentConfig cfg = load_config(config_path);
  if (out_override) cfg.output_dir = *out_override;
  const auto cells = run_grid(cfg);
  std::vector<RunSummary> rows;
  std::string summaries = "[\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    rows.push_back(c.summary);
    std::string js = summary_json(c.summary);
    js.pop_back();  // trailing newline
    summaries += js + (i + 1 < cells.size() ? ",\n" : "\n");
    if (cfg.write_records) {
      write_text(cfg.output_dir / "records" / (cell_stem(c.summary) + ".csv"), records_csv(c.log.records));
    }
  }
  summaries += "]\n";
  write_text(cfg.output_dir / "sweep.csv", sweep_csv(rows));
  write_text(cfg.output_dir / "aggregate.csv", sweep_aggregate_csv(rows));
  write_text(cfg.output_dir / "summaries.json", summaries);
  fmt::print("{} summaries written to {}\n", rows.size(), cfg.output_dir.string());
  return 0;
}

int cmd_plot(const fs::path& input, const fs::path& out_dir) {
  const auto rows = parse_sweep_csv(read_text(input));
  for (const auto& p : write_plots(rows, out_dir)) fmt::print("{}\n", p.string());
  return 0;
}

int cmd_verify(const std::vector<int>& only, std::uint64_t seed) {
  AcceptanceOptions opts;
  opts.master_seed = seed;
  opts.only = only;
  bool all = true;
  const auto results = run_acceptance(opts, [&](const CriterionResult& r) {
    all = all && r.passed;
    fmt::print("{}\n", format_result(r));
    std::fflush(stdout);
  });
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  fmt::print("{}/{} criteria passed\n", passed, results.size());
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free online convex optimization with long-term constraints"};
  app.require_subcommand(1);

  fs::path config_path;
  std::optional<fs::path> out_dir;
  auto* run = app.add_subcommand("run", "run one config, writing records CSV and summary JSON");
  run->add_option("-c,--config", config_path, "JSON config")->required();
  run->add_option("-o,--output", out_dir, "override output_dir");

  auto* sweep = app.add_subcommand("sweep", "run T x seeds x algorithms, writing aggregated CSVs");
  sweep->add_option("-c,--config", config_path, "JSON config")->required();
  sweep->add_option("-o,--output", out_dir, "override output_dir");

  fs::path plot_input, plot_out = ".";
  auto* plot = app.add_subcommand("plot", "render regret/violation SVGs from sweep.csv");
  plot->add_option("-i,--input", plot_input, "sweep.csv")->required();
  plot->add_option("-o,--output", plot_out, "output directory");

  std::vector<int> only;
  std::uint64_t verify_seed = AcceptanceOptions{}.master_seed;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", only, "criterion ids to run");
  verify->add_option("--seed", verify_seed, "master seed");

  auto* tape = app.add_subcommand("tape", "export or inspect matrix-completion round tapes");
  tape->require_subcommand(1);
  Eigen::Index m = 20, n = 20, b = 40;
  double k = 2.0;
  std::uint64_t T = 64, seed = 1;
  fs::path tape_path;
  auto* tape_export = tape->add_subcommand("export", "sample an instance and T rounds into a tape");
  tape_export->add_option("-m", m, "rows");
  tape_export->add_option("-n", n, "cols");
  tape_export->add_option("-k", k, "nuclear-ball radius");
  tape_export->add_option("-b", b, "entries revealed per round");
  tape_export->add_option("-T,--horizon", T, "rounds");
  tape_export->add_option("-s,--seed", seed, "instance seed");
  tape_export->add_option("-o,--output", tape_path, "tape file")->required();
  auto* tape_info = tape->add_subcommand("info", "print a tape's header");
  tape_info->add_option("file", tape_path, "tape file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*sweep) return cmd_sweep(config_path, out_dir);
    if (*plot) return cmd_plot(plot_input, plot_out);
    if (*verify) return cmd_verify(only, verify_seed);
    if (*tape_export) {
      if (m < 1 || n < 1 || b < 1 || b > m * n || !(k >= 1.0) || T < 1) {
        throw ConfigError("tape: need m, n >= 1, 1 <= b <= m n, k >= 1, T >= 1");
      }
      const auto inst = MatrixCompletionInstance::generate(m, n, k, b, seed);
      Rng rng = make_stream({seed, 0x524f554e44ull});
      write_tape(tape_path, record_tape(inst, T, rng));
      fmt::print("wrote {} rounds to {}\n", T, tape_path.string());
      return 0;
    }
    if (*tape_info) {
      const RoundTape t = read_tape(tape_path);
      fmt::print("m={} n={} k={:g} b={} T={} seed={}\n", t.m, t.n, t.k, t.b, t.horizon(), t.seed);
      return 0;
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
