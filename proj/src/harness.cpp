#include "pfoco/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "pfoco/alg1.hpp"
#include "pfoco/error.hpp"
#include "pfoco/metrics.hpp"
#include "pfoco/oracle.hpp"
#include "pfoco/tape.hpp"

namespace pfoco {

using nlohmann::json;

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

[[noreturn]] void config_fail(const std::string& text, const std::string& key, const std::string& msg) {
  throw ConfigError(fmt::format("config:{}: {}", line_of_key(text, key), msg));
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& text) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_fail(text, key, fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

template <class T>
std::vector<T> scalar_or_list(const json& j, const std::string& key, const std::string& text) {
  const json& v = j.at(key);
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const json::exception& e) {
    config_fail(text, key, fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

Rng rounds_stream(std::uint64_t seed) { return make_stream({seed, 0x524f554e44ull}); }  // "ROUND"

struct Scenario {
  Domain domain;
  ProblemBounds bounds;
  std::vector<RoundFunctions> rounds;
  FirstOrder total_loss;
  std::optional<FirstOrder> mean_constraint;
  std::optional<Point> planted;  // a known minimizer of the total loss, if any
};

Scenario build_matrix_completion(const MatrixCompletionInstance& inst,
                                 std::vector<MatrixCompletionRound> data) {
  Scenario s{inst.domain(), inst.bounds(), {}, {}, std::nullopt, inst.target_point()};
  s.total_loss = inst.total_loss(data);
  s.rounds.reserve(data.size());
  for (std::size_t t = 0; t < data.size(); ++t) s.rounds.push_back(inst.make_round(t + 1, std::move(data[t])));
  return s;
}

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t T, std::uint64_t seed) {
  if (cfg.problem_type == "matrix_completion") {
    if (cfg.tape_path) {
      RoundTape tape = read_tape(*cfg.tape_path);
      if (tape.horizon() < T) {
        throw Error(fmt::format("tape '{}' holds {} rounds, need {}", cfg.tape_path->string(),
                                tape.horizon(), T));
      }
      tape.rounds.resize(T);
      return build_matrix_completion(tape.instance(), std::move(tape.rounds));
    }
    const auto& mc = cfg.matrix;
    const auto inst = MatrixCompletionInstance::generate(mc.m, mc.n, mc.k, mc.b, seed);
    Rng rng = rounds_stream(seed);
    std::vector<MatrixCompletionRound> data;
    data.reserve(T);
    for (std::size_t t = 0; t < T; ++t) data.push_back(inst.draw_round(rng));
    return build_matrix_completion(inst, std::move(data));
  }
  const auto inst = StochasticQuadraticInstance::generate(cfg.quadratic, seed);
  Rng rng = rounds_stream(seed);
  std::vector<QuadraticRound> data;
  data.reserve(T);
  for (std::size_t t = 0; t < T; ++t) data.push_back(inst.draw_round(rng));
  Scenario s{inst.domain(), inst.bounds(), {}, inst.total_loss(data), std::nullopt, std::nullopt};
  if (!cfg.quadratic.zero_mean_constraint) s.mean_constraint = inst.mean_constraint();
  for (std::size_t t = 0; t < T; ++t) s.rounds.push_back(inst.make_round(t + 1, std::move(data[t])));
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config:{}: malformed JSON: {}", line_of_offset(text, e.byte), e.what()));
  }
  if (!j.is_object()) throw ConfigError("config:1: top level must be an object");

  static const std::vector<std::string> known = {"problem", "domain",     "algorithm",
                                                 "oracle",  "T",          "beta",
                                                 "seeds",   "output_dir", "tape_path",
                                                 "options"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_fail(text, key, fmt::format("unknown key '{}'", key));
    }
  }
  for (const char* required : {"problem", "algorithm", "T", "seeds"}) {
    if (!j.contains(required)) {
      throw ConfigError(fmt::format("config:1: missing required key '{}'", required));
    }
  }

  ExperimentConfig cfg;
  const json& prob = j.at("problem");
  if (!prob.is_object() || !prob.contains("type")) config_fail(text, "problem", "problem needs a 'type'");
  cfg.problem_type = get_as<std::string>(prob, "type", text);
  if (cfg.problem_type == "matrix_completion") {
    if (prob.contains("m")) cfg.matrix.m = get_as<Eigen::Index>(prob, "m", text);
    if (prob.contains("n")) cfg.matrix.n = get_as<Eigen::Index>(prob, "n", text);
    if (prob.contains("k")) cfg.matrix.k = get_as<double>(prob, "k", text);
    if (prob.contains("b")) cfg.matrix.b = get_as<Eigen::Index>(prob, "b", text);
    if (cfg.matrix.m < 1 || cfg.matrix.n < 1) config_fail(text, "m", "m and n must be >= 1");
    if (!(cfg.matrix.k >= 1.0)) config_fail(text, "k", "k must be >= 1");
    if (cfg.matrix.b < 1 || cfg.matrix.b > cfg.matrix.m * cfg.matrix.n) {
      config_fail(text, "b", "b must lie in [1, m n]");
    }
  } else if (cfg.problem_type == "quadratic") {
    auto& q = cfg.quadratic;
    if (prob.contains("dim")) q.dim = get_as<Eigen::Index>(prob, "dim", text);
    if (prob.contains("center_l1")) q.center_l1 = get_as<double>(prob, "center_l1", text);
    if (prob.contains("center_noise")) q.center_noise = get_as<double>(prob, "center_noise", text);
    if (prob.contains("constraint_noise")) {
      q.constraint_noise = get_as<double>(prob, "constraint_noise", text);
    }
    if (prob.contains("constraint_offset")) {
      q.constraint_offset = get_as<double>(prob, "constraint_offset", text);
    }
    if (prob.contains("constraint")) {
      const auto c = get_as<std::string>(prob, "constraint", text);
      if (c != "zero_mean" && c != "shifted") {
        config_fail(text, "constraint", "constraint must be 'zero_mean' or 'shifted'");
      }
      q.zero_mean_constraint = c == "zero_mean";
    }
    if (q.dim < 1) config_fail(text, "dim", "dim must be >= 1");
  } else {
    config_fail(text, "type", fmt::format("unknown problem type '{}'", cfg.problem_type));
  }

  if (j.contains("domain")) {
    const json& dom = j.at("domain");
    if (!dom.is_object() || !dom.contains("type")) config_fail(text, "domain", "domain needs a 'type'");
    const auto type = get_as<std::string>(dom, "type", text);
    const double radius = dom.contains("radius") ? get_as<double>(dom, "radius", text) : -1.0;
    if (cfg.problem_type == "matrix_completion") {
      if (type != "nuclear_ball") config_fail(text, "domain", "matrix_completion needs a nuclear_ball domain");
      if (radius > 0.0 && radius != cfg.matrix.k) {
        config_fail(text, "radius", "nuclear_ball radius must equal the problem's k");
      }
    } else {
      if (type != "l1_ball" && type != "box") config_fail(text, "domain", "quadratic domain must be l1_ball or box");
      cfg.quadratic.domain = type;
      if (dom.contains("radius")) {
        if (!(radius > 0.0)) config_fail(text, "radius", "radius must be > 0");
        cfg.quadratic.radius = radius;
      }
    }
  }

  cfg.algorithms = scalar_or_list<std::string>(j, "algorithm", text);
  for (const auto& a : cfg.algorithms) {
    if (a != "pdmfw" && a != "alg1") {
      config_fail(text, "algorithm", fmt::format("unknown algorithm '{}' (pdmfw or alg1)", a));
    }
  }
  if (j.contains("oracle")) {
    cfg.oracle = get_as<std::string>(j, "oracle", text);
    if (cfg.oracle != "ocg") config_fail(text, "oracle", fmt::format("unknown oracle '{}'", cfg.oracle));
  }
  cfg.horizons = scalar_or_list<std::size_t>(j, "T", text);
  if (cfg.horizons.empty()) config_fail(text, "T", "T must not be empty");
  for (std::size_t T : cfg.horizons) {
    if (T < 4) config_fail(text, "T", "every horizon T must be >= 4");
  }
  if (j.contains("beta")) cfg.beta = get_as<double>(j, "beta", text);
  if (!(cfg.beta >= 0.0 && cfg.beta < 0.5)) config_fail(text, "beta", "beta must lie in [0, 1/2)");
  const json& seeds = j.at("seeds");
  if (seeds.is_number_unsigned() || seeds.is_number_integer()) {
    const auto count = get_as<std::int64_t>(j, "seeds", text);
    if (count < 1) config_fail(text, "seeds", "seed count must be >= 1");
    cfg.seeds.clear();
    for (std::int64_t s = 1; s <= count; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  } else {
    cfg.seeds = scalar_or_list<std::uint64_t>(j, "seeds", text);
    if (cfg.seeds.empty()) config_fail(text, "seeds", "seeds must not be empty");
  }
  if (j.contains("output_dir")) cfg.output_dir = get_as<std::string>(j, "output_dir", text);
  if (j.contains("tape_path")) {
    cfg.tape_path = get_as<std::string>(j, "tape_path", text);
    if (cfg.problem_type != "matrix_completion") {
      config_fail(text, "tape_path", "round tapes are only defined for matrix_completion");
    }
  }

  if (j.contains("options")) {
    const json& opt = j.at("options");
    if (!opt.is_object()) config_fail(text, "options", "options must be an object");
    for (const auto& [key, _] : opt.items()) {
      static const std::vector<std::string> okeys = {"start",          "history",
                                                     "perturbation",   "check_feasibility",
                                                     "write_records",  "benchmark_iters"};
      if (std::find(okeys.begin(), okeys.end(), key) == okeys.end()) {
        config_fail(text, key, fmt::format("unknown option '{}'", key));
      }
    }
    if (opt.contains("start")) {
      const auto v = get_as<std::string>(opt, "start", text);
      if (v != "warm" && v != "cold") config_fail(text, "start", "start must be 'warm' or 'cold'");
      cfg.start = v == "warm" ? StartRule::warm : StartRule::cold;
    }
    if (opt.contains("history")) {
      const auto v = get_as<std::string>(opt, "history", text);
      if (v != "through_current" && v != "lagged") {
        config_fail(text, "history", "history must be 'through_current' or 'lagged'");
      }
      cfg.history = v == "lagged" ? HistoryIndex::lagged : HistoryIndex::through_current;
    }
    if (opt.contains("perturbation")) {
      const auto v = get_as<std::string>(opt, "perturbation", text);
      if (v != "pseudocode" && v != "analysis") {
        config_fail(text, "perturbation", "perturbation must be 'pseudocode' or 'analysis'");
      }
      cfg.perturbation = v == "analysis" ? PerturbationRange::analysis : PerturbationRange::pseudocode;
    }
    if (opt.contains("check_feasibility")) {
      cfg.check_feasibility = get_as<bool>(opt, "check_feasibility", text);
    }
    if (opt.contains("write_records")) cfg.write_records = get_as<bool>(opt, "write_records", text);
    if (opt.contains("benchmark_iters")) {
      cfg.benchmark_iters = get_as<std::size_t>(opt, "benchmark_iters", text);
      if (cfg.benchmark_iters < 1) config_fail(text, "benchmark_iters", "benchmark_iters must be >= 1");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(fmt::format("config:0: cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string summary_json(const RunSummary& s) {
  json j = {
      {"algorithm", s.algorithm},
      {"oracle", s.oracle},
      {"T", s.T},
      {"beta", s.beta},
      {"seed", s.seed},
      {"regret", s.regret},
      {"violation", s.violation},
      {"cumulative_violation", s.cumulative_violation},
      {"sum_lambda_sq", s.sum_lambda_sq},
      {"final_lambda", s.final_lambda},
      {"wall_time_s", s.wall_time_s},
      {"benchmark", {{"objective", s.benchmark_objective}, {"gap", s.benchmark_gap}, {"flag", s.benchmark_flag}}},
      {"feasibility_checks", s.feasibility_checks},
      {"params", {{"Q", s.blocks}, {"K", s.inner}, {"theta", s.theta}, {"mu", s.mu}, {"delta", s.delta}}},
  };
  if (s.algorithm == "pdmfw") j["ftpl_regret_bound"] = s.ftpl_regret_bound;
  return j.dump(2) + "\n";
}

std::uint64_t algorithm_id(const std::string& algorithm) {
  if (algorithm == "pdmfw") return 2;
  if (algorithm == "alg1") return 1;
  throw ConfigError(fmt::format("unknown algorithm '{}'", algorithm));
}

CellResult run_cell(const ExperimentConfig& cfg, const CellKey& key) {
  const auto started = std::chrono::steady_clock::now();
  Scenario sc = build_scenario(cfg, key.T, key.seed);
  Rng rng = make_stream({key.seed, key.T, algorithm_id(key.algorithm)});

  CellResult out;
  RunSummary& s = out.summary;
  s.algorithm = key.algorithm;
  s.T = key.T;
  s.beta = cfg.beta;
  s.seed = key.seed;
  FeasibilityOptions feas{cfg.check_feasibility, 1e-8};

  ReplayStream stream(sc.rounds);
  if (key.algorithm == "alg1") {
    auto factory = make_oracle_factory(cfg.oracle);
    s.oracle = factory->name();
    const Alg1Params p = derive_params_alg1(key.T, factory->meta(sc.domain), sc.bounds, cfg.beta);
    s.blocks = p.Q;
    s.inner = p.K;
    s.theta = p.theta;
    s.mu = p.mu;
    Alg1Options opts;
    opts.feasibility = feas;
    out.log = run_alg1(stream, sc.domain, sc.bounds, p, *factory, rng, opts);
  } else {
    s.oracle = "ftpl";
    const Alg2Params p = derive_params_alg2(key.T, sc.bounds, cfg.beta);
    s.inner = p.K;
    s.theta = p.theta;
    s.mu = p.mu;
    s.delta = p.delta;
    Alg2Options opts;
    opts.start = cfg.start;
    opts.history = cfg.history;
    opts.perturbation = cfg.perturbation;
    opts.feasibility = feas;
    out.log = run_pdmfw(stream, sc.domain, p, rng, opts);
    const double e = std::pow(static_cast<double>(key.T), 0.5 + cfg.beta);
    s.ftpl_regret_bound = sc.bounds.diameter_l1 * sc.bounds.grad_linf *
                          std::sqrt(static_cast<double>(sc.bounds.dim)) *
                          (3.0 * e + out.log.sum_lambda_sq / e);
  }

  BenchmarkOptions bo;
  bo.n_iters = cfg.benchmark_iters;
  bo.tol = 1e-6 * static_cast<double>(key.T);
  bo.step = FwStepRule::line_search;
  // The planted matrix attains zero total loss; starting there lets the
  // solver certify optimality (gap 0) on its first iteration.
  bo.x0 = sc.planted;
  Rng bench_rng = make_stream({key.seed, key.T, 0x42454e4348ull});  // "BENCH"
  const BenchmarkResult bench = benchmark_solve(
      sc.total_loss, sc.domain, bo, bench_rng, sc.mean_constraint ? &*sc.mean_constraint : nullptr);
  out.x_star = bench.x;
  s.benchmark_objective = bench.objective;
  s.benchmark_gap = bench.gap;
  s.benchmark_flag = !bench.converged;

  const auto regret = regret_curve(out.log.records, out.x_star, sc.rounds);
  s.regret = regret.empty() ? 0.0 : regret.back();
  const auto viol = violation_curve(out.log.records);
  s.violation = viol.empty() ? 0.0 : viol.back();
  const auto cviol = violation_curve(out.log.records, true);
  s.cumulative_violation = cviol.empty() ? 0.0 : cviol.back();
  s.sum_lambda_sq = out.log.sum_lambda_sq;
  s.final_lambda = out.log.final_lambda;
  s.feasibility_checks = out.log.feasibility_checks;
  s.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PFOCO_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

std::vector<CellResult> run_grid(const ExperimentConfig& cfg) {
  std::vector<CellKey> keys;
  for (const auto& a : cfg.algorithms)
    for (std::size_t T : cfg.horizons)
      for (std::uint64_t seed : cfg.seeds) keys.push_back({a, T, seed});

  std::vector<CellResult> results(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        results[i] = run_cell(cfg, keys[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(worker_count(), keys.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work);
    work();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::string sweep_csv(const std::vector<RunSummary>& rows) {
  std::string out =
      "algorithm,oracle,T,beta,seed,regret,violation,cumulative_violation,sum_lambda_sq,"
      "wall_time_s,benchmark_gap,benchmark_flag\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.6f},{:.17g},{}\n",
                       r.algorithm, r.oracle, r.T, r.beta, r.seed, r.regret, r.violation,
                       r.cumulative_violation, r.sum_lambda_sq, r.wall_time_s, r.benchmark_gap,
                       r.benchmark_flag ? 1 : 0);
  }
  return out;
}

std::string sweep_aggregate_csv(const std::vector<RunSummary>& rows) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const RunSummary*>> groups;
  for (const auto& r : rows) groups[{r.algorithm, r.T}].push_back(&r);
  std::string out =
      "algorithm,T,n,regret_mean,regret_min,regret_max,violation_mean,violation_stderr,"
      "violation_min,violation_max,cumulative_violation_mean\n";
  for (const auto& [key, members] : groups) {
    std::vector<double> reg, vio, cvio;
    for (const auto* m : members) {
      reg.push_back(m->regret);
      vio.push_back(m->violation);
      cvio.push_back(m->cumulative_violation);
    }
    const auto rs = sample_stats(reg), vs = sample_stats(vio), cs = sample_stats(cvio);
    out += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       key.first, key.second, rs.count, rs.mean, rs.min, rs.max, vs.mean,
                       vs.stderr_mean, vs.min, vs.max, cs.mean);
  }
  return out;
}

std::vector<RunSummary> parse_sweep_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw Error("sweep csv: empty input");
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(fmt::format("sweep csv: missing column '{}'", name));
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_alg = column("algorithm"), c_T = column("T"), c_seed = column("seed"),
                    c_reg = column("regret"), c_vio = column("violation"),
                    c_cvio = column("cumulative_violation");
  std::vector<RunSummary> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw Error(fmt::format("sweep csv: line {} has {} fields", lineno, cells.size()));
    RunSummary r;
    try {
      r.algorithm = cells[c_alg];
      r.T = std::stoul(cells[c_T]);
      r.seed = std::stoull(cells[c_seed]);
      r.regret = std::stod(cells[c_reg]);
      r.violation = std::stod(cells[c_vio]);
      r.cumulative_violation = std::stod(cells[c_cvio]);
    } catch (const std::exception&) {
      throw Error(fmt::format("sweep csv: line {} is malformed", lineno));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  os << text;
  if (!os) throw Error(fmt::format("write to '{}' failed", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace pfoco
