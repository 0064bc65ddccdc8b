#include "pfoco/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "pfoco/alg1.hpp"
#include "pfoco/alg2.hpp"
#include "pfoco/domains.hpp"
#include "pfoco/ftpl.hpp"
#include "pfoco/functions.hpp"
#include "pfoco/harness.hpp"
#include "pfoco/metrics.hpp"
#include "pfoco/oracle.hpp"

namespace pfoco {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Random feasible points, drawn independently of the LMO code.
Eigen::VectorXd random_box_point(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, Rng& rng) {
  Eigen::VectorXd x(lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform(rng, lo[i], hi[i]);
  return x;
}

Eigen::VectorXd random_simplex_point(Eigen::Index d, Rng& rng) {
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = -std::log(uniform(rng, 1e-300, 1.0));
  return x / x.sum();
}

Eigen::VectorXd random_l1_point(Eigen::Index d, double r, Rng& rng) {
  Eigen::VectorXd x = random_simplex_point(d, rng) * r * uniform(rng, 0.0, 1.0);
  for (Eigen::Index i = 0; i < d; ++i)
    if (uniform(rng, 0.0, 1.0) < 0.5) x[i] = -x[i];
  return x;
}

CriterionResult lmo_correctness(std::uint64_t seed) {
  CriterionResult r{1, "lmo_correctness", true, "", 0.0, 10.0};
  Rng rng = make_stream({seed, 1});
  const double k = 2.0;
  const Domain ball = Domain::nuclear_ball(8, 8, k);
  double worst_rel = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    Eigen::MatrixXd w(8, 8);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = standard_normal(rng);
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(w).singularValues()[0];
    const Point wp = ball.make_point(Eigen::Map<Eigen::VectorXd>(w.data(), w.size()));
    const Point v = ball.lmo(wp, rng);
    const double got = dot(wp, v), want = -k * sigma;
    worst_rel = std::max(worst_rel, std::abs(got - want) / std::abs(want));
  }
  if (!(worst_rel <= 1e-6)) r.passed = false;

  const Eigen::Index d = 8;
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, -1.0), hi = Eigen::VectorXd::LinSpaced(d, 0.5, 2.0);
  const Domain box = Domain::box(lo, hi), l1 = Domain::l1_ball(d, 1.5), simplex = Domain::simplex(d);
  std::size_t violations = 0;
  for (int draw = 0; draw < 100; ++draw) {
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) w[i] = standard_normal(rng);
    const Point wp(w);
    const double vb = w.dot(box.lmo(wp, rng).values), vl = w.dot(l1.lmo(wp, rng).values),
                 vs = w.dot(simplex.lmo(wp, rng).values);
    for (int s = 0; s < 1000; ++s) {
      violations += vb > w.dot(random_box_point(lo, hi, rng)) + 1e-12;
      violations += vl > w.dot(random_l1_point(d, 1.5, rng)) + 1e-12;
      violations += vs > w.dot(random_simplex_point(d, rng)) + 1e-12;
    }
  }
  if (violations != 0) r.passed = false;
  r.detail = fmt::format("nuclear worst rel err {:.3g} (<= 1e-6); box/l1/simplex beaten {} of 300000 times",
                         worst_rel, violations);
  return r;
}

CriterionResult ftpl_bound(std::uint64_t seed) {
  CriterionResult r{2, "ftpl_regret_bound", true, "", 0.0, 30.0};
  const Eigen::Index d = 4;
  const std::size_t T = 1024;
  const double delta = 1.0 / 64.0;
  const Domain box = Domain::uniform_box(d, 0.0, 1.0);
  const double R = box.diameter();

  // Alternating +-1 coefficients with a slight bias: the classic sequence
  // that makes an unperturbed leader switch every round.
  Rng adv = make_stream({seed, 2, 0});
  std::vector<Point> ws;
  double sum_sq_inf = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      w[i] = (i % 2 == 0) ? sign : (uniform(adv, 0.0, 1.0) < 0.5 ? 1.0 : -1.0);
    }
    sum_sq_inf += w.lpNorm<Eigen::Infinity>() * w.lpNorm<Eigen::Infinity>();
    ws.emplace_back(std::move(w));
  }
  Eigen::VectorXd total = Eigen::VectorXd::Zero(d);
  for (const auto& w : ws) total += w.values;
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << d); ++mask) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
      if (mask & (1 << i)) v += total[i];
    best = std::min(best, v);
  }

  Rng rng = make_stream({seed, 2, 1});
  double mean_regret = 0.0;
  const int draws = 200;
  for (int draw = 0; draw < draws; ++draw) {
    Ftpl ftpl(box, delta, rng);
    double loss = 0.0;
    for (const auto& w : ws) {
      loss += dot(w, ftpl.select());
      ftpl.observe(w);
    }
    mean_regret += (loss - best) / draws;
  }
  const double bound = R / delta + delta * static_cast<double>(d) * R * sum_sq_inf;
  r.passed = mean_regret <= bound;
  r.detail = fmt::format("mean regret {:.4g} over {} draws <= bound {:.4g}", mean_regret, draws, bound);
  return r;
}

CriterionResult gamma_product(std::uint64_t) {
  CriterionResult r{3, "gamma_product_bound", true, "", 0.0, 1.0};
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (std::size_t K = 1; K <= 200; ++K) {
    for (std::size_t l = 1; l <= K + 1; ++l) {
      double prod = 1.0;
      for (std::size_t k = l; k <= K; ++k) prod *= 1.0 - fw_step_size(k);
      const double rhs = std::pow((static_cast<double>(l) + 1.0) / (static_cast<double>(K) + 2.0), 2);
      worst = std::max(worst, prod - rhs);
      ++checked;
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = fmt::format("{} (l, K) pairs, max(lhs - rhs) = {:.3g}", checked, worst);
  return r;
}

CriterionResult parameters(std::uint64_t) {
  CriterionResult r{4, "parameter_derivation", true, "", 0.0, 0.0};
  ProblemBounds b;
  b.grad_l2 = 3.0;
  b.grad_linf = 2.0;
  b.constraint = 1.0;
  b.diameter_l1 = 4.0;
  b.diameter_l2 = 2.0;
  b.dim = 10;
  b.smoothness = 1.0;
  const OracleMeta meta{0.75, 0.0, 2.0, 0.0};
  const Alg1Params p1 = derive_params_alg1(4096, meta, b, 0.0);
  const Alg2Params p2 = derive_params_alg2(256, b, 0.25);
  const double e1 = p1.theta * p1.mu * static_cast<double>(p1.Q + 1) - 1.0;
  const double e2 = p2.mu * p2.theta * static_cast<double>(p2.T + 2) - 1.0;
  const double eps = 4.0 * std::numeric_limits<double>::epsilon();
  r.passed = p1.Q == 16 && p1.K == 256 && p2.K == 64 && std::abs(e1) <= eps && std::abs(e2) <= eps;
  r.detail = fmt::format("(Q, K) = ({}, {}), K = {}, theta mu (Q+1) - 1 = {:.2g}, mu theta (T+2) - 1 = {:.2g}",
                         p1.Q, p1.K, p2.K, e1, e2);
  return r;
}

double reference_dual(double lambda, double g, double theta, double mu) {
  const double v = (1.0 - theta * mu) * lambda + mu * g;
  return v > 0.0 ? v : 0.0;
}

CriterionResult dual_exactness(std::uint64_t seed) {
  CriterionResult r{5, "dual_recursion_exactness", true, "", 0.0, 0.0};
  Rng rng = make_stream({seed, 5});
  std::size_t mismatches = 0, negatives = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double theta = std::exp(uniform(rng, -6.0, 4.0));
    const double mu = uniform(rng, 0.0, 1.0) / theta;  // theta mu in [0, 1)
    const double lambda = std::exp(uniform(rng, -10.0, 6.0)) * (i % 17 == 0 ? 0.0 : 1.0);
    const double g = uniform(rng, -50.0, 50.0);
    const double ref = reference_dual(lambda, g, theta, mu);
    for (double got : {dual_update(lambda, g, theta, mu), block_dual_update(lambda, g, theta, mu),
                       clamped_dual_step(lambda, g, theta, mu)}) {
      mismatches += std::bit_cast<std::uint64_t>(got) != std::bit_cast<std::uint64_t>(ref);
      negatives += !(got >= 0.0);
    }
  }
  r.passed = mismatches == 0 && negatives == 0;
  r.detail = fmt::format("{} tuples x 3 recursions: {} bit mismatches, {} negative multipliers", n, mismatches,
                         negatives);
  return r;
}

// Runs of criteria 6 and 7, shared with 8 and 9.
struct GrowthRun {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  std::vector<std::string> csv;  // per cell
  std::size_t exceptions = 0;
  std::string error;
  double seconds = 0.0;
};

ExperimentConfig pdmfw_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.problem_type = "matrix_completion";
  c.matrix = {20, 20, 2.0, 40};
  c.algorithms = {"pdmfw"};
  c.horizons = {64, 128, 256, 512};
  c.beta = 0.1;
  c.seeds.clear();
  for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(seed * 1000 + s);
  return c;
}

ExperimentConfig alg1_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.problem_type = "quadratic";
  c.algorithms = {"alg1"};
  c.oracle = "ocg";
  c.horizons = {256, 1024, 4096};
  c.beta = 0.0;
  c.seeds.clear();
  for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(seed * 1000 + s);
  return c;
}

GrowthRun execute(const ExperimentConfig& config) {
  GrowthRun run;
  run.config = config;
  const auto t0 = Clock::now();
  try {
    run.cells = run_grid(config);
    for (const auto& c : run.cells) run.csv.push_back(records_csv(c.log.records));
  } catch (const std::exception& e) {
    ++run.exceptions;
    run.error = e.what();
  }
  run.seconds = seconds_since(t0);
  return run;
}

struct SeedMeans {
  std::vector<double> T, regret;
  std::map<std::size_t, std::vector<double>> violation_by_T;
};

SeedMeans seed_means(const GrowthRun& run) {
  std::map<std::size_t, std::vector<double>> reg;
  SeedMeans m;
  for (const auto& c : run.cells) {
    reg[c.summary.T].push_back(c.summary.regret);
    m.violation_by_T[c.summary.T].push_back(c.summary.violation);
  }
  for (const auto& [T, v] : reg) {
    m.T.push_back(static_cast<double>(T));
    m.regret.push_back(sample_stats(v).mean);
  }
  return m;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += fmt::format("{}{:.4g}", s.empty() ? "" : " ", x);
  return s;
}

CriterionResult pdmfw_growth(const GrowthRun& run) {
  CriterionResult r{6, "pdmfw_growth", false, "", run.seconds, 300.0};
  if (run.exceptions) {
    r.detail = "run failed: " + run.error;
    return r;
  }
  const SeedMeans m = seed_means(run);
  const GrowthFit g = regret_growth(m.T, m.regret);
  const auto last = sample_stats(m.violation_by_T.rbegin()->second);
  std::vector<double> vmeans;
  for (const auto& [T, v] : m.violation_by_T) vmeans.push_back(sample_stats(v).mean);
  const GrowthFit vg = violation_growth(m.T, vmeans);
  const bool slope_ok = g.fit && g.fit->slope <= 0.7;
  const bool viol_ok = std::abs(last.mean) <= 3.0 * last.stderr_mean;
  r.passed = slope_ok && viol_ok;
  r.detail = fmt::format(
      "regret means [{}], slope {:.3f} (<= 0.7, r2 {:.3f}); violation at T=512 {:.4g} +- {:.3g} SE ({}); {}",
      join(m.regret), g.fit ? g.fit->slope : NAN, g.fit ? g.fit->r2 : NAN, last.mean, last.stderr_mean,
      viol_ok ? "within 3 SE" : "outside 3 SE",
      vg.fit ? fmt::format("violation slope {:.3f}", vg.fit->slope) : vg.note);
  return r;
}

CriterionResult alg1_growth(const GrowthRun& run) {
  CriterionResult r{7, "alg1_ocg_growth", false, "", run.seconds, 300.0};
  if (run.exceptions) {
    r.detail = "run failed: " + run.error;
    return r;
  }
  const SeedMeans m = seed_means(run);
  const GrowthFit g = regret_growth(m.T, m.regret);
  const double limit = (2.0 - 0.75) / (3.0 - 1.5) + 0.1;
  r.passed = g.fit && g.fit->slope <= limit;
  r.detail = fmt::format("regret means [{}], slope {:.3f} (<= {:.4f}, r2 {:.3f})", join(m.regret),
                         g.fit ? g.fit->slope : NAN, limit, g.fit ? g.fit->r2 : NAN);
  return r;
}

CriterionResult feasibility(const std::vector<const GrowthRun*>& runs) {
  CriterionResult r{8, "feasibility_sweep", false, "", 0.0, 0.0};
  std::size_t exceptions = 0, checks = 0, cells = 0, logged = 0;
  for (const auto* run : runs) {
    exceptions += run->exceptions;
    for (const auto& c : run->cells) {
      checks += c.log.feasibility_checks;
      logged += c.log.records.size();
      ++cells;
    }
  }
  // Every logged iterate is checked, so the count can't fall below the
  // number of rounds.
  r.passed = exceptions == 0 && cells > 0 && checks >= logged;
  r.detail = fmt::format("{} cells, {} logged rounds, {} passed contains() checks, {} exceptions", cells, logged,
                         checks, exceptions);
  return r;
}

CriterionResult determinism(const std::vector<const GrowthRun*>& runs) {
  CriterionResult r{9, "determinism", true, "", 0.0, 0.0};
  const auto t0 = Clock::now();
  std::size_t compared = 0, differing = 0;
  for (const auto* run : runs) {
    if (run->exceptions) {
      r.passed = false;
      continue;
    }
    // Repeat the first seed at every horizon.
    ExperimentConfig c = run->config;
    c.seeds = {run->config.seeds.front()};
    const GrowthRun again = execute(c);
    if (again.exceptions) {
      r.passed = false;
      continue;
    }
    for (std::size_t i = 0; i < again.cells.size(); ++i) {
      const auto& key = again.cells[i].summary;
      for (std::size_t j = 0; j < run->cells.size(); ++j) {
        const auto& orig = run->cells[j].summary;
        if (orig.T == key.T && orig.seed == key.seed && orig.algorithm == key.algorithm) {
          ++compared;
          differing += again.csv[i] != run->csv[j];
        }
      }
    }
  }
  r.passed = r.passed && compared > 0 && differing == 0;
  r.seconds = seconds_since(t0);
  r.detail = fmt::format("{} repeated runs, {} record CSVs differ", compared, differing);
  return r;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  const std::string budget = r.budget_s > 0.0 ? fmt::format("/{:g}s", r.budget_s) : "";
  return fmt::format("{}  {} {:<26} {:.2f}s{:<6} {}", r.passed ? "PASS" : "FAIL", r.id, r.name, r.seconds, budget,
                     r.detail);
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& report) {
  auto wanted = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  std::vector<CriterionResult> results;
  auto finish = [&](CriterionResult r) {
    if (r.budget_s > 0.0 && r.seconds > r.budget_s) {
      r.passed = false;
      r.detail += fmt::format(" [over the {:g}s budget]", r.budget_s);
    }
    if (report) report(r);
    results.push_back(std::move(r));
  };
  auto timed = [&](int id, CriterionResult (*fn)(std::uint64_t)) {
    if (!wanted(id)) return;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = fn(options.master_seed);
    } catch (const std::exception& e) {
      r = CriterionResult{id, "criterion", false, fmt::format("exception: {}", e.what()), 0.0, 0.0};
    }
    r.seconds = seconds_since(t0);
    finish(std::move(r));
  };
  timed(1, lmo_correctness);
  timed(2, ftpl_bound);
  timed(3, gamma_product);
  timed(4, parameters);
  timed(5, dual_exactness);

  const bool need_runs = wanted(6) || wanted(7) || wanted(8) || wanted(9);
  if (!need_runs) return results;
  std::optional<GrowthRun> pdmfw, alg1;
  if (wanted(6) || wanted(8) || wanted(9)) {
    pdmfw = execute(pdmfw_config(options.master_seed));
    if (wanted(6)) finish(pdmfw_growth(*pdmfw));
  }
  if (wanted(7) || wanted(8) || wanted(9)) {
    alg1 = execute(alg1_config(options.master_seed));
    if (wanted(7)) finish(alg1_growth(*alg1));
  }
  std::vector<const GrowthRun*> runs;
  if (pdmfw) runs.push_back(&*pdmfw);
  if (alg1) runs.push_back(&*alg1);
  if (wanted(8)) finish(feasibility(runs));
  if (wanted(9)) finish(determinism(runs));
  return results;
}

}  // namespace pfoco
