#include "pfoco/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

// --- matrix completion ------------------------------------------------------

MatrixCompletionInstance MatrixCompletionInstance::generate(Eigen::Index m, Eigen::Index n,
                                                            double k, Eigen::Index b,
                                                            std::uint64_t seed) {
  if (m < 1 || n < 1) throw ConfigError("matrix_completion: m and n must be >= 1");
  Rng rng = make_stream({seed, 0x4d4154u});  // "MAT"
  const Eigen::Index rank = std::min<Eigen::Index>({5, m, n});
  Eigen::MatrixXd a(m, rank), bm(n, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = standard_normal(rng);
  for (Eigen::Index j = 0; j < rank; ++j)
    for (Eigen::Index i = 0; i < n; ++i) bm(i, j) = standard_normal(rng);
  Eigen::MatrixXd target = a * bm.transpose();
  target /= nuclear_norm(target);
  return from_target(std::move(target), k, b, seed);
}

MatrixCompletionInstance MatrixCompletionInstance::from_target(Eigen::MatrixXd target, double k,
                                                               Eigen::Index b,
                                                               std::uint64_t seed) {
  const Eigen::Index m = target.rows(), n = target.cols();
  if (m < 1 || n < 1) throw ConfigError("matrix_completion: m and n must be >= 1");
  if (!(k >= 1.0)) throw ConfigError(fmt::format("matrix_completion: k = {} must be >= 1", k));
  if (b < 1 || b > m * n) {
    throw ConfigError(fmt::format("matrix_completion: b = {} must lie in [1, m n = {}]", b, m * n));
  }
  if (!target.allFinite()) throw ConfigError("matrix_completion: target is not finite");
  MatrixCompletionInstance inst;
  inst.m_ = m;
  inst.n_ = n;
  inst.k_ = k;
  inst.b_ = b;
  inst.seed_ = seed;
  inst.target_ = std::make_shared<const Eigen::MatrixXd>(std::move(target));
  return inst;
}

Domain MatrixCompletionInstance::domain() const { return Domain::nuclear_ball(m_, n_, k_); }

ProblemBounds MatrixCompletionInstance::bounds() const {
  const double mn = static_cast<double>(m_) * static_cast<double>(n_);
  ProblemBounds pb;
  pb.grad_linf = k_ + 1.0;
  pb.grad_l2 = std::max(k_ + 1.0, std::sqrt(mn));
  pb.smoothness = 1.0;
  pb.constraint = k_ * std::sqrt(mn);
  const Domain d = domain();
  pb.diameter_l1 = d.diameter();
  pb.diameter_l2 = d.l2_diameter();
  pb.dim = static_cast<std::size_t>(m_ * n_);
  return pb;
}

Point MatrixCompletionInstance::target_point() const {
  return Point(Eigen::Map<const Eigen::VectorXd>(target_->data(), target_->size()), Shape{m_, n_});
}

MatrixCompletionRound MatrixCompletionInstance::draw_round(Rng& rng) const {
  const Eigen::Index total = m_ * n_;
  MatrixCompletionRound out;
  // Partial Fisher-Yates: the first b slots form a uniform size-b subset.
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(total));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < b_; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, total - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  out.entries.assign(pool.begin(), pool.begin() + b_);
  std::sort(out.entries.begin(), out.entries.end());
  out.constraint.resize(m_, n_);
  for (Eigen::Index j = 0; j < n_; ++j)
    for (Eigen::Index i = 0; i < m_; ++i) out.constraint(i, j) = uniform(rng, -1.0, 1.0);
  return out;
}

RoundFunctions MatrixCompletionInstance::make_round(std::size_t t,
                                                    MatrixCompletionRound data) const {
  auto round = std::make_shared<const MatrixCompletionRound>(std::move(data));
  auto target = target_;
  const Shape shape{m_, n_};
  RoundFunctions rf;
  rf.t = t;
  rf.f = [round, target, shape](const Point& x) {
    Evaluation e;
    e.gradient = Point(Eigen::VectorXd::Zero(x.size()), shape);
    const double* mt = target->data();
    for (Eigen::Index idx : round->entries) {
      const double r = x.values[idx] - mt[idx];
      e.value += 0.5 * r * r;
      e.gradient.values[idx] = r;
    }
    return e;
  };
  rf.g = [round, shape](const Point& x) {
    Eigen::Map<const Eigen::VectorXd> gv(round->constraint.data(), round->constraint.size());
    return Evaluation{gv.dot(x.values), Point(gv, shape)};
  };
  return rf;
}

FirstOrder MatrixCompletionInstance::total_loss(
    std::span<const MatrixCompletionRound> rounds) const {
  auto counts = std::make_shared<Eigen::VectorXd>(Eigen::VectorXd::Zero(m_ * n_));
  for (const auto& r : rounds)
    for (Eigen::Index idx : r.entries) (*counts)[idx] += 1.0;
  auto target = target_;
  const Shape shape{m_, n_};
  return [counts, target, shape](const Point& x) {
    Eigen::Map<const Eigen::VectorXd> mt(target->data(), target->size());
    Eigen::VectorXd resid = x.values - mt;
    Eigen::VectorXd grad = counts->cwiseProduct(resid);
    return Evaluation{0.5 * resid.dot(grad), Point(std::move(grad), shape)};
  };
}

// --- stochastic quadratic ---------------------------------------------------

StochasticQuadraticInstance StochasticQuadraticInstance::generate(const QuadraticConfig& config,
                                                                  std::uint64_t seed) {
  if (config.dim < 1) throw ConfigError("quadratic: dim must be >= 1");
  if (config.domain != "l1_ball" && config.domain != "box") {
    throw ConfigError(fmt::format("quadratic: unknown domain '{}' (l1_ball or box)", config.domain));
  }
  if (!(config.radius > 0.0)) throw ConfigError("quadratic: radius must be > 0");
  if (config.center_noise < 0.0 || config.constraint_noise < 0.0 || config.center_l1 < 0.0) {
    throw ConfigError("quadratic: scales must be nonnegative");
  }
  StochasticQuadraticInstance inst;
  inst.config_ = config;
  Rng rng = make_stream({seed, 0x515541u});  // "QUA"
  const Eigen::Index d = config.dim;
  inst.center_.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) inst.center_[i] = uniform(rng, -1.0, 1.0);
  const double l1 = inst.center_.lpNorm<1>();
  inst.center_ *= l1 > 0.0 ? config.center_l1 / l1 : 0.0;
  inst.direction_ = Eigen::VectorXd::Zero(d);
  if (!config.zero_mean_constraint) {
    for (Eigen::Index i = 0; i < d; ++i) inst.direction_[i] = uniform(rng, -1.0, 1.0);
    inst.direction_ /= inst.direction_.cwiseAbs().maxCoeff();
    inst.offset_ = config.constraint_offset;
    if (!(inst.offset_ > 0.0)) throw ConfigError("quadratic: constraint_offset must be > 0");
  }
  return inst;
}

Domain StochasticQuadraticInstance::domain() const {
  if (config_.domain == "box") return Domain::uniform_box(config_.dim, -config_.radius, config_.radius);
  return Domain::l1_ball(config_.dim, config_.radius);
}

ProblemBounds StochasticQuadraticInstance::bounds() const {
  const Domain dom = domain();
  const double sqrt_d = std::sqrt(static_cast<double>(config_.dim));
  const double f_inf = dom.max_abs_entry() + center_.cwiseAbs().maxCoeff() + config_.center_noise;
  const double f_2 = dom.max_l2_norm() + center_.norm() + config_.center_noise * sqrt_d;
  const double a_inf = direction_.cwiseAbs().maxCoeff() + config_.constraint_noise;
  const double a_2 = direction_.norm() + config_.constraint_noise * sqrt_d;
  ProblemBounds pb;
  pb.grad_linf = std::max(f_inf, a_inf);
  pb.grad_l2 = std::max(f_2, a_2);
  pb.smoothness = 1.0;
  pb.constraint = a_inf * dom.max_l1_norm() + offset_;
  pb.diameter_l1 = dom.diameter();
  pb.diameter_l2 = dom.l2_diameter();
  pb.dim = static_cast<std::size_t>(config_.dim);
  return pb;
}

QuadraticRound StochasticQuadraticInstance::draw_round(Rng& rng) const {
  const Eigen::Index d = config_.dim;
  QuadraticRound r{center_, direction_};
  for (Eigen::Index i = 0; i < d; ++i) r.center[i] += config_.center_noise * uniform(rng, -1.0, 1.0);
  for (Eigen::Index i = 0; i < d; ++i)
    r.direction[i] += config_.constraint_noise * uniform(rng, -1.0, 1.0);
  return r;
}

RoundFunctions StochasticQuadraticInstance::make_round(std::size_t t, QuadraticRound data) const {
  auto round = std::make_shared<const QuadraticRound>(std::move(data));
  const double b = offset_;
  RoundFunctions rf;
  rf.t = t;
  rf.f = [round](const Point& x) {
    Eigen::VectorXd r = x.values - round->center;
    return Evaluation{0.5 * r.squaredNorm(), Point(std::move(r))};
  };
  rf.g = [round, b](const Point& x) {
    return Evaluation{round->direction.dot(x.values) - b, Point(round->direction)};
  };
  return rf;
}

FirstOrder StochasticQuadraticInstance::mean_constraint() const {
  const Eigen::VectorXd a = direction_;
  const double b = offset_;
  return [a, b](const Point& x) { return Evaluation{a.dot(x.values) - b, Point(a)}; };
}

FirstOrder StochasticQuadraticInstance::total_loss(std::span<const QuadraticRound> rounds) const {
  Eigen::VectorXd csum = Eigen::VectorXd::Zero(config_.dim);
  double csq = 0.0;
  for (const auto& r : rounds) {
    csum += r.center;
    csq += r.center.squaredNorm();
  }
  const double count = static_cast<double>(rounds.size());
  return [csum, csq, count](const Point& x) {
    const double value = 0.5 * count * x.values.squaredNorm() - csum.dot(x.values) + 0.5 * csq;
    return Evaluation{value, Point(count * x.values - csum)};
  };
}

// --- offline benchmark ------------------------------------------------------

namespace {

double line_search(const FirstOrder& objective, const Point& x, const Eigen::VectorXd& dir) {
  auto slope = [&](double gamma) {
    Point y(x.values + gamma * dir, x.shape);
    return objective(y).gradient.values.dot(dir);
  };
  if (slope(1.0) <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BenchmarkResult frank_wolfe(const FirstOrder& objective, const Domain& domain, const Point& x0,
                            std::size_t n_iters, double tol, FwStepRule step, Rng& rng,
                            bool keep_trace) {
  if (!domain.contains(x0, 1e-8)) throw Error("frank_wolfe: start point outside the domain");
  BenchmarkResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.gap = std::numeric_limits<double>::infinity();
  Point x = x0;
  for (std::size_t k = 1; k <= n_iters; ++k) {
    const Evaluation e = objective(x);
    const Point v = domain.lmo(e.gradient, rng);
    const double gap = e.gradient.values.dot(x.values - v.values);
    if (keep_trace) best.trace.push_back(e.value);
    best.iterations = k;
    if (e.value <= best.objective) {
      best.objective = e.value;
      best.x = x;
    }
    best.gap = std::min(best.gap, gap);
    if (gap <= tol) {
      best.objective = e.value;
      best.x = x;
      best.gap = gap;
      best.converged = true;
      return best;
    }
    const Eigen::VectorXd dir = v.values - x.values;
    const double gamma =
        step == FwStepRule::open_loop ? 2.0 / (static_cast<double>(k) + 1.0) : line_search(objective, x, dir);
    x.values += gamma * dir;
  }
  const Evaluation e = objective(x);
  if (e.value <= best.objective) {
    best.objective = e.value;
    best.x = x;
  }
  return best;
}

BenchmarkResult benchmark_solve(const FirstOrder& objective, const Domain& domain,
                                const BenchmarkOptions& options, Rng& rng,
                                const FirstOrder* mean_constraint) {
  const Point start = options.x0 ? *options.x0 : domain.canonical_point();
  if (!mean_constraint) {
    return frank_wolfe(objective, domain, start, options.n_iters, options.tol, options.step, rng,
                       options.keep_trace);
  }

  double penalty = options.initial_penalty;
  if (!(penalty > 0.0)) throw ConfigError("benchmark_solve: initial_penalty must be > 0");
  Point x = start;
  BenchmarkResult res;
  for (int round = 0; round <= options.max_doublings; ++round) {
    const FirstOrder& gbar = *mean_constraint;
    FirstOrder surrogate = [&objective, &gbar, penalty](const Point& y) {
      Evaluation e = objective(y);
      const Evaluation c = gbar(y);
      if (c.value > 0.0) {
        e.value += 0.5 * penalty * c.value * c.value;
        e.gradient.values += penalty * c.value * c.gradient.values;
      }
      return e;
    };
    res = frank_wolfe(surrogate, domain, x, options.n_iters, options.tol, options.step, rng,
                      options.keep_trace);
    x = res.x;
    res.penalty = penalty;
    res.mean_constraint = gbar(x).value;
    if (res.mean_constraint <= options.feasibility_tol) break;
    penalty *= 2.0;
  }
  res.objective = objective(res.x).value;
  if (res.mean_constraint > options.feasibility_tol) res.converged = false;
  return res;
}

}  // namespace pfoco
