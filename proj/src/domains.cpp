#include "pfoco/domains.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

namespace {

constexpr double kNullNorm = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::VectorXd random_unit(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd v(n);
  double norm = 0.0;
  while (norm < 1e-8) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace

int default_power_iterations(Eigen::Index rows, Eigen::Index cols) {
  const double big = static_cast<double>(std::max<Eigen::Index>({rows, cols, 1}));
  return 1 + static_cast<int>(std::ceil(std::log(big) * 10.0));
}

std::optional<SingularTriplet> power_iteration(const Eigen::MatrixXd& w, int max_iters, double tol,
                                               Rng& rng) {
  if (max_iters < 1) throw Error("power_iteration: max_iters must be >= 1");
  if (!w.allFinite()) throw Error("power_iteration: non-finite matrix");
  if (w.norm() < kNullNorm) return std::nullopt;

  SingularTriplet out;
  out.v = random_unit(w.cols(), rng);
  out.u.resize(w.rows());
  for (int it = 1; it <= max_iters; ++it) {
    out.iterations = it;
    Eigen::VectorXd wv = w * out.v;
    double nwv = wv.norm();
    if (nwv < kNullNorm) {
      // Start landed in the null space; restart from a fresh direction.
      out.v = random_unit(w.cols(), rng);
      continue;
    }
    out.u = wv / nwv;
    Eigen::VectorXd wtu = w.transpose() * out.u;
    out.sigma = wtu.norm();
    out.v = wtu / out.sigma;
    const double residual = (w * out.v - out.sigma * out.u).norm();
    if (residual <= tol * out.sigma) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Domain Domain::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw ConfigError("box: lo/hi size mismatch");
  if (!lo.allFinite() || !hi.allFinite()) throw ConfigError("box: bounds must be finite");
  if ((lo.array() > hi.array()).any()) throw ConfigError("box: requires lo <= hi");
  if ((hi - lo).sum() <= 0.0) throw ConfigError("box: diameter must be positive");
  return Domain(BoxSet{std::move(lo), std::move(hi)});
}

Domain Domain::uniform_box(Eigen::Index dim, double lo, double hi) {
  return box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

Domain Domain::l1_ball(Eigen::Index dim, double radius) {
  if (dim < 1) throw ConfigError("l1_ball: dim must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("l1_ball: radius must be > 0");
  return Domain(L1BallSet{dim, radius});
}

Domain Domain::simplex(Eigen::Index dim) {
  if (dim < 2) throw ConfigError("simplex: dim must be >= 2");
  return Domain(SimplexSet{dim});
}

Domain Domain::nuclear_ball(Eigen::Index rows, Eigen::Index cols, double radius) {
  if (rows < 1 || cols < 1) throw ConfigError("nuclear_ball: shape must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("nuclear_ball: radius must be > 0");
  }
  return Domain(NuclearBallSet{rows, cols, radius});
}

Eigen::Index Domain::dim() const {
  return std::visit(Overloaded{
                        [](const BoxSet& b) { return b.lo.size(); },
                        [](const L1BallSet& b) { return b.dim; },
                        [](const SimplexSet& s) { return s.dim; },
                        [](const NuclearBallSet& n) { return n.rows * n.cols; },
                    },
                    kind_);
}

std::string Domain::name() const {
  return std::visit(Overloaded{
                        [](const BoxSet&) { return std::string("box"); },
                        [](const L1BallSet&) { return std::string("l1_ball"); },
                        [](const SimplexSet&) { return std::string("simplex"); },
                        [](const NuclearBallSet&) { return std::string("nuclear_ball"); },
                    },
                    kind_);
}

std::optional<Shape> Domain::shape() const {
  if (const auto* n = std::get_if<NuclearBallSet>(&kind_)) return Shape{n->rows, n->cols};
  return std::nullopt;
}

Point Domain::make_point(Eigen::VectorXd values) const {
  if (values.size() != dim()) {
    throw Error(fmt::format("{}: point length {} does not match dimension {}", name(),
                            values.size(), dim()));
  }
  return Point(std::move(values), shape());
}

Point Domain::canonical_point() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
  if (const auto* b = std::get_if<BoxSet>(&kind_)) v = b->lo;
  if (std::holds_alternative<SimplexSet>(kind_)) v[0] = 1.0;
  return make_point(std::move(v));
}

Point Domain::lmo(const Point& w, Rng& rng, const LmoOptions& options) const {
  if (w.size() != dim()) {
    throw Error(fmt::format("lmo({}): dimension mismatch ({} vs {})", name(), w.size(), dim()));
  }
  if (!w.all_finite()) throw Error(fmt::format("lmo({}): non-finite linear functional", name()));
  if (w.values.norm() < kNullNorm) return canonical_point();

  Eigen::VectorXd v = std::visit(
      Overloaded{
          [&](const BoxSet& b) -> Eigen::VectorXd {
            // Ties (w_i == 0) go to lo.
            return (w.values.array() < 0.0).select(b.hi, b.lo);
          },
          [&](const L1BallSet& b) -> Eigen::VectorXd {
            Eigen::Index i = 0;
            w.values.cwiseAbs().maxCoeff(&i);
            Eigen::VectorXd out = Eigen::VectorXd::Zero(b.dim);
            out[i] = w.values[i] > 0.0 ? -b.radius : b.radius;
            return out;
          },
          [&](const SimplexSet& s) -> Eigen::VectorXd {
            Eigen::Index i = 0;
            w.values.minCoeff(&i);
            Eigen::VectorXd out = Eigen::VectorXd::Zero(s.dim);
            out[i] = 1.0;
            return out;
          },
          [&](const NuclearBallSet& n) -> Eigen::VectorXd {
            Eigen::Map<const Eigen::MatrixXd> mat(w.values.data(), n.rows, n.cols);
            const int cap = options.max_power_iters > 0
                                ? options.max_power_iters
                                : 50 * default_power_iterations(n.rows, n.cols);
            auto top = power_iteration(mat, cap, options.power_tol, rng);
            if (!top) return Eigen::VectorXd::Zero(n.rows * n.cols);
            Eigen::MatrixXd out = -n.radius * top->u * top->v.transpose();
            return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
          },
      },
      kind_);
  return make_point(std::move(v));
}

bool Domain::contains(const Point& x, double tol) const {
  if (x.size() != dim()) {
    throw Error(fmt::format("contains({}): dimension mismatch ({} vs {})", name(), x.size(), dim()));
  }
  if (!x.all_finite()) return false;
  return std::visit(
      Overloaded{
          [&](const BoxSet& b) {
            return ((x.values - b.lo).array() >= -tol).all() &&
                   ((b.hi - x.values).array() >= -tol).all();
          },
          [&](const L1BallSet& b) { return x.values.lpNorm<1>() <= b.radius + tol; },
          [&](const SimplexSet&) {
            return (x.values.array() >= -tol).all() && std::abs(x.values.sum() - 1.0) <= tol;
          },
          [&](const NuclearBallSet& n) {
            Eigen::Map<const Eigen::MatrixXd> mat(x.values.data(), n.rows, n.cols);
            return nuclear_norm(mat) <= n.radius + tol;
          },
      },
      kind_);
}

double Domain::diameter() const {
  return std::visit(Overloaded{
                        [](const BoxSet& b) { return (b.hi - b.lo).sum(); },
                        [](const L1BallSet& b) { return 2.0 * b.radius; },
                        [](const SimplexSet&) { return 2.0; },
                        // Attained by +-k u v^T with u, v constant-modulus unit vectors.
                        [](const NuclearBallSet& n) {
                          return 2.0 * n.radius *
                                 std::sqrt(static_cast<double>(n.rows) * static_cast<double>(n.cols));
                        },
                    },
                    kind_);
}

double Domain::l2_diameter() const {
  return std::visit(Overloaded{
                        [](const BoxSet& b) { return (b.hi - b.lo).norm(); },
                        [](const L1BallSet& b) { return 2.0 * b.radius; },
                        [](const SimplexSet&) { return std::sqrt(2.0); },
                        [](const NuclearBallSet& n) { return 2.0 * n.radius; },
                    },
                    kind_);
}

double Domain::max_l1_norm() const {
  return std::visit(Overloaded{
                        [](const BoxSet& b) { return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).sum(); },
                        [](const L1BallSet& b) { return b.radius; },
                        [](const SimplexSet&) { return 1.0; },
                        [](const NuclearBallSet& n) {
                          return n.radius *
                                 std::sqrt(static_cast<double>(n.rows) * static_cast<double>(n.cols));
                        },
                    },
                    kind_);
}

double Domain::max_l2_norm() const {
  return std::visit(Overloaded{
                        [](const BoxSet& b) { return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).norm(); },
                        [](const L1BallSet& b) { return b.radius; },
                        [](const SimplexSet&) { return 1.0; },
                        [](const NuclearBallSet& n) { return n.radius; },
                    },
                    kind_);
}

double Domain::max_abs_entry() const {
  return std::visit(Overloaded{
                        [](const BoxSet& b) {
                          return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).maxCoeff();
                        },
                        [](const L1BallSet& b) { return b.radius; },
                        [](const SimplexSet&) { return 1.0; },
                        [](const NuclearBallSet& n) { return n.radius; },
                    },
                    kind_);
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

}  // namespace pfoco
