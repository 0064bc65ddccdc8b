#include "pfoco/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

void OracleMeta::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("oracle meta: alpha must lie in (0, 1)");
  if (c0 < 0.0 || c1 < 0.0 || c2 < 0.0) {
    throw ConfigError("oracle meta: constants must be nonnegative");
  }
}

OcgOracle::OcgOracle(Domain domain, Point x0, double eta, Rng& rng)
    : domain_(std::move(domain)), x0_(std::move(x0)), eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error("ocg: eta must be > 0");
  x_cur_ = x0_;
  grad_sum_ = Point::zeros_like(x0_);
  rng_.seed(child_seed(rng));
}

double OcgOracle::step_size(std::size_t t) {
  return std::min(1.0, 2.0 / std::sqrt(static_cast<double>(t)));
}

const Point& OcgOracle::step(const Point& observed_grad) {
  check_same_size(observed_grad, x_cur_, "ocg step");
  if (!observed_grad.all_finite()) throw Error("ocg step: non-finite gradient");
  ++t_;
  grad_sum_.values += observed_grad.values;
  Point direction(eta_ * grad_sum_.values + 2.0 * (x_cur_.values - x0_.values), x_cur_.shape);
  const Point v = domain_.lmo(direction, rng_);
  const double sigma = step_size(t_);
  x_cur_.values += sigma * (v.values - x_cur_.values);
  return x_cur_;
}

OracleMeta OcgFactory::meta(const Domain& domain) const {
  return OracleMeta{0.75, 0.0, domain.l2_diameter(), 0.0};
}

double OcgFactory::learning_rate(double l2_diameter, double grad_bound, std::size_t horizon) {
  return l2_diameter / (2.0 * grad_bound * std::pow(static_cast<double>(horizon), 0.75));
}

std::unique_ptr<OnlineOracle> OcgFactory::reset(const Domain& domain, const OracleResetArgs& args,
                                                const ProblemBounds& bounds, Rng& rng) const {
  const OracleMeta m = meta(domain);
  m.validate();
  if (m.requires_smooth() && !bounds.smooth()) {
    throw ConfigError("ocg: oracle requires smooth losses but the problem is non-smooth");
  }
  if (args.horizon < 1) throw Error("ocg: horizon must be >= 1");
  if (!(args.grad_bound > 0.0)) throw Error("ocg: gradient bound must be > 0");
  if (!domain.contains(args.x0, 1e-8)) throw Error("ocg: initial point is outside the domain");
  const double eta = learning_rate(domain.l2_diameter(), args.grad_bound, args.horizon);
  return std::make_unique<OcgOracle>(domain, args.x0, eta, rng);
}

std::unique_ptr<OracleFactory> make_oracle_factory(const std::string& name) {
  if (name == "ocg") return std::make_unique<OcgFactory>();
  throw ConfigError(fmt::format("unknown oracle '{}' (available: ocg)", name));
}

}  // namespace pfoco
