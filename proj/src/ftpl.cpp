#include "pfoco/ftpl.hpp"

#include <cmath>

#include "pfoco/error.hpp"

namespace pfoco {

Ftpl::Ftpl(Domain domain, double delta, Rng& rng, LmoOptions lmo_options)
    : domain_(std::move(domain)), delta_(delta), lmo_options_(lmo_options) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("ftpl: delta must be > 0");
  const double upper = 1.0 / delta;
  Eigen::VectorXd p(domain_.dim());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = uniform(rng, 0.0, upper);
  perturbation_ = domain_.make_point(std::move(p));
  accumulated_ = Point::zeros_like(perturbation_);
  rng_.seed(child_seed(rng));
}

Point Ftpl::select() {
  Point total = perturbation_;
  total.values += accumulated_.values;
  return domain_.lmo(total, rng_, lmo_options_);
}

void Ftpl::observe(const Point& w) {
  check_same_size(w, accumulated_, "ftpl observe");
  if (!w.all_finite()) throw Error("ftpl observe: non-finite coefficient");
  accumulated_.values += w.values;
}

}  // namespace pfoco
