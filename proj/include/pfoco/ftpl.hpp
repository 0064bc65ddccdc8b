#pragma once

#include "pfoco/domains.hpp"
#include "pfoco/point.hpp"
#include "pfoco/rng.hpp"

namespace pfoco {

// Follow-The-Perturbed-Leader for online linear optimization over a domain.
//
// A perturbation p ~ Uniform[0, 1/delta]^d is drawn once at construction.
// select() returns lmo(p + sum of observed coefficients). Each instance owns
// its own random stream (used only by the LMO), so distinct instances can be
// driven from different threads.
class Ftpl {
 public:
  Ftpl(Domain domain, double delta, Rng& rng, LmoOptions lmo_options = {});

  Point select();
  void observe(const Point& w);

  const Point& perturbation() const { return perturbation_; }
  const Point& accumulated() const { return accumulated_; }
  double delta() const { return delta_; }
  const Domain& domain() const { return domain_; }

 private:
  Domain domain_;
  double delta_;
  Point perturbation_;
  Point accumulated_;
  Rng rng_;
  LmoOptions lmo_options_;
};

}  // namespace pfoco
