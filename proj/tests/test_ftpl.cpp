#include <gtest/gtest.h>

#include "pfoco/alg2.hpp"
#include "pfoco/error.hpp"
#include "pfoco/ftpl.hpp"

using namespace pfoco;

namespace {
Point vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return Point(x);
}
}  // namespace

TEST(Ftpl, PerturbationRangeFromDelta) {
  // D = 1, d = 4, T = 16, beta = 0 gives delta = 1/16, so p lies in [0, 16]^4.
  ProblemBounds b;
  b.grad_linf = 1.0;
  b.dim = 4;
  b.diameter_l1 = 4.0;
  const double delta = derive_params_alg2(16, b, 0.0).delta;
  EXPECT_DOUBLE_EQ(delta, 1.0 / 16.0);
  Rng rng(3);
  double hi = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    Ftpl f(Domain::uniform_box(4, 0.0, 1.0), delta, rng);
    EXPECT_GE(f.perturbation().values.minCoeff(), 0.0);
    EXPECT_LE(f.perturbation().values.maxCoeff(), 16.0);
    hi = std::max(hi, f.perturbation().values.maxCoeff());
  }
  EXPECT_GT(hi, 15.0);  // the whole range is used
}

TEST(Ftpl, UnitDelta) {
  Rng rng(4);
  Ftpl f(Domain::uniform_box(6, 0.0, 1.0), 1.0, rng);
  EXPECT_LE(f.perturbation().values.maxCoeff(), 1.0);
  EXPECT_GE(f.perturbation().values.minCoeff(), 0.0);
}

TEST(Ftpl, SameSeedSamePerturbation) {
  Rng a(9), b(9);
  Ftpl f(Domain::simplex(5), 0.1, a), g(Domain::simplex(5), 0.1, b);
  EXPECT_EQ(f.perturbation().values, g.perturbation().values);
}

TEST(Ftpl, SelectWithNoHistoryIsLmoOfPerturbation) {
  Rng rng(5), lmo_rng(0);
  const Domain d = Domain::l1_ball(4, 1.0);
  Ftpl f(d, 0.5, rng);
  EXPECT_EQ(f.select().values, d.lmo(f.perturbation(), lmo_rng).values);
}

TEST(Ftpl, SelectFollowsLeaderSign) {
  Rng rng(6);
  const Domain box = Domain::uniform_box(1, 0.0, 1.0);
  Ftpl f(box, 1.0 / 16.0, rng);
  f.observe(vec({5.0}));
  EXPECT_EQ(f.select().values[0], 0.0);
  Ftpl g(box, 1.0 / 16.0, rng);
  g.observe(vec({-20.0}));
  EXPECT_EQ(g.select().values[0], 1.0);
}

TEST(Ftpl, ObserveAccumulates) {
  Rng rng(1);
  Ftpl f(Domain::uniform_box(2, 0.0, 1.0), 1.0, rng);
  f.observe(vec({0.0, 0.0}));
  EXPECT_TRUE(f.accumulated().values.isZero());
  f.observe(vec({1.0, 0.0}));
  f.observe(vec({2.0, -1.0}));
  EXPECT_EQ(f.accumulated().values, vec({3.0, -1.0}).values);
  f.observe(vec({0.5, 0.25}));
  f.observe(vec({-0.5, -0.25}));
  EXPECT_EQ(f.accumulated().values, vec({3.0, -1.0}).values);
}

TEST(Ftpl, ObserveRejectsBadInput) {
  Rng rng(1);
  Ftpl f(Domain::uniform_box(2, 0.0, 1.0), 1.0, rng);
  EXPECT_THROW(f.observe(vec({1.0})), Error);
  EXPECT_THROW(f.observe(vec({1.0, INFINITY})), Error);
}

TEST(Ftpl, RejectsNonPositiveDelta) {
  Rng rng(1);
  EXPECT_THROW(Ftpl(Domain::simplex(2), 0.0, rng), Error);
}

TEST(Ftpl, RegretWithinBoundOnBox) {
  // Random +-1 coefficients on [0,1]^3; the best fixed action is a vertex.
  const Eigen::Index d = 3;
  const std::size_t T = 400;
  const double delta = 0.05;
  const Domain box = Domain::uniform_box(d, 0.0, 1.0);
  Rng adv(21);
  std::vector<Point> ws;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(d);
  for (std::size_t t = 0; t < T; ++t) {
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) w[i] = uniform(adv, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    total += w;
    ws.emplace_back(w);
  }
  const double best = total.cwiseMin(0.0).sum();
  Rng rng(22);
  double mean = 0.0;
  const int draws = 50;
  for (int k = 0; k < draws; ++k) {
    Ftpl f(box, delta, rng);
    double loss = 0.0;
    for (const auto& w : ws) {
      loss += dot(w, f.select());
      f.observe(w);
    }
    mean += (loss - best) / draws;
  }
  const double R = box.diameter();
  EXPECT_LE(mean, R / delta + delta * d * R * static_cast<double>(T));
}
