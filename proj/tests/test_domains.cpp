#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "pfoco/domains.hpp"
#include "pfoco/error.hpp"

using namespace pfoco;

namespace {

Point vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return Point(x);
}

Point random_point(const Domain& d, Rng& rng) {
  Point p = d.canonical_point();
  for (Eigen::Index i = 0; i < p.size(); ++i) p.values[i] = standard_normal(rng);
  return p;
}

}  // namespace

TEST(Lmo, BoxSignRule) {
  Rng rng(1);
  const Domain box = Domain::uniform_box(2, 0.0, 1.0);
  const Point v = box.lmo(vec({1.0, -1.0}), rng);
  EXPECT_EQ(v.values[0], 0.0);
  EXPECT_EQ(v.values[1], 1.0);
}

TEST(Lmo, L1BallPutsMassOnLargestCoordinate) {
  Rng rng(1);
  const Domain ball = Domain::l1_ball(2, 2.0);
  const Point v = ball.lmo(vec({3.0, -4.0}), rng);
  EXPECT_EQ(v.values[0], 0.0);
  EXPECT_EQ(v.values[1], 2.0);
}

TEST(Lmo, L1BallTiesGoToFirstIndex) {
  Rng rng(1);
  const Point v = Domain::l1_ball(3, 1.0).lmo(vec({1.0, -1.0, 1.0}), rng);
  EXPECT_EQ(v.values[0], -1.0);
  EXPECT_EQ(v.values[1], 0.0);
}

TEST(Lmo, SimplexPicksSmallestCoefficient) {
  Rng rng(1);
  const Point v = Domain::simplex(3).lmo(vec({0.5, -2.0, 1.0}), rng);
  EXPECT_EQ(v.values, vec({0.0, 1.0, 0.0}).values);
}

TEST(Lmo, NuclearDiagonal) {
  Rng rng(3);
  const Domain ball = Domain::nuclear_ball(2, 2, 5.0);
  Eigen::VectorXd w(4);
  w << 2.0, 0.0, 0.0, 1.0;  // column-major diag(2, 1)
  const Point wp = ball.make_point(w);
  const Point x = ball.lmo(wp, rng);
  EXPECT_NEAR(x.matrix()(0, 0), -5.0, 1e-9);
  EXPECT_NEAR(x.matrix()(1, 1), 0.0, 1e-8);
  EXPECT_NEAR(x.matrix()(0, 1), 0.0, 1e-8);
  EXPECT_NEAR(dot(wp, x), -10.0, 1e-9);
}

TEST(Lmo, ZeroFunctionalReturnsCanonicalPoint) {
  Rng rng(1);
  for (const Domain& d : {Domain::uniform_box(3, -1.0, 2.0), Domain::l1_ball(3, 1.0), Domain::simplex(3)}) {
    EXPECT_EQ(d.lmo(Point(Eigen::VectorXd::Zero(3)), rng).values, d.canonical_point().values) << d.name();
  }
  const Domain nb = Domain::nuclear_ball(3, 2, 1.0);
  EXPECT_TRUE(nb.lmo(nb.make_point(Eigen::VectorXd::Zero(6)), rng).values.isZero());
}

TEST(Lmo, ScalingEquivariance) {
  Rng rng(7);
  const std::vector<Domain> domains = {Domain::uniform_box(5, -1.0, 1.0), Domain::l1_ball(5, 2.0),
                                       Domain::simplex(5), Domain::nuclear_ball(3, 4, 1.5)};
  for (const auto& d : domains) {
    for (int rep = 0; rep < 20; ++rep) {
      const Point w = random_point(d, rng);
      const Point a = d.lmo(w, rng);
      Point w2 = w;
      w2.values *= 3.7;
      const Point b = d.lmo(w2, rng);
      EXPECT_NEAR(dot(w, a), dot(w, b), 1e-8) << d.name();
    }
  }
}

TEST(Lmo, OptimalAgainstRandomFeasiblePoints) {
  Rng rng(11);
  const Domain ball = Domain::nuclear_ball(4, 3, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Point w = random_point(ball, rng);
    const double best = dot(w, ball.lmo(w, rng));
    for (int s = 0; s < 200; ++s) {
      Point y = random_point(ball, rng);
      y.values *= 2.0 / nuclear_norm(y.matrix());
      EXPECT_LE(best, dot(w, y) + 1e-9);
    }
  }
}

TEST(Lmo, NuclearMatchesDenseSvd) {
  Rng rng(5);
  const Domain ball = Domain::nuclear_ball(6, 9, 3.0);
  for (int rep = 0; rep < 30; ++rep) {
    const Point w = random_point(ball, rng);
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(w.matrix()).singularValues()[0];
    EXPECT_NEAR(dot(w, ball.lmo(w, rng)), -3.0 * sigma, 1e-7 * sigma);
  }
}

TEST(PowerIteration, Diagonal) {
  Rng rng(2);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 0) = 3.0;
  w(1, 1) = 1.0;
  const auto st = power_iteration(w, 200, 1e-12, rng);
  ASSERT_TRUE(st);
  EXPECT_NEAR(st->sigma, 3.0, 1e-9);
  EXPECT_NEAR(std::abs(st->u[0]), 1.0, 1e-6);
  EXPECT_NEAR(std::abs(st->v[0]), 1.0, 1e-6);
  EXPECT_GT(st->u[0] * st->v[0], 0.0);  // consistent signs: u^T W v = sigma > 0
  EXPECT_TRUE(st->converged);
}

TEST(PowerIteration, RankOne) {
  Rng rng(2);
  Eigen::Vector2d a(1.0, 2.0), b(2.0, 0.0);
  const auto st = power_iteration(a * b.transpose(), 100, 1e-12, rng);
  ASSERT_TRUE(st);
  EXPECT_NEAR(st->sigma, 2.0 * std::sqrt(5.0), 1e-12);
}

TEST(PowerIteration, NullMatrix) {
  Rng rng(2);
  EXPECT_FALSE(power_iteration(Eigen::MatrixXd::Zero(3, 2), 100, 1e-9, rng));
}

TEST(PowerIteration, DefaultCap) {
  EXPECT_EQ(default_power_iterations(1, 1), 1);
  EXPECT_EQ(default_power_iterations(20, 20), 1 + 30);  // 10 ln 20 = 29.96
}

TEST(Contains, Examples) {
  EXPECT_TRUE(Domain::uniform_box(2, 0.0, 1.0).contains(vec({0.5, 1.0}), 0.0));
  EXPECT_FALSE(Domain::l1_ball(2, 1.0).contains(vec({0.7, 0.7}), 1e-9));
  EXPECT_TRUE(Domain::simplex(3).contains(vec({0.2, 0.3, 0.5}), 1e-12));
  EXPECT_FALSE(Domain::simplex(3).contains(vec({0.2, 0.3, 0.6}), 1e-9));
  EXPECT_FALSE(Domain::simplex(2).contains(vec({-0.1, 1.1}), 1e-9));
}

TEST(Contains, NuclearBall) {
  const Domain ball = Domain::nuclear_ball(2, 2, 1.0);
  Eigen::VectorXd x(4);
  x << 0.5, 0.0, 0.0, 0.5;
  EXPECT_TRUE(ball.contains(ball.make_point(x), 1e-12));
  x *= 1.01;
  EXPECT_FALSE(ball.contains(ball.make_point(x), 1e-8));
}

TEST(Contains, RejectsWrongSize) {
  EXPECT_THROW(Domain::l1_ball(3, 1.0).contains(vec({0.1, 0.1}), 1e-9), Error);
}

TEST(Diameter, Values) {
  EXPECT_DOUBLE_EQ(Domain::simplex(5).diameter(), 2.0);
  EXPECT_DOUBLE_EQ(Domain::uniform_box(4, 0.0, 1.0).diameter(), 4.0);
  EXPECT_DOUBLE_EQ(Domain::l1_ball(3, 1.5).diameter(), 3.0);
  EXPECT_DOUBLE_EQ(Domain::uniform_box(4, 0.0, 1.0).l2_diameter(), 2.0);
  EXPECT_DOUBLE_EQ(Domain::nuclear_ball(2, 3, 2.0).l2_diameter(), 4.0);
}

TEST(Diameter, NuclearL1IsAttained) {
  // X = k u v^T with uniform unit u, v has ||X||_1 = k sqrt(mn), so the
  // diameter 2k sqrt(mn) is reached by X and -X.
  const Eigen::Index m = 3, n = 5;
  const double k = 2.0;
  const Domain ball = Domain::nuclear_ball(m, n, k);
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(m, n, k / std::sqrt(double(m * n)));
  EXPECT_NEAR(nuclear_norm(x), k, 1e-12);
  EXPECT_NEAR(2.0 * x.cwiseAbs().sum(), ball.diameter(), 1e-12);
}

TEST(Domain, InvalidConstruction) {
  EXPECT_THROW(Domain::l1_ball(3, -1.0), Error);
  EXPECT_THROW(Domain::uniform_box(2, 1.0, 0.0), Error);
  EXPECT_THROW(Domain::simplex(0), Error);
  EXPECT_THROW(Domain::nuclear_ball(0, 2, 1.0), Error);
}

TEST(Domain, LmoRejectsNonFinite) {
  Rng rng(1);
  EXPECT_THROW(Domain::simplex(2).lmo(vec({1.0, NAN}), rng), Error);
}
