#include <gtest/gtest.h>

#include "pfoco/error.hpp"
#include "pfoco/functions.hpp"

using namespace pfoco;

namespace {

// f(x) = x^2, g(x) = x on the real line.
RoundFunctions scalar_round() {
  RoundFunctions rf;
  rf.t = 1;
  rf.f = [](const Point& x) {
    const double v = x.values[0];
    return Evaluation{v * v, Point(Eigen::VectorXd::Constant(1, 2.0 * v))};
  };
  rf.g = [](const Point& x) { return Evaluation{x.values[0], Point(Eigen::VectorXd::Constant(1, 1.0))}; };
  return rf;
}

RoundFunctions constant_round(double f, double g) {
  RoundFunctions rf;
  rf.t = 1;
  rf.f = [f](const Point& x) { return Evaluation{f, Point::zeros_like(x)}; };
  rf.g = [g](const Point& x) { return Evaluation{g, Point::zeros_like(x)}; };
  return rf;
}

Point one(double v) { return Point(Eigen::VectorXd::Constant(1, v)); }

}  // namespace

TEST(PenalizedGrad, LambdaZeroIsGradF) {
  const auto rf = scalar_round();
  EXPECT_EQ(penalized_grad(rf, 0.0, one(1.5)).values[0], 3.0);
}

TEST(PenalizedGrad, HandExample) {
  EXPECT_DOUBLE_EQ(penalized_grad(scalar_round(), 2.0, one(1.0)).values[0], 4.0);
}

TEST(PenalizedGrad, SkipsConstraintWhenLambdaZero) {
  RoundFunctions rf = scalar_round();
  rf.g = [](const Point&) -> Evaluation { throw Error("g must not be evaluated"); };
  EXPECT_NO_THROW(penalized_grad(rf, 0.0, one(1.0)));
}

TEST(PenalizedGrad, RejectsBadGradient) {
  RoundFunctions rf = scalar_round();
  rf.f = [](const Point&) { return Evaluation{0.0, Point(Eigen::VectorXd::Zero(2))}; };
  EXPECT_THROW(penalized_grad(rf, 0.0, one(1.0)), Error);
  rf.f = [](const Point&) { return Evaluation{NAN, Point(Eigen::VectorXd::Zero(1))}; };
  EXPECT_THROW(evaluate(rf.f, one(1.0), 3, "f"), Error);
}

TEST(AugLagrangian, Examples) {
  const auto rf = constant_round(1.0, 2.0);
  const Point x = one(0.0);
  EXPECT_DOUBLE_EQ(aug_lagrangian_value(rf, x, 0.0, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(aug_lagrangian_value(rf, x, 3.0, 1.0, 1.0), 2.5);
  EXPECT_DOUBLE_EQ(aug_lagrangian_value(rf, x, 3.0, 1.0, 2.0), 4.75);
}

TEST(AugLagrangian, ConcaveInLambdaConvexInX) {
  const auto rf = scalar_round();
  const double theta = 0.7;
  for (double x : {-1.0, 0.0, 0.4, 2.0}) {
    for (double l = 0.0; l < 5.0; l += 0.37) {
      const double h = 0.25;
      const double a = aug_lagrangian_value(rf, one(x), l, theta, 1.0);
      const double b = aug_lagrangian_value(rf, one(x), l + h, theta, 1.0);
      const double c = aug_lagrangian_value(rf, one(x), l + 2 * h, theta, 1.0);
      EXPECT_LE(a + c - 2.0 * b, 1e-12);  // concave in lambda
      const double p = aug_lagrangian_value(rf, one(x - h), l, theta, 1.0);
      const double q = aug_lagrangian_value(rf, one(x + h), l, theta, 1.0);
      EXPECT_GE(p + q - 2.0 * a, -1e-12);  // convex in x
    }
  }
}

TEST(AugLagrangian, DualGradMatchesFiniteDifference) {
  const auto rf = scalar_round();
  const double theta = 1.3, k = 4.0, x = 0.8;
  for (double l : {0.25, 0.5, 2.0}) {
    const double h = 1e-6;
    const double fd = (aug_lagrangian_value(rf, one(x), l + h, theta, k) -
                       aug_lagrangian_value(rf, one(x), l - h, theta, k)) /
                      (2 * h);
    EXPECT_NEAR(dual_grad(x, l, theta, k), fd, 1e-6);
  }
}

TEST(DualGrad, Examples) {
  EXPECT_EQ(dual_grad(0.0, 0.0, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(dual_grad(4.0, 1.0, 2.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(dual_grad(-3.0, 0.0, 2.0, 8.0), -3.0);
}

TEST(DualStep, ClampsAtZero) {
  EXPECT_EQ(clamped_dual_step(0.0, -5.0, 2.0, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(clamped_dual_step(1.0, -3.0, 2.0, 0.1), 0.5);
}

TEST(Bounds, SmoothnessConvention) {
  ProblemBounds b;
  EXPECT_FALSE(b.smooth());
  EXPECT_EQ(b.scaled_smoothness(0.0), 0.0);
  EXPECT_TRUE(std::isinf(b.scaled_smoothness(1.0)));
  b.smoothness = 2.0;
  EXPECT_TRUE(b.smooth());
  EXPECT_EQ(b.scaled_smoothness(3.0), 6.0);
}

TEST(Bounds, Validate) {
  ProblemBounds b;
  EXPECT_NO_THROW(b.validate());
  b.grad_l2 = 0.0;
  EXPECT_THROW(b.validate(), ConfigError);
}
