#include <gtest/gtest.h>

#include "ripd/km.hpp"
#include "ripd/rng.hpp"

using namespace ripd;

namespace {

BlockVector scalar_vec(double v) {
  return BlockVector(BlockLayout::single(1), Eigen::VectorXd::Constant(1, v));
}

BlockVector vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return BlockVector(BlockLayout({std::vector<Index>{1, 1}}), v);
}

}  // namespace

TEST(KmStep, IdentityOperatorIsStationaryWithoutInertia) {
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.5);
  RunState st = RunState::start(scalar_vec(2.0));
  km_step(st, s, [](const BlockVector& x) { return x; });
  EXPECT_EQ(st.x_curr.data()[0], 2.0);
  EXPECT_EQ(st.residual_history.back(), 0.0);
}

TEST(KmStep, ZeroMapHalvesTowardOrigin) {
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.5);
  RunState st = RunState::start(scalar_vec(2.0));
  km_step(st, s, [](const BlockVector& x) { return BlockVector::zero(x.layout()); });
  EXPECT_DOUBLE_EQ(st.x_curr.data()[0], 1.0);
}

TEST(KmStep, HandArithmeticWithInertia) {
  // T(x) = 0.5 x, alpha_n = 0.1 for n >= 2, lambda = 0.5, x_prev = x_curr = 1:
  // w = 1 + 0.1*(1-1) = 1, x_next = 1 + 0.5*(0.5 - 1) = 0.75
  InertialSchedule s = InertialSchedule::constant_lambda(0.1, 0.1, 1.0, 0.5);
  s.alpha_rule = [](long n) { return n == 1 ? 0.0 : 0.1; };
  RunState st = RunState::start(scalar_vec(1.0), scalar_vec(1.0));
  st.iteration = 2;  // inertia active
  km_step(st, s, [](const BlockVector& x) { return BlockVector(x.layout(), 0.5 * x.data()); });
  EXPECT_DOUBLE_EQ(st.x_curr.data()[0], 0.75);
}

TEST(KmStep, DivergenceDetected) {
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.5);
  RunState st = RunState::start(scalar_vec(1.0));
  try {
    km_step(st, s, [](const BlockVector& x) {
      return BlockVector(x.layout(),
                         Eigen::VectorXd::Constant(1, std::numeric_limits<double>::infinity()));
    });
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iteration(), 1);
  }
}

TEST(RunKm, ContractionConvergesToOrigin) {
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.9);
  StopRule stop{1e-8, 10000, 1};
  auto r = run_km(scalar_vec(1.0), scalar_vec(1.0), s,
                  [](const BlockVector& x) { return BlockVector(x.layout(), 0.5 * x.data()); },
                  stop);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(std::abs(r.state.x_curr.data()[0]), 1e-7);
}

TEST(RunKm, ProjectionOntoDiagonal) {
  // T = projection onto {x1 = x2} from (1, 0) converges to (0.5, 0.5)
  auto proj = [](const BlockVector& x) {
    const double m = 0.5 * (x.data()[0] + x.data()[1]);
    BlockVector out = x;
    out.data()[0] = m;
    out.data()[1] = m;
    return out;
  };
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.9);
  auto r = run_km(vec2(1.0, 0.0), vec2(1.0, 0.0), s, proj, StopRule{1e-10, 10000, 1});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.state.x_curr.data()[0], 0.5, 1e-8);
  EXPECT_NEAR(r.state.x_curr.data()[1], 0.5, 1e-8);
}

TEST(RunKm, MaxItersExhaustionIsNotAnError) {
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.9);
  auto r = run_km(scalar_vec(1.0), scalar_vec(1.0), s,
                  [](const BlockVector& x) { return BlockVector(x.layout(), 0.999 * x.data()); },
                  StopRule{1e-14, 10, 1});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.state.iteration, 11);
}

TEST(RunKm, InvalidScheduleRejected) {
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.95);  // above ceiling
  EXPECT_THROW(run_km(scalar_vec(1.0), scalar_vec(1.0), s,
                      [](const BlockVector& x) { return x; }, StopRule{1e-8, 10, 1}),
               ConfigRejectedError);
}

TEST(RunKm, StepNormPartialSumsPlateau) {
  auto s = InertialSchedule::constant_lambda(0.2, 0.1, 1.0, 0.5);
  auto r = run_km(scalar_vec(1.0), scalar_vec(1.0), s,
                  [](const BlockVector& x) { return BlockVector(x.layout(), 0.5 * x.data()); },
                  StopRule{1e-300, 600, 1});
  const auto& steps = r.state.step_norm_history;
  ASSERT_GE(steps.size(), 300u);
  double total = 0.0;
  std::vector<double> partial;
  for (double v : steps) {
    total += v * v;
    partial.push_back(total);
  }
  const double tail = partial.back() - partial[partial.size() - 101];
  EXPECT_LT(tail / partial.back(), 1e-10);
}

// with alpha = 0 the distance to a fixed point never increases
TEST(RunKm, FejerMonotoneWithoutInertia) {
  Rng rng(333);
  // nonexpansive: rotation by 0.3 composed with projection-to-diagonal average
  auto T = [](const BlockVector& x) {
    const double c = std::cos(0.3), s = std::sin(0.3);
    BlockVector out = x;
    out.data()[0] = c * x.data()[0] - s * x.data()[1];
    out.data()[1] = s * x.data()[0] + c * x.data()[1];
    return out;
  };
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, 0.7);
  RunState st = RunState::start(vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  double prev = st.x_curr.data().norm();  // fixed point is the origin
  for (int n = 0; n < 200; ++n) {
    km_step(st, s, T);
    const double d = st.x_curr.data().norm();
    EXPECT_LE(d, prev + 1e-12);
    prev = d;
  }
}

// residual of the inertial scheme goes to zero on a contraction
TEST(RunKm, ResidualVanishes) {
  auto s = InertialSchedule::constant_lambda(0.3, 0.1, 1.0, 0.4);
  auto r = run_km(scalar_vec(5.0), scalar_vec(5.0), s,
                  [](const BlockVector& x) { return BlockVector(x.layout(), 0.8 * x.data()); },
                  StopRule{1e-12, 20000, 1});
  EXPECT_TRUE(r.converged);
  double min_res = std::numeric_limits<double>::infinity();
  for (double v : r.state.residual_history) min_res = std::min(min_res, v);
  EXPECT_LE(min_res, 1e-12);
}

// alpha = 0, constant lambda reproduces the plain relaxed iteration bit for bit
TEST(RunKm, PlainKmBitExact) {
  const double lambda = 0.7;
  auto T = [](const BlockVector& x) {
    BlockVector out = x;
    out.data()[0] = 0.3 * x.data()[0] + 0.1 * x.data()[1] + 0.05;
    out.data()[1] = -0.2 * x.data()[0] + 0.4 * x.data()[1] - 0.3;
    return out;
  };
  auto s = InertialSchedule::constant_lambda(0.0, 0.1, 1.0, lambda);
  RunState st = RunState::start(vec2(1.0, -2.0));

  // independent plain loop
  BlockVector x = vec2(1.0, -2.0);
  for (int n = 0; n < 100; ++n) {
    km_step(st, s, T);
    BlockVector t = T(x);
    x = BlockVector(x.layout(), x.data() + lambda * (t.data() - x.data()));
    ASSERT_EQ(st.x_curr.data()[0], x.data()[0]) << "iteration " << n;
    ASSERT_EQ(st.x_curr.data()[1], x.data()[1]) << "iteration " << n;
  }
}

// ||x_next - y||^2 computed directly and via the convex-combination expansion
TEST(KmStep, ConvexCombinationIdentityOnUpdates) {
  Rng rng(91);
  auto T = [](const BlockVector& x) { return BlockVector(x.layout(), 0.6 * x.data()); };
  auto s = InertialSchedule::constant_lambda(0.2, 0.1, 1.0, 0.5);
  RunState st = RunState::start(vec2(1.5, -0.5));
  for (int n = 0; n < 50; ++n) {
    const long it = st.iteration;
    const double lambda = s.lambda_at(it);
    const double a = s.alpha_at(it);
    BlockVector w(st.x_curr.layout(),
                  st.x_curr.data() + a * (st.x_curr.data() - st.x_prev.data()));
    BlockVector t = T(w);
    km_step(st, s, T);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::VectorXd y(2);
      y << rng.uniform(-2, 2), rng.uniform(-2, 2);
      const double direct = (st.x_curr.data() - y).squaredNorm();
      const double expanded = (1.0 - lambda) * (w.data() - y).squaredNorm() +
                              lambda * (t.data() - y).squaredNorm() -
                              lambda * (1.0 - lambda) * (t.data() - w.data()).squaredNorm();
      EXPECT_NEAR(direct, expanded, 1e-10 * (1.0 + std::abs(direct)));
    }
  }
}
