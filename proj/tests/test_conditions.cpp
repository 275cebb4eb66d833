#include <cmath>

#include <gtest/gtest.h>

#include "feller/conditions.hpp"

using namespace feller;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

std::vector<Vector> points(std::initializer_list<double> xs) {
  std::vector<Vector> g;
  for (double x : xs) g.push_back(v1(x));
  return g;
}

StateDependentSymbol cubic() {
  return closed_form_only(1, [](const Vector&, const Vector& xi) {
    return Complex(std::pow(xi.norm(), 3.0), 0.0);
  }, "cubic");
}

}  // namespace

TEST(Grids, FrequencyGridIsSignSymmetric) {
  const auto g = log_frequency_grid(2, 61);
  ASSERT_EQ(g.size(), 61u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], Vector(-g[g.size() - 1 - i]));
  EXPECT_EQ(g[30], Vector::Zero(2));
  EXPECT_NEAR(g.back().norm(), 1e3, 1e-9);
  EXPECT_NEAR(g[31].norm(), 1e-2, 1e-15);
}

TEST(Grids, StateGridEndpoints) {
  const auto g = uniform_state_grid(-2.0, 3.0, 1, 41);
  ASSERT_EQ(g.size(), 41u);
  EXPECT_DOUBLE_EQ(g.front()[0], -2.0);
  EXPECT_DOUBLE_EQ(g.back()[0], 3.0);
}

TEST(ConditionA3, StableLikePasses) {
  const auto r = check_condition_A3(stable_like_demo(), points({-1.0, 0.5, 2.0}));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.tag, ConditionTag::A3);
}

TEST(ConditionA3, KillingFails) {
  const auto k = with_killing(stable_like_demo(), 1.0);
  const auto r = check_condition_A3(k, points({-1.0, 0.5, 2.0}));
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.witness.value.real(), 1.0);
  EXPECT_EQ(r.witness.xi, v1(0.0));
  for (double x : {-1.0, 0.5, 2.0}) {
    EXPECT_DOUBLE_EQ(check_condition_A3(k, points({x})).witness.value.real(), 1.0);
  }
}

TEST(ConditionA3, BrownianPasses) {
  EXPECT_TRUE(check_condition_A3(brownian(2), uniform_state_grid(-5, 5, 2)).pass);
}

TEST(ConditionA2, StableLikePassesWithConstantAtMostOne) {
  const auto r = check_condition_A2(stable_like_demo(), uniform_state_grid(-3, 3, 1),
                                    log_frequency_grid(1));
  EXPECT_TRUE(r.pass) << r.note;
  ASSERT_TRUE(r.estimated_constant);
  // sup |xi|^a / (1 + |xi|^2) <= 1 for a in [0, 2].
  EXPECT_LE(*r.estimated_constant, 1.0);
  EXPECT_GT(*r.estimated_constant, 0.5);
}

TEST(ConditionA2, BrownianConstantApproachesHalf) {
  const auto r = check_condition_A2(brownian(1), points({0.0}), log_frequency_grid(1));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(*r.estimated_constant, 0.5, 1e-6);
}

TEST(ConditionA2, CubicFailsAtTopFrequency) {
  const auto r = check_condition_A2(cubic(), points({0.0, 1.0}), log_frequency_grid(1));
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.witness.xi.norm(), 1e3, 1e-9);
  EXPECT_NEAR(r.witness.value.real(), 1e9, 1e-3);
}

TEST(ConditionA2, EnlargingGridNeverDecreasesConstant) {
  const auto s = compound_poisson_normal(2.0, 0.3, 1.0);
  const auto small = check_condition_A2(s, points({0.0}), log_frequency_grid(1, 21, 0.1, 10.0));
  auto big_grid = log_frequency_grid(1, 21, 0.1, 10.0);
  for (const auto& xi : log_frequency_grid(1, 41, 1e-3, 1e2)) big_grid.push_back(xi);
  const auto big = check_condition_A2(s, points({0.0}), big_grid);
  EXPECT_GE(*big.estimated_constant, *small.estimated_constant);
}

TEST(Structural, BrownianAllPass) {
  const auto reports = check_structural(brownian(1), uniform_state_grid(-2, 2, 1, 11),
                                        log_frequency_grid(1, 21));
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << to_string(r.tag);
}

TEST(Structural, StableLikeRealAndSymmetric) {
  const auto s = stable_like_demo();
  const Complex a = eval_symbol(s, v1(0.5), v1(2.0));
  const Complex b = eval_symbol(s, v1(0.5), v1(-2.0));
  EXPECT_EQ(a.imag(), 0.0);
  EXPECT_EQ(a, b);
  const auto reports = check_structural(s, uniform_state_grid(-3, 3, 1), log_frequency_grid(1));
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << to_string(r.tag) << " " << r.note;
}

TEST(Structural, NegativeRealPartFails) {
  const auto neg = closed_form_only(1, [](const Vector&, const Vector& xi) {
    return Complex(-xi.squaredNorm(), 0.0);
  }, "negative");
  const auto reports = check_structural(neg, points({0.0}), points({-1.0, 0.0, 1.0}));
  const auto& real = reports[0];
  EXPECT_EQ(real.tag, ConditionTag::RealPartNonneg);
  EXPECT_FALSE(real.pass);
  EXPECT_DOUBLE_EQ(std::abs(real.witness.xi[0]), 1.0);
  EXPECT_DOUBLE_EQ(real.witness.value.real(), -1.0);
}

TEST(Structural, DiscontinuityDetected) {
  const auto jump = closed_form_only(1, [](const Vector& x, const Vector& xi) {
    return Complex((x[0] > 0.0 ? 2.0 : 1.0) * std::abs(xi[0]), 0.0);
  }, "discontinuous");
  const auto reports = check_structural(jump, uniform_state_grid(-1, 1, 1, 21), log_frequency_grid(1, 11));
  EXPECT_TRUE(reports[0].pass);
  EXPECT_TRUE(reports[1].pass);
  EXPECT_FALSE(reports[2].pass);
}

TEST(Structural, AsymmetricClosedFormFailsConjugacy) {
  const auto odd = closed_form_only(1, [](const Vector&, const Vector& xi) {
    return Complex(std::abs(xi[0]) + xi[0], 0.0);
  }, "odd");
  const auto reports = check_structural(odd, points({0.0}), log_frequency_grid(1, 11));
  EXPECT_FALSE(reports[1].pass);
}

TEST(ClosedForm, StableAndCompoundPoissonAgree) {
  const auto xg = points({0.0});
  const auto xig = log_frequency_grid(1, 21);
  for (double a : {0.9, 1.5}) {
    const auto r = check_closed_form(symmetric_stable(a), xg, xig);
    EXPECT_TRUE(r.pass) << r.note;
  }
  EXPECT_TRUE(check_closed_form(compound_poisson_normal(2.0, 0.5, 0.7), xg, xig).pass);
}
