#include <cmath>

#include <gtest/gtest.h>

#include "feller/errors.hpp"
#include "feller/symbol.hpp"

using namespace feller;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix m1(double a) { return Matrix::Constant(1, 1, a); }

}  // namespace

TEST(EvalSymbol, BrownianUnitFrequency) {
  const auto b = brownian(3);
  Vector xi = Vector::Zero(3);
  xi[0] = 1.0;
  const Complex q = eval_symbol(b, Vector::Constant(3, 7.0), xi);
  EXPECT_DOUBLE_EQ(q.real(), 0.5);
  EXPECT_DOUBLE_EQ(q.imag(), 0.0);
}

TEST(EvalSymbol, StableLikeDemoAtTwo) {
  const auto s = stable_like_demo();
  const Complex q = eval_symbol(s, v1(2.0), v1(3.0));
  EXPECT_NEAR(q.real(), std::pow(3.0, 1.9), 1e-12);
  EXPECT_NEAR(q.real(), 8.0636, 1e-4);
  EXPECT_NEAR(eval_symbol_quadrature(s, v1(2.0), v1(3.0)).real(), std::pow(3.0, 1.9), 1e-7);
}

TEST(EvalSymbol, PointMassJumpThroughTriplet) {
  // Triplet (0, 0, delta_1): -(e^{i pi} - 1 - i pi) = 2 + i pi.
  const auto sym = levy_constant(
      make_triplet(Vector::Zero(1), Matrix::Zero(1, 1), JumpMeasure::compound_poisson_point(1.0, v1(1.0))),
      "point");
  for (const Complex q : {eval_symbol(sym, v1(-4.0), v1(kPi)),
                          eval_symbol_quadrature(sym, v1(-4.0), v1(kPi))}) {
    EXPECT_NEAR(q.real(), 2.0, 1e-13);
    EXPECT_NEAR(q.imag(), kPi, 1e-13);
  }
}

TEST(EvalSymbol, CompoundPoissonFamilyIsUncompensated) {
  const double rate = 2.0;
  const auto sym = compound_poisson_point(rate, v1(1.0));
  for (double xi : {-1.3, 0.4, kPi}) {
    const Complex expect = rate * (1.0 - std::exp(Complex(0.0, xi)));
    EXPECT_NEAR(std::abs(eval_symbol(sym, v1(0.0), v1(xi)) - expect), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(eval_symbol_quadrature(sym, v1(0.0), v1(xi)) - expect), 0.0, 1e-13);
  }
}

TEST(EvalSymbol, ZeroFrequencyVanishes) {
  const std::vector<StateDependentSymbol> all = {
      brownian(2), cauchy(), symmetric_stable(1.9), symmetric_stable(0.7, 2.0, 2),
      compound_poisson_point(2.0, v1(1.0)), compound_poisson_normal(1.0, 0.5, 2.0),
      stable_like_demo(), pure_drift(v2(1.0, -2.0))};
  for (const auto& s : all) {
    for (double x : {-3.0, 0.0, 0.5, 2.0}) {
      EXPECT_EQ(std::abs(eval_symbol(s, Vector::Constant(s.dim(), x), Vector::Zero(s.dim()))), 0.0)
          << s.name();
    }
  }
}

TEST(EvalSymbol, ConjugateSymmetryOfBuiltins) {
  const auto s = compound_poisson_normal(1.5, 0.8, 0.3);
  for (double xi : {0.2, 1.0, 6.0}) {
    const Complex a = eval_symbol(s, v1(0.0), v1(xi));
    const Complex b = eval_symbol(s, v1(0.0), v1(-xi));
    EXPECT_NEAR(std::abs(b - std::conj(a)), 0.0, 1e-14);
    EXPECT_GE(a.real(), 0.0);
  }
}

TEST(EvalSymbol, DimensionMismatchThrows) {
  const auto b = brownian(2);
  EXPECT_THROW(eval_symbol(b, Vector::Zero(3), Vector::Zero(2)), DimensionError);
  EXPECT_THROW(eval_symbol(b, Vector::Zero(2), Vector::Zero(1)), DimensionError);
}

TEST(EvalSymbol, StableLikeIndexOutsideRangeThrows) {
  const auto bad = stable_like([](double x) { return 1.0 + x; });
  EXPECT_NO_THROW(eval_symbol(bad, v1(0.5), v1(1.0)));
  EXPECT_THROW(eval_symbol(bad, v1(1.5), v1(1.0)), DomainError);
  EXPECT_THROW(bad.triplet_at(v1(-1.0)), DomainError);
}

TEST(StableIndex, DemoClamps) {
  const auto a = demo_stable_index();
  EXPECT_DOUBLE_EQ(a(-5.0), 0.9);
  EXPECT_DOUBLE_EQ(a(-1.0), 0.9);
  EXPECT_DOUBLE_EQ(a(0.5), 1.4);
  EXPECT_DOUBLE_EQ(a(2.0), 1.9);
  EXPECT_DOUBLE_EQ(a(7.0), 1.9);
}

TEST(Triplet, ValidationRejectsBadDiffusionAndKilling) {
  Matrix q(2, 2);
  q << 1.0, 0.5, 0.4, 1.0;
  EXPECT_THROW(make_triplet(Vector::Zero(2), q, JumpMeasure::none(2)), DomainError);
  q << 1.0, 2.0, 2.0, 1.0;  // eigenvalue -1
  EXPECT_THROW(make_triplet(Vector::Zero(2), q, JumpMeasure::none(2)), DomainError);
  EXPECT_THROW(make_triplet(Vector::Zero(1), m1(1.0), JumpMeasure::none(1), -1.0), DomainError);
  EXPECT_THROW(make_triplet(Vector::Zero(2), m1(1.0), JumpMeasure::none(2)), DimensionError);
  q << 1.0, 1.0, 1.0, 1.0;  // semidefinite is fine
  EXPECT_NO_THROW(make_triplet(Vector::Zero(2), q, JumpMeasure::none(2)));
}

TEST(SymbolFromSde, IdentityBrownian) {
  const auto s = symbol_from_sde([](const Vector&) { return Matrix::Identity(2, 2); }, brownian(2), 2);
  for (double x : {-1.0, 3.0}) {
    const Vector xi = v2(0.3, -2.0);
    EXPECT_NEAR(eval_symbol(s, Vector::Constant(2, x), xi).real(), 0.5 * xi.squaredNorm(), 1e-14);
  }
}

TEST(SymbolFromSde, ScaledCauchy) {
  const auto s = symbol_from_sde([](const Vector&) { return m1(2.0); }, cauchy(), 1);
  for (double xi : {-3.0, 0.25, 10.0}) {
    EXPECT_NEAR(eval_symbol(s, v1(1.0), v1(xi)).real(), 2.0 * std::abs(xi), 1e-14);
    EXPECT_NEAR(eval_symbol_quadrature(s, v1(1.0), v1(xi)).real(), 2.0 * std::abs(xi), 1e-7);
  }
}

TEST(SymbolFromSde, LinearCoefficientBrownian) {
  const auto s = symbol_from_sde([](const Vector& x) { return m1(x[0]); }, brownian(1), 1);
  for (double x : {-2.0, 1.0, 3.0}) {
    EXPECT_DOUBLE_EQ(s.triplet_at(v1(x)).diffusion(0, 0), x * x);
    for (double xi : {-1.0, 0.5, 4.0}) {
      const double expect = 0.5 * x * x * xi * xi;
      EXPECT_NEAR(eval_symbol(s, v1(x), v1(xi)).real(), expect, 1e-13);
      EXPECT_NEAR(eval_symbol_quadrature(s, v1(x), v1(xi)).real(), expect, 1e-12);
    }
  }
}

TEST(SymbolFromSde, CutoffCorrectionKeepsTripletConsistent) {
  // Jumps N(0.6, 0.5^2) pushed through f = 2.5 and through a 2 x 1 map; the
  // triplet route must reproduce psi(f' xi) evaluated directly.
  const auto driver = levy_constant(make_triplet(v1(0.3), m1(0.2),
                                                 JumpMeasure::compound_poisson_normal(1.5, 0.6, 0.5)),
                                    "normal_jumps");
  const auto s = symbol_from_sde([](const Vector&) { return m1(2.5); }, driver, 1);
  for (double xi : {-2.0, 0.7, 3.0}) {
    const Complex direct = eval_symbol(driver, v1(0.0), v1(2.5 * xi));
    EXPECT_NEAR(std::abs(eval_symbol(s, v1(0.0), v1(xi)) - direct), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(eval_symbol_quadrature(s, v1(0.0), v1(xi)) - direct), 0.0, 1e-7);
  }
  Matrix f(2, 1);
  f << 0.4, -1.5;
  const auto s2 = symbol_from_sde([f](const Vector&) { return f; }, driver, 2);
  const Vector xi = v2(1.2, 0.9);
  const Complex direct = eval_symbol(driver, v1(0.0), f.transpose() * xi);
  EXPECT_NEAR(std::abs(levy_khinchine_exponent(s2.triplet_at(v2(0.0, 0.0)), xi) - direct), 0.0,
              1e-12);
}

TEST(SymbolFromSde, RequiresLevyDriverAndMatchingShape) {
  EXPECT_THROW(symbol_from_sde([](const Vector&) { return m1(1.0); }, stable_like_demo(), 1),
               DomainError);
  const auto s = symbol_from_sde([](const Vector&) { return Matrix::Identity(2, 2); }, brownian(1), 2);
  EXPECT_THROW(eval_symbol(s, v2(0.0, 0.0), v2(1.0, 1.0)), DimensionError);
}

TEST(Killing, AddsConstantTerm) {
  const auto k = with_killing(brownian(1), 1.0);
  EXPECT_DOUBLE_EQ(eval_symbol(k, v1(3.0), v1(0.0)).real(), 1.0);
  EXPECT_DOUBLE_EQ(k.triplet_at(v1(3.0)).killing, 1.0);
}

TEST(ClosedFormOnly, TripletUnavailable) {
  const auto c = closed_form_only(1, [](const Vector&, const Vector& xi) {
    return Complex(std::pow(std::abs(xi[0]), 3.0), 0.0);
  }, "cubic");
  EXPECT_DOUBLE_EQ(eval_symbol(c, v1(0.0), v1(2.0)).real(), 8.0);
  EXPECT_THROW(c.triplet_at(v1(0.0)), DomainError);
}
