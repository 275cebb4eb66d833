#include <cmath>

#include <gtest/gtest.h>

#include "feller/errors.hpp"
#include "feller/jump_measure.hpp"
#include "feller/quadrature.hpp"

using namespace feller;

namespace {

// Exponent of the Lévy measure |y|^{-1-a} dy: |xi|^a * (-2 Gamma(-a) cos(pi a / 2)).
double power_measure_constant(double a) {
  return -2.0 * std::tgamma(-a) * std::cos(kPi * a / 2.0);
}

JumpMeasure power_measure(double a) {
  return JumpMeasure::generic([a](double y) { return std::pow(std::abs(y), -1.0 - a); },
                              GenericHints{a});
}

double normal_pdf(double y, double m, double s) {
  const double z = (y - m) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * kPi));
}

// Midpoint rule on [lo, hi] with many cells; independent of the library integrators.
template <class F>
double midpoint(F f, double lo, double hi, int cells = 200000) {
  const double w = (hi - lo) / cells;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) s += f(lo + (i + 0.5) * w);
  return s * w;
}

}  // namespace

TEST(StableDensity, MatchesPowerMeasureExponent) {
  for (double a : {0.5, 0.9, 1.5, 1.9}) {
    // c_a |y|^{-1-a} has exponent |xi|^a.
    EXPECT_NEAR(stable_density_constant(a) * power_measure_constant(a), 1.0, 1e-12) << a;
  }
}

TEST(JumpExponent, StableQuadratureMatchesClosedForm) {
  for (double a : {0.5, 0.9, 1.0, 1.5, 1.9}) {
    const auto m = JumpMeasure::symmetric_stable(a, 1.0, 1);
    for (double xi : {-50.0, -3.0, -0.2, 0.01, 1.0, 7.0, 400.0}) {
      const Vector v = Vector::Constant(1, xi);
      const Complex q = jump_exponent_quadrature(m, v);
      const double expect = std::pow(std::abs(xi), a);
      EXPECT_NEAR(q.real(), expect, 1e-8 * (1.0 + expect)) << a << " " << xi;
      EXPECT_NEAR(q.imag(), 0.0, 1e-8 * (1.0 + expect));
    }
  }
}

TEST(JumpExponent, GenericPowerDensity) {
  const double a = 1.5;
  const auto m = power_measure(a);
  EXPECT_EQ(m.kind(), JumpKind::Generic);
  EXPECT_FALSE(jump_exponent_closed_form(m, Vector::Ones(1)).has_value());
  for (double xi : {0.3, 2.0, 25.0}) {
    const Complex q = jump_exponent_quadrature(m, Vector::Constant(1, xi));
    const double expect = power_measure_constant(a) * std::pow(xi, a);
    EXPECT_NEAR(q.real(), expect, 1e-7 * expect);
    EXPECT_NEAR(q.imag(), 0.0, 1e-7 * expect);
  }
}

TEST(JumpExponent, NormalJumpsAgreeWithDirectIntegration) {
  const double rate = 1.7, mean = 0.4, sd = 0.8;
  const auto m = JumpMeasure::compound_poisson_normal(rate, mean, sd);
  // E[J; |J| <= 1] by the midpoint rule.
  const double small_mean = midpoint([&](double y) { return y * normal_pdf(y, mean, sd); }, -1, 1);
  for (double xi : {-4.0, -0.5, 0.7, 3.0, 30.0}) {
    const Complex cf = std::exp(Complex(-0.5 * sd * sd * xi * xi, mean * xi));
    const Complex expect = rate * (1.0 - cf) + Complex(0.0, xi * rate * small_mean);
    const Vector v = Vector::Constant(1, xi);
    const Complex closed = *jump_exponent_closed_form(m, v);
    const Complex quad = jump_exponent_quadrature(m, v);
    EXPECT_NEAR(std::abs(closed - expect), 0.0, 1e-9) << xi;
    EXPECT_NEAR(std::abs(quad - expect), 0.0, 1e-7) << xi;
  }
}

TEST(JumpExponent, NormalDensityAsGenericMatchesParametric) {
  const double rate = 2.0, mean = -0.3, sd = 1.2;
  const auto param = JumpMeasure::compound_poisson_normal(rate, mean, sd);
  const auto generic = JumpMeasure::generic(
      [&](double y) { return rate * normal_pdf(y, mean, sd); },
      GenericHints{-1.0, std::abs(mean) + 40.0 * sd});
  for (double xi : {-2.0, 0.1, 1.0, 9.0}) {
    const Vector v = Vector::Constant(1, xi);
    EXPECT_NEAR(std::abs(jump_exponent_quadrature(generic, v) - *jump_exponent_closed_form(param, v)),
                0.0, 1e-7);
  }
}

TEST(JumpExponent, PointMassesAreExact) {
  const auto m = JumpMeasure::compound_poisson_point(1.0, Vector::Ones(1));
  const Vector v = Vector::Constant(1, kPi);
  // -(e^{i pi} - 1 - i pi) for an atom at 1 inside the unit ball.
  const Complex expect(2.0, kPi);
  EXPECT_NEAR(std::abs(jump_exponent_quadrature(m, v) - expect), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(*jump_exponent_closed_form(m, v) - expect), 0.0, 1e-14);
}

TEST(Moments, PowerDensityTailAndSecondMoment) {
  const auto m = power_measure(1.5);
  for (double eps : {1e-3, 0.05, 0.7, 3.0}) {
    EXPECT_NEAR(tail_mass(m, eps), 2.0 * std::pow(eps, -1.5) / 1.5, 1e-8 * std::pow(eps, -1.5));
    EXPECT_NEAR(truncated_second_moment(m, eps)(0, 0), 2.0 * std::pow(eps, 0.5) / 0.5,
                1e-8 * std::pow(eps, 0.5));
    EXPECT_NEAR(truncated_mean(m, eps, 1.0)(0), 0.0, 1e-10);
  }
}

TEST(Moments, AsymmetricGenericTruncatedMean) {
  // n(y) = e^{-y} on y > 0 only: int_{lo}^{hi} y e^{-y} dy in closed form.
  const auto m = JumpMeasure::generic([](double y) { return y > 0.0 ? std::exp(-y) : 0.0; },
                                      GenericHints{0.0});
  const auto primitive = [](double y) { return -(y + 1.0) * std::exp(-y); };
  EXPECT_NEAR(truncated_mean(m, 0.1, 1.0)(0), primitive(1.0) - primitive(0.1), 1e-10);
  EXPECT_NEAR(tail_mass(m, 0.5), std::exp(-0.5), 1e-10);
}

TEST(JumpMeasureFactory, RejectsInvalidInput) {
  EXPECT_THROW(JumpMeasure::symmetric_stable(2.0, 1.0, 1), DomainError);
  EXPECT_THROW(JumpMeasure::symmetric_stable(0.0, 1.0, 1), DomainError);
  EXPECT_THROW(JumpMeasure::compound_poisson_normal(-1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(JumpMeasure::generic([](double) { return -1.0; }), DomainError);
  // |y|^2 n(y) ~ |y|^{-1.5} is not integrable at 0.
  EXPECT_THROW(JumpMeasure::generic([](double y) { return std::pow(std::abs(y), -3.5); }),
               DomainError);
}

TEST(JumpMeasureFactory, PushforwardScalesAtomsAndLines) {
  const auto m = JumpMeasure::compound_poisson_point(3.0, Vector::Constant(1, 0.5));
  Matrix f(2, 1);
  f << 2.0, -1.0;
  const auto p = m.pushforward(f);
  ASSERT_EQ(p.atoms().size(), 1u);
  EXPECT_DOUBLE_EQ(p.atoms()[0].location(0), 1.0);
  EXPECT_DOUBLE_EQ(p.atoms()[0].location(1), -0.5);
  EXPECT_DOUBLE_EQ(p.atoms()[0].mass, 3.0);
}

TEST(Quadrature, LevyKhinchineOfSymmetricDensityIsReal) {
  const quadrature::Density g = [](double t) { return std::exp(-t * t) / (t * t); };
  const Complex q = quadrature::levy_khinchine(g, 2.5, 1.0, GenericHints{1.0});
  // int (cos(w t) - 1) e^{-t^2} / t^2 dt = -pi w erf(w / 2) - 2 sqrt(pi) (e^{-w^2/4} - 1)
  const double w = 2.5;
  const double expect =
      -kPi * w * std::erf(w / 2.0) - 2.0 * std::sqrt(kPi) * (std::exp(-w * w / 4.0) - 1.0);
  EXPECT_NEAR(q.real(), expect, 1e-8);
  EXPECT_NEAR(q.imag(), 0.0, 1e-10);
}
