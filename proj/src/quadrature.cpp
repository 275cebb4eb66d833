#include "feller/quadrature.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "feller/errors.hpp"

namespace feller::quadrature {
namespace {

using boost::math::quadrature::gauss_kronrod;

// Innermost radius of the log-variable region, relative to its outer edge.
constexpr double kInnerShrink = 1e-24;
// Piecewise integration of bounded supports gives up beyond this many periods.
constexpr long kMaxSegments = 200000;
// Absolute error shared by all segments of an oscillatory region.
constexpr double kSegmentBudget = 1e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Accum {
  double value = 0.0;
  double error = 0.0;
  void add(double v, double e) {
    value += v;
    error += e;
  }
};

// Adaptive bisection until the Kronrod error estimate is below 1e-11 of the L1
// norm or below abs_floor. The absolute floor keeps intervals where the density
// has underflowed from being refined forever.
template <class F>
void integrate_gk(const F& f, double a, double b, Accum& acc, double abs_floor = 0.0,
                  int depth = 0) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (err <= std::max(1e-11 * l1, abs_floor) || depth >= 10) {
    acc.add(v, err);
    return;
  }
  const double mid = 0.5 * (a + b);
  integrate_gk(f, a, mid, acc, 0.5 * abs_floor, depth + 1);
  integrate_gk(f, mid, b, acc, 0.5 * abs_floor, depth + 1);
}

double cos_minus_one(double x) {
  const double s = std::sin(0.5 * x);
  return -2.0 * s * s;
}

double sin_minus_identity(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    // -x^3/3! + x^5/5! - x^7/7! + x^9/9!
    return x * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362880.0)));
  }
  return std::sin(x) - x;
}

// int_0^delta t^k g(t) dt assuming g is a power law below delta.
double power_law_remainder(const Density& g, double delta, int k, const GenericHints& hints) {
  const double g_delta = g(delta);
  if (g_delta == 0.0) return 0.0;
  const double p =
      hints.activity_index ? -1.0 - *hints.activity_index : local_exponent(g, delta, +1);
  const double order = k + 1 + p;
  if (!(order > 0.0)) {
    throw QuadratureError("Lévy density is not integrable against |t|^" + std::to_string(k) +
                              " at the origin",
                          kInf);
  }
  return std::pow(delta, k + 1) * g_delta / order;
}

boost::math::quadrature::ooura_fourier_cos<double>& ooura_cos() {
  thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-12);
  return integrator;
}

boost::math::quadrature::ooura_fourier_sin<double>& ooura_sin() {
  thread_local boost::math::quadrature::ooura_fourier_sin<double> integrator(1e-12);
  return integrator;
}

double tail_one_sided(const Density& g, double r, double support) {
  if (r >= support) return 0.0;
  Accum acc;
  if (std::isfinite(support)) {
    const auto f = [&](double s) {
      const double t = std::exp(s);
      return g(t) * t;
    };
    integrate_gk(f, std::log(r), std::log(support), acc);
  } else {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double v = integrator.integrate(g, r, kInf, 1e-12, &err);
    acc.add(v, err);
  }
  return acc.value;
}

// Contribution of one half line: int_0^inf (e^{iwt} - 1 - iwt 1_{t<=cutoff}) g(t) dt.
void half_line(const Density& g, double w, double cutoff, const GenericHints& hints,
               Accum& re, Accum& im) {
  const double support = hints.support_radius;
  const double aw = std::abs(w);
  const double sign = w < 0.0 ? -1.0 : 1.0;
  const double inner_end = std::min(cutoff, support);

  // Region A: |w t| <= 1, integrand O(t^2 g(t)); log variable plus power-law remainder.
  const double a = std::min(inner_end, 1.0 / aw);
  if (a > 0.0) {
    const double delta = a * kInnerShrink;
    const auto f_re = [&](double s) {
      const double t = std::exp(s);
      return cos_minus_one(w * t) * g(t) * t;
    };
    const auto f_im = [&](double s) {
      const double t = std::exp(s);
      return sin_minus_identity(w * t) * g(t) * t;
    };
    integrate_gk(f_re, std::log(delta), std::log(a), re);
    integrate_gk(f_im, std::log(delta), std::log(a), im);
    re.add(-0.5 * w * w * power_law_remainder(g, delta, 2, hints), 0.0);
    im.add(-(w * w * w / 6.0) * power_law_remainder(g, delta, 3, hints), 0.0);
  }

  const double period = kPi / aw;

  // Region B: [a, inner_end], compensated and oscillatory.
  if (inner_end > a) {
    const auto f_re = [&](double t) { return cos_minus_one(w * t) * g(t); };
    const auto f_im = [&](double t) { return std::sin(w * t) * g(t); };
    // The compensator -w t g(t) is not oscillatory; integrate it on its own.
    const auto f_comp = [&](double s) {
      const double t = std::exp(s);
      return -w * t * t * g(t);
    };
    integrate_gk(f_comp, std::log(a), std::log(inner_end), im);
    const long n = static_cast<long>(std::ceil((inner_end - a) / period));
    if (n > kMaxSegments) {
      throw QuadratureError("compensated region spans too many oscillations", kInf);
    }
    const double floor = kSegmentBudget / static_cast<double>(n);
    for (long j = 0; j < n; ++j) {
      const double lo = a + j * period;
      const double hi = std::min(inner_end, lo + period);
      integrate_gk(f_re, lo, hi, re, floor);
      integrate_gk(f_im, lo, hi, im, floor);
    }
  }

  // Region C: (cutoff, support), uncompensated.
  if (support > cutoff) {
    const long n = std::isfinite(support)
                       ? static_cast<long>(std::ceil((support - cutoff) / period))
                       : kMaxSegments + 1;
    if (n <= kMaxSegments) {
      const auto f_re = [&](double t) { return cos_minus_one(w * t) * g(t); };
      const auto f_im = [&](double t) { return std::sin(w * t) * g(t); };
      const double floor = kSegmentBudget / static_cast<double>(n);
      for (long j = 0; j < n; ++j) {
        const double lo = cutoff + j * period;
        const double hi = std::min(support, lo + period);
        integrate_gk(f_re, lo, hi, re, floor);
        integrate_gk(f_im, lo, hi, im, floor);
      }
    } else {
      const auto shifted = [&](double s) { return g(cutoff + s); };
      const auto [c, c_err] = ooura_cos().integrate(shifted, aw);
      const auto [s, s_err] = ooura_sin().integrate(shifted, aw);
      const double mass = tail_one_sided(g, cutoff, support);
      const double cw = std::cos(aw * cutoff);
      const double sw = std::sin(aw * cutoff);
      const double err = c_err * std::abs(c) + s_err * std::abs(s);
      re.add(cw * c - sw * s - mass, err + 1e-13 * mass);
      im.add(sign * (sw * c + cw * s), err);
    }
  }
}

void check(const Accum& acc, const Tolerances& tol, const char* what) {
  if (!std::isfinite(acc.value)) {
    throw QuadratureError(std::string(what) + ": non-finite result", kInf);
  }
  if (acc.error > tol.relative * std::abs(acc.value) + tol.absolute) {
    throw QuadratureError(std::string(what) + ": tolerance not met", acc.error);
  }
}

}  // namespace

double local_exponent(const Density& density, double t, int side) {
  constexpr double h = 0.25;
  const double up = density(side * t * std::exp(h));
  const double down = density(side * t * std::exp(-h));
  if (!(up > 0.0) || !(down > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (std::log(up) - std::log(down)) / (2.0 * h);
}

Complex levy_khinchine(const Density& density, double w, double cutoff,
                       const GenericHints& hints, Tolerances tol) {
  if (w == 0.0) return {0.0, 0.0};
  Accum re;
  Accum im;
  for (const int side : {+1, -1}) {
    // The negative half line is the positive one for n(-t) at frequency -w.
    const Density g = [&density, side](double t) { return density(side * t); };
    half_line(g, side * w, cutoff, hints, re, im);
  }
  const Complex value{re.value, im.value};
  if (!std::isfinite(re.value) || !std::isfinite(im.value)) {
    throw QuadratureError("Lévy-Khinchine integral: non-finite result", kInf);
  }
  const double err = re.error + im.error;
  if (err > tol.relative * std::abs(value) + tol.absolute) {
    throw QuadratureError("Lévy-Khinchine integral: tolerance not met", err);
  }
  return value;
}

double tail(const Density& density, double r, int side, const GenericHints& hints,
            Tolerances tol) {
  if (!(r > 0.0)) throw DomainError("tail integral needs a positive radius");
  const Density g = [&density, side](double t) { return density(side * t); };
  const double v = tail_one_sided(g, r, hints.support_radius);
  if (!std::isfinite(v)) throw QuadratureError("tail integral is not finite", kInf);
  (void)tol;
  return v;
}

double moment(const Density& density, int k, double lo, double hi, int side,
              const GenericHints& hints, Tolerances tol) {
  hi = std::min(hi, hints.support_radius);
  if (!(hi > lo)) return 0.0;
  if (!std::isfinite(hi)) {
    if (k != 0) throw DomainError("unbounded moment integrals are only supported for k = 0");
    return tail(density, lo, side, hints, tol);
  }
  const Density g = [&density, side](double t) { return density(side * t); };
  Accum acc;
  const double start = lo > 0.0 ? lo : hi * kInnerShrink;
  const auto f = [&](double s) {
    const double t = std::exp(s);
    return std::pow(t, k + 1) * g(t);
  };
  integrate_gk(f, std::log(start), std::log(hi), acc);
  if (lo == 0.0) acc.add(power_law_remainder(g, start, k, hints), 0.0);
  check(acc, tol, "truncated moment");
  return acc.value;
}

}  // namespace feller::quadrature
