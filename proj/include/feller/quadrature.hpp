#pragma once

#include <functional>

#include "feller/jump_measure.hpp"
#include "feller/types.hpp"

// Numerical integrals against a Lévy density on the real line. All routines
// work side by side: side = +1 integrates n(t) for t > 0, side = -1 integrates
// n(-t) for t > 0, so an integral over R \ {0} is the sum of both sides.
namespace feller::quadrature {

using Density = std::function<double(double)>;

struct Tolerances {
  double relative = 1e-8;
  double absolute = 1e-10;
};

/// int_{R\{0}} (e^{i w t} - 1 - i w t 1_{|t| <= cutoff}) n(t) dt.
///
/// The integral is split at the cutoff. Inside, the integrand is O(t^2) and is
/// integrated in log t down to a tiny radius, below which n is extrapolated as a
/// power law. Outside, the oscillatory part uses Ooura's double exponential
/// Fourier rule (or plain Gauss-Kronrod when the support is bounded).
/// Throws QuadratureError when the estimated error exceeds the tolerances.
Complex levy_khinchine(const Density& density, double w, double cutoff,
                       const GenericHints& hints = {}, Tolerances tol = {});

/// int_r^inf n(side * t) dt, r > 0.
double tail(const Density& density, double r, int side, const GenericHints& hints = {},
            Tolerances tol = {});

/// int_lo^hi t^k n(side * t) dt with 0 <= lo < hi (hi may be infinite only for k = 0).
double moment(const Density& density, int k, double lo, double hi, int side,
              const GenericHints& hints = {}, Tolerances tol = {});

/// Exponent p with n(side * t) ~ t^p as t -> 0+, read off at radius t.
double local_exponent(const Density& density, double t, int side);

}  // namespace feller::quadrature
