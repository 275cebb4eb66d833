#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feller/jump_measure.hpp"
#include "feller/types.hpp"

namespace feller {

/// Lévy-Khinchine data (drift, diffusion, jump measure, killing) of the symbol at one state.
struct LevyTriplet {
  Vector drift;
  Matrix diffusion;
  JumpMeasure jumps;
  double killing = 0.0;

  int dim() const { return static_cast<int>(drift.size()); }
};

/// Build a triplet and check its invariants: consistent dimensions, symmetric
/// positive semidefinite diffusion, nonnegative killing.
LevyTriplet make_triplet(Vector drift, Matrix diffusion, JumpMeasure jumps, double killing = 0.0);

/// Throws DomainError/DimensionError when the triplet violates an invariant.
void validate_triplet(const LevyTriplet& t);

enum class SymbolFamily { Brownian, StableLike, LevyConstant, SdeDriven, Custom };

const char* to_string(SymbolFamily family);

using TripletFn = std::function<LevyTriplet(const Vector&)>;
using SymbolFn = std::function<Complex(const Vector&, const Vector&)>;
using ParameterRecord = std::map<std::string, double>;

/// A state-dependent symbol q(x, xi): for every x a Lévy triplet, plus an
/// optional closed-form evaluator. Immutable and safe to share across threads.
class StateDependentSymbol {
 public:
  StateDependentSymbol(int dim, TripletFn triplet_at, std::optional<SymbolFn> closed_form,
                       SymbolFamily family, std::string name, ParameterRecord params = {});

  int dim() const { return dim_; }
  SymbolFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  const ParameterRecord& params() const { return params_; }
  bool has_closed_form() const { return closed_form_.has_value(); }

  /// True when the triplet does not depend on the state (a Lévy process).
  bool state_independent() const {
    return family_ == SymbolFamily::Brownian || family_ == SymbolFamily::LevyConstant;
  }

  LevyTriplet triplet_at(const Vector& x) const;
  /// Only valid when has_closed_form().
  Complex closed_form(const Vector& x, const Vector& xi) const;

 private:
  int dim_;
  TripletFn triplet_at_;
  std::optional<SymbolFn> closed_form_;
  SymbolFamily family_;
  std::string name_;
  ParameterRecord params_;
};

/// c - i l'xi + xi'Q xi / 2 + (jump part), with the jump part from closed forms
/// where the measure has them and from quadrature otherwise.
Complex levy_khinchine_exponent(const LevyTriplet& t, const Vector& xi);

/// Same exponent with every line density integrated numerically.
Complex levy_khinchine_quadrature(const LevyTriplet& t, const Vector& xi);

/// q(x, xi), through the closed form when present and the triplet otherwise.
Complex eval_symbol(const StateDependentSymbol& sym, const Vector& x, const Vector& xi);

/// q(x, xi) through the triplet and numerical integration, ignoring any closed form.
Complex eval_symbol_quadrature(const StateDependentSymbol& sym, const Vector& x,
                               const Vector& xi);

// ---------------------------------------------------------------------------
// Built-in families

/// q(x, xi) = xi'Q xi / 2 with constant covariance Q (identity by default).
StateDependentSymbol brownian(int dim = 1);
StateDependentSymbol brownian(const Matrix& covariance);

/// Lévy process with the given constant triplet.
StateDependentSymbol levy_constant(LevyTriplet triplet, std::string name = "levy");

/// q(xi) = scale^alpha sum_k |xi_k|^alpha.
StateDependentSymbol symmetric_stable(double alpha, double scale = 1.0, int dim = 1);

/// The Cauchy process, q(xi) = |xi|.
StateDependentSymbol cauchy();

/// Pure drift, q(xi) = -i drift'xi.
StateDependentSymbol pure_drift(Vector drift);

/// Uncompensated compound Poisson process: q(xi) = rate (1 - E e^{i xi'J}).
/// The drift of the triplet is set to the compensator of the small jumps.
StateDependentSymbol compound_poisson(JumpMeasure jumps);
StateDependentSymbol compound_poisson_point(double rate, Vector location);
StateDependentSymbol compound_poisson_normal(double rate, double mean, double stddev);

using IndexFn = std::function<double(double)>;

/// alpha(x) = clamp(offset + slope x, lower, upper).
struct ClampedLinearIndex {
  double offset = 0.9;
  double slope = 1.0;
  double lower = 0.9;
  double upper = 1.9;

  double operator()(double x) const;
};

/// ((0.9 + x) ^ 1.9) v 0.9, the index function of the demo stable-like process.
ClampedLinearIndex demo_stable_index();

/// One-dimensional stable-like symbol q(x, xi) = scale^{alpha(x)} |xi|^{alpha(x)}.
/// alpha must map into (0, 2); this is checked at every evaluation.
StateDependentSymbol stable_like(IndexFn alpha, double scale = 1.0,
                                 std::string name = "stable_like", ParameterRecord params = {});

/// stable_like(demo_stable_index()).
StateDependentSymbol stable_like_demo();

using CoefficientFn = std::function<Matrix(const Vector&)>;

/// Symbol of X_t = X_0 + int f(X_{s-}) dZ_s for a Lévy process Z with exponent psi:
/// q(x, xi) = psi(f(x)' xi). f maps R^dim to (dim x n) matrices.
StateDependentSymbol symbol_from_sde(CoefficientFn f, const StateDependentSymbol& driver,
                                     int dim);

/// Symbol given only by a closed form. Used to inject test fixtures that are not
/// negative definite; triplet_at throws for these.
StateDependentSymbol closed_form_only(int dim, SymbolFn q, std::string name);

/// A copy of `base` whose triplets carry the constant killing rate `rate`.
StateDependentSymbol with_killing(const StateDependentSymbol& base, double rate);

}  // namespace feller
