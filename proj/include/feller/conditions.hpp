#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feller/symbol.hpp"

namespace feller {

enum class ConditionTag { A2, A3, RealPartNonneg, ConjSymmetry, ContinuityInX, ClosedForm };

const char* to_string(ConditionTag tag);

struct Witness {
  Vector x;
  Vector xi;
  Complex value;
};

/// Outcome of a grid check on a symbol. A failing report always has a witness.
struct ConditionReport {
  ConditionTag tag;
  bool pass = true;
  Witness witness;
  std::string grid;
  /// A2 only: max over the grid of |q(x, xi)| / (1 + |xi|^2).
  std::optional<double> estimated_constant;
  std::string note;
};

/// n points uniform on [lo, hi]^dim, taken along the diagonal when dim > 1.
std::vector<Vector> uniform_state_grid(double lo, double hi, int dim, int n = 41);

/// Sign-symmetric frequency grid containing 0 and (n - 1) / 2 log-spaced
/// magnitudes in [min_abs, max_abs] on each side. For dim > 1 the direction
/// cycles through the coordinate axes and the diagonal.
std::vector<Vector> log_frequency_grid(int dim, int n = 61, double min_abs = 1e-2,
                                       double max_abs = 1e3);

/// |q(x, 0)| <= 1e-10 at every grid state.
ConditionReport check_condition_A3(const StateDependentSymbol& sym,
                                   const std::vector<Vector>& x_grid);

/// Grid evidence for |q(x, xi)| <= c (1 + |xi|^2). Fails when the ratio is not
/// finite or still grows by more than 5% over the top decade of |xi|.
ConditionReport check_condition_A2(const StateDependentSymbol& sym,
                                   const std::vector<Vector>& x_grid,
                                   const std::vector<Vector>& xi_grid);

/// Re q >= -1e-10, q(x, -xi) = conj q(x, xi), and continuity of x -> q(x, xi).
std::vector<ConditionReport> check_structural(const StateDependentSymbol& sym,
                                              const std::vector<Vector>& x_grid,
                                              const std::vector<Vector>& xi_grid);

/// Agreement of the closed form with the quadrature route:
/// |closed - quadrature| <= rel_tol (1 + |closed|) at every grid point.
ConditionReport check_closed_form(const StateDependentSymbol& sym,
                                  const std::vector<Vector>& x_grid,
                                  const std::vector<Vector>& xi_grid, double rel_tol = 1e-6);

}  // namespace feller
