#include "feller/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "feller/errors.hpp"

namespace feller {
namespace {

constexpr double kA3Tolerance = 1e-10;
constexpr double kRealPartTolerance = 1e-10;
constexpr double kConjTolerance = 1e-10;
constexpr double kA2GrowthPerDecade = 0.05;

std::string describe(const std::vector<Vector>& x_grid, const std::vector<Vector>& xi_grid) {
  std::ostringstream os;
  os << x_grid.size() << " states";
  if (!xi_grid.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& xi : xi_grid) {
      const double r = xi.norm();
      if (r > 0.0) lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    os << " x " << xi_grid.size() << " frequencies, |xi| in [" << lo << ", " << hi << "]";
  }
  return os.str();
}

void require_nonempty(const std::vector<Vector>& g, const char* what) {
  if (g.empty()) throw DomainError(std::string(what) + " grid is empty");
}

// Largest distance below which a point should be nudged when probing continuity.
double min_spacing(const std::vector<Vector>& x_grid) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    const double d = (x_grid[i] - x_grid[i - 1]).norm();
    if (d > 0.0) h = std::min(h, d);
  }
  return std::isfinite(h) ? h : 1.0;
}

}  // namespace

const char* to_string(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::A2:
      return "A2";
    case ConditionTag::A3:
      return "A3";
    case ConditionTag::RealPartNonneg:
      return "RealPartNonneg";
    case ConditionTag::ConjSymmetry:
      return "ConjSymmetry";
    case ConditionTag::ContinuityInX:
      return "ContinuityInX";
    case ConditionTag::ClosedForm:
      return "ClosedForm";
  }
  return "?";
}

std::vector<Vector> uniform_state_grid(double lo, double hi, int dim, int n) {
  if (n < 1 || dim < 1) throw DomainError("state grid needs n >= 1 and dim >= 1");
  std::vector<Vector> grid;
  grid.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
    grid.push_back(Vector::Constant(dim, lo + t * (hi - lo)));
  }
  return grid;
}

std::vector<Vector> log_frequency_grid(int dim, int n, double min_abs, double max_abs) {
  if (dim < 1 || n < 3 || n % 2 == 0) {
    throw DomainError("frequency grid needs an odd number of points >= 3");
  }
  if (!(min_abs > 0.0 && max_abs > min_abs)) throw DomainError("bad frequency range");
  const int half = (n - 1) / 2;
  std::vector<Vector> directions;
  for (int k = 0; k < dim; ++k) directions.push_back(Vector::Unit(dim, k));
  if (dim > 1) directions.push_back(Vector::Ones(dim) / std::sqrt(static_cast<double>(dim)));

  std::vector<Vector> grid;
  grid.reserve(n);
  for (int i = half - 1; i >= 0; --i) {
    const double m = half == 1 ? max_abs
                               : min_abs * std::pow(max_abs / min_abs,
                                                    static_cast<double>(i) / (half - 1));
    grid.push_back(-m * directions[i % directions.size()]);
  }
  grid.push_back(Vector::Zero(dim));
  for (int i = 0; i < half; ++i) {
    const double m = half == 1 ? max_abs
                               : min_abs * std::pow(max_abs / min_abs,
                                                    static_cast<double>(i) / (half - 1));
    grid.push_back(m * directions[i % directions.size()]);
  }
  return grid;
}

ConditionReport check_condition_A3(const StateDependentSymbol& sym,
                                   const std::vector<Vector>& x_grid) {
  require_nonempty(x_grid, "state");
  ConditionReport r;
  r.tag = ConditionTag::A3;
  r.grid = describe(x_grid, {});
  const Vector zero = Vector::Zero(sym.dim());
  double worst = -1.0;
  for (const auto& x : x_grid) {
    const Complex q = eval_symbol(sym, x, zero);
    if (std::abs(q) > worst) {
      worst = std::abs(q);
      r.witness = Witness{x, zero, q};
    }
  }
  r.pass = worst <= kA3Tolerance;
  return r;
}

ConditionReport check_condition_A2(const StateDependentSymbol& sym,
                                   const std::vector<Vector>& x_grid,
                                   const std::vector<Vector>& xi_grid) {
  require_nonempty(x_grid, "state");
  require_nonempty(xi_grid, "frequency");
  ConditionReport r;
  r.tag = ConditionTag::A2;
  r.grid = describe(x_grid, xi_grid) + " (grid evidence, not a proof)";

  double top = 0.0;
  for (const auto& xi : xi_grid) top = std::max(top, xi.norm());
  // Grid magnitude closest to one decade below the top, in log scale.
  double lower = 0.0;
  for (const auto& xi : xi_grid) {
    const double m = xi.norm();
    if (m <= 0.0 || m >= top) continue;
    if (lower == 0.0 || std::abs(std::log(m * 10.0 / top)) < std::abs(std::log(lower * 10.0 / top))) {
      lower = m;
    }
  }

  double c_hat = -1.0;
  double top_ratio = -1.0;
  double lower_ratio = -1.0;
  Witness top_witness;
  for (const auto& x : x_grid) {
    for (const auto& xi : xi_grid) {
      const Complex q = eval_symbol(sym, x, xi);
      const double m = xi.norm();
      double ratio = std::abs(q) / (1.0 + m * m);
      if (!std::isfinite(ratio)) ratio = std::numeric_limits<double>::infinity();
      if (ratio > c_hat) {
        c_hat = ratio;
        r.witness = Witness{x, xi, q};
      }
      if (m == top && ratio > top_ratio) {
        top_ratio = ratio;
        top_witness = Witness{x, xi, q};
      }
      if (lower > 0.0 && m == lower) lower_ratio = std::max(lower_ratio, ratio);
    }
  }
  r.estimated_constant = c_hat;
  if (!std::isfinite(c_hat)) {
    r.pass = false;
    r.note = "ratio |q| / (1 + |xi|^2) is not finite";
    return r;
  }
  if (lower > 0.0) {
    const double decades = std::log10(top / lower);
    const double growth = lower_ratio > 0.0
                              ? std::pow(top_ratio / lower_ratio, 1.0 / decades) - 1.0
                              : (top_ratio > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    std::ostringstream os;
    os << "ratio growth over top decade: " << growth * 100.0 << "% per decade";
    r.note = os.str();
    if (growth > kA2GrowthPerDecade) {
      r.pass = false;
      r.witness = top_witness;
    }
  } else {
    r.note = "grid has a single magnitude; growth not assessed";
  }
  return r;
}

std::vector<ConditionReport> check_structural(const StateDependentSymbol& sym,
                                              const std::vector<Vector>& x_grid,
                                              const std::vector<Vector>& xi_grid) {
  require_nonempty(x_grid, "state");
  require_nonempty(xi_grid, "frequency");
  const std::string grid = describe(x_grid, xi_grid);

  ConditionReport real;
  real.tag = ConditionTag::RealPartNonneg;
  ConditionReport conj;
  conj.tag = ConditionTag::ConjSymmetry;
  ConditionReport cont;
  cont.tag = ConditionTag::ContinuityInX;
  real.grid = conj.grid = cont.grid = grid;

  double min_real = std::numeric_limits<double>::infinity();
  double worst_conj = -1.0;
  for (const auto& x : x_grid) {
    for (const auto& xi : xi_grid) {
      const Complex q = eval_symbol(sym, x, xi);
      if (q.real() < min_real) {
        min_real = q.real();
        real.witness = Witness{x, xi, q};
      }
      const Complex q_minus = eval_symbol(sym, x, Vector(-xi));
      const double gap = std::abs(q_minus - std::conj(q)) / std::max(1.0, std::abs(q));
      if (gap > worst_conj) {
        worst_conj = gap;
        conj.witness = Witness{x, xi, q_minus - std::conj(q)};
      }
    }
  }
  real.pass = min_real >= -kRealPartTolerance;
  conj.pass = worst_conj <= kConjTolerance;
  conj.note = "gap |q(x,-xi) - conj q(x,xi)| scaled by max(1, |q|)";

  // A continuous map shrinks its increments as the probe step shrinks; a jump does not.
  const double base_step = 0.1 * min_spacing(x_grid);
  double worst = 0.0;
  for (const auto& x : x_grid) {
    for (const auto& xi : xi_grid) {
      const Complex q = eval_symbol(sym, x, xi);
      const double scale = 1.0 + std::abs(q);
      for (int k = 0; k < sym.dim(); ++k) {
        for (const double dir : {1.0, -1.0}) {
          const auto probe = [&](double step) {
            Vector y = x;
            y[k] += dir * step;
            return std::abs(eval_symbol(sym, y, xi) - q) / scale;
          };
          const double coarse = probe(base_step);
          const double fine = probe(base_step * 1e-2);
          const double badness = fine > 1e-6 && fine > 0.5 * coarse ? fine : 0.0;
          if (badness > worst) {
            worst = badness;
            cont.witness = Witness{x, xi, q};
          }
        }
      }
    }
  }
  cont.pass = worst == 0.0;
  if (cont.pass) cont.witness = real.witness;
  cont.note = "finite-difference probe, steps " + std::to_string(base_step) + " and " +
              std::to_string(base_step * 1e-2);
  return {real, conj, cont};
}

ConditionReport check_closed_form(const StateDependentSymbol& sym,
                                  const std::vector<Vector>& x_grid,
                                  const std::vector<Vector>& xi_grid, double rel_tol) {
  require_nonempty(x_grid, "state");
  require_nonempty(xi_grid, "frequency");
  ConditionReport r;
  r.tag = ConditionTag::ClosedForm;
  r.grid = describe(x_grid, xi_grid);
  if (!sym.has_closed_form()) {
    r.note = "no closed form to compare";
    r.witness = Witness{x_grid.front(), xi_grid.front(), {}};
    return r;
  }
  // The triplet of a Lévy process does not move with x; one state covers the grid.
  const std::vector<Vector> states =
      sym.state_independent() ? std::vector<Vector>{x_grid.front()} : x_grid;
  double worst = -1.0;
  for (const auto& x : states) {
    for (const auto& xi : xi_grid) {
      const Complex closed = sym.closed_form(x, xi);
      const Complex quad = eval_symbol_quadrature(sym, x, xi);
      const double err = std::abs(closed - quad) / (1.0 + std::abs(closed));
      if (err > worst) {
        worst = err;
        r.witness = Witness{x, xi, closed - quad};
      }
    }
  }
  r.pass = worst <= rel_tol;
  std::ostringstream os;
  os << "max relative gap " << worst;
  r.note = os.str();
  return r;
}

}  // namespace feller
