#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "feller/types.hpp"

namespace feller {

/// Which parametric family a jump measure came from. Survives pushforward.
enum class JumpKind { None, CompoundPoisson, SymmetricStable, Generic };

const char* to_string(JumpKind kind);

/// Integrability hints for a user-supplied Lévy density.
struct GenericHints {
  /// Blumenthal-Getoor type index beta with n(t) ~ |t|^{-1-beta} near the origin.
  /// Estimated from the density itself when absent.
  std::optional<double> activity_index;
  /// The density vanishes for |t| > support_radius.
  double support_radius = std::numeric_limits<double>::infinity();
};

/// Normal jump law scaled by an intensity: rate * N(mean, stddev^2) on the line.
struct NormalLaw {
  double rate;
  double mean;
  double stddev;
};

/// Symmetric alpha-stable Lévy measure with density c_alpha scale^alpha |t|^{-1-alpha}.
struct StableLaw {
  double alpha;
  double scale;
};

/// Arbitrary Lévy density on the real line (excluding 0).
struct GenericLaw {
  std::function<double(double)> density;
  GenericHints hints;
};

using LineLaw = std::variant<NormalLaw, StableLaw, GenericLaw>;

/// One-dimensional measure carried along a direction: the image of `law` under t -> t * direction.
struct LineComponent {
  Vector direction;
  LineLaw law;
};

/// Point mass of size `mass` (jumps per unit time) at `location`.
struct Atom {
  Vector location;
  double mass;
};

/// Lévy measure on R^d \ {0}, stored as a finite sum of atoms and line components.
///
/// Every built-in family has this form and the form is closed under linear
/// pushforward y -> F y, which is what driving an SDE through a matrix does.
/// Construction validates the invariants of each family; instances are immutable.
class JumpMeasure {
 public:
  static JumpMeasure none(int dim);

  /// rate * (sum_i probs[i] delta_{atoms[i]}); probabilities must sum to 1 and atoms be nonzero.
  static JumpMeasure compound_poisson(double rate, std::vector<Vector> atoms,
                                      std::vector<double> probs);
  static JumpMeasure compound_poisson_point(double rate, Vector location);
  /// One-dimensional compound Poisson with N(mean, stddev^2) jumps.
  static JumpMeasure compound_poisson_normal(double rate, double mean, double stddev);

  /// Independent symmetric alpha-stable jumps along each coordinate axis.
  static JumpMeasure symmetric_stable(double alpha, double scale, int dim);

  /// One-dimensional measure with the given density. Nonnegativity and
  /// integrability of (t^2 ^ 1) are verified numerically here.
  static JumpMeasure generic(std::function<double(double)> density, GenericHints hints = {});

  /// Image measure under y -> map * y; map is (d_out x dim()).
  JumpMeasure pushforward(const Matrix& map) const;

  int dim() const { return dim_; }
  JumpKind kind() const { return kind_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<LineComponent>& lines() const { return lines_; }

  bool empty() const { return atoms_.empty() && lines_.empty(); }
  /// True when some line carries a generic density (no exact sampler).
  bool has_generic() const;
  /// True when the total mass is finite.
  bool finite_activity() const;

 private:
  JumpMeasure(int dim, JumpKind kind) : dim_(dim), kind_(kind) {}

  int dim_;
  JumpKind kind_;
  std::vector<Atom> atoms_;
  std::vector<LineComponent> lines_;
};

/// c_alpha such that 2 c_alpha int_0^inf (1 - cos t) t^{-1-alpha} dt = 1.
double stable_density_constant(double alpha);

/// Density of a line law at t (NormalLaw includes its rate).
double line_density(const LineLaw& law, double t);

/// N({|y| > radius}); infinite for infinite-activity measures at radius 0.
double tail_mass(const JumpMeasure& m, double radius);

/// int_{lo < |y| <= hi} y N(dy).
Vector truncated_mean(const JumpMeasure& m, double lo, double hi);

/// int_{|y| <= radius} y y' N(dy).
Matrix truncated_second_moment(const JumpMeasure& m, double radius);

/// One-dimensional versions of the three queries for a single line law.
double line_tail_mass(const LineLaw& law, double radius);
double line_truncated_mean(const LineLaw& law, double lo, double hi);
double line_second_moment(const LineLaw& law, double radius);

/// Jump part of the Lévy-Khinchine exponent,
///   -int (e^{i xi'y} - 1 - i xi'y 1_{|y|<=1}) N(dy),
/// from closed forms. Empty when a component has no closed form (Generic).
std::optional<Complex> jump_exponent_closed_form(const JumpMeasure& m, const Vector& xi);

/// The same quantity by numerical integration of every line density. Atoms are summed exactly.
Complex jump_exponent_quadrature(const JumpMeasure& m, const Vector& xi);

}  // namespace feller
