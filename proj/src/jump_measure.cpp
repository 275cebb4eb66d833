#include "feller/jump_measure.hpp"

#include <cmath>
#include <numeric>

#include "feller/errors.hpp"
#include "feller/quadrature.hpp"

namespace feller {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

// E[J^k ; a < J <= b] for J ~ N(m, s^2), k in {0, 1, 2}.
double normal_partial_moment(const NormalLaw& law, int k, double a, double b) {
  const double m = law.mean;
  const double s = law.stddev;
  const double za = (a - m) / s;
  const double zb = (b - m) / s;
  const double p = std_normal_cdf(zb) - std_normal_cdf(za);
  const double pa = std::isfinite(za) ? std_normal_pdf(za) : 0.0;
  const double pb = std::isfinite(zb) ? std_normal_pdf(zb) : 0.0;
  const double ez = pa - pb;
  if (k == 0) return p;
  if (k == 1) return m * p + s * ez;
  const double za_pa = std::isfinite(za) ? za * pa : 0.0;
  const double zb_pb = std::isfinite(zb) ? zb * pb : 0.0;
  const double ez2 = p + za_pa - zb_pb;
  return m * m * p + 2.0 * m * s * ez + s * s * ez2;
}

GenericHints hints_for(const LineLaw& law) {
  return std::visit(
      [](const auto& l) -> GenericHints {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, NormalLaw>) {
          return GenericHints{-1.0, std::abs(l.mean) + 40.0 * l.stddev};
        } else if constexpr (std::is_same_v<T, StableLaw>) {
          return GenericHints{l.alpha, kInf};
        } else {
          return l.hints;
        }
      },
      law);
}

quadrature::Density density_of(const LineLaw& law) {
  return [&law](double t) { return line_density(law, t); };
}

}  // namespace

const char* to_string(JumpKind kind) {
  switch (kind) {
    case JumpKind::None:
      return "None";
    case JumpKind::CompoundPoisson:
      return "CompoundPoisson";
    case JumpKind::SymmetricStable:
      return "SymmetricStable";
    case JumpKind::Generic:
      return "Generic";
  }
  return "?";
}

double stable_density_constant(double alpha) {
  return std::tgamma(1.0 + alpha) * std::sin(kPi * alpha / 2.0) / kPi;
}

double line_density(const LineLaw& law, double t) {
  if (t == 0.0) return 0.0;
  return std::visit(
      [t](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, NormalLaw>) {
          return l.rate * std_normal_pdf((t - l.mean) / l.stddev) / l.stddev;
        } else if constexpr (std::is_same_v<T, StableLaw>) {
          return stable_density_constant(l.alpha) * std::pow(l.scale, l.alpha) *
                 std::pow(std::abs(t), -1.0 - l.alpha);
        } else {
          return l.density(t);
        }
      },
      law);
}

JumpMeasure JumpMeasure::none(int dim) {
  if (dim < 1) throw DimensionError("jump measure dimension must be >= 1");
  return JumpMeasure(dim, JumpKind::None);
}

JumpMeasure JumpMeasure::compound_poisson(double rate, std::vector<Vector> atoms,
                                          std::vector<double> probs) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("compound Poisson rate must be positive and finite");
  }
  if (atoms.empty() || atoms.size() != probs.size()) {
    throw DomainError("compound Poisson jump law needs matching atoms and probabilities");
  }
  const auto dim = static_cast<int>(atoms.front().size());
  if (dim < 1) throw DimensionError("jump atoms must have dimension >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].size() != dim) throw DimensionError("jump atoms differ in dimension");
    if (!(probs[i] >= 0.0)) throw DomainError("jump probabilities must be nonnegative");
    if (probs[i] > 0.0 && atoms[i].norm() == 0.0) {
      throw DomainError("jump law must not charge the origin");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("jump probabilities must sum to 1");
  }
  JumpMeasure m(dim, JumpKind::CompoundPoisson);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (probs[i] > 0.0) m.atoms_.push_back(Atom{std::move(atoms[i]), rate * probs[i]});
  }
  return m;
}

JumpMeasure JumpMeasure::compound_poisson_point(double rate, Vector location) {
  return compound_poisson(rate, {std::move(location)}, {1.0});
}

JumpMeasure JumpMeasure::compound_poisson_normal(double rate, double mean, double stddev) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("compound Poisson rate must be positive and finite");
  }
  if (!(stddev > 0.0) || !std::isfinite(mean)) {
    throw DomainError("normal jump law needs a finite mean and positive stddev");
  }
  JumpMeasure m(1, JumpKind::CompoundPoisson);
  m.lines_.push_back(LineComponent{Vector::Ones(1), NormalLaw{rate, mean, stddev}});
  return m;
}

JumpMeasure JumpMeasure::symmetric_stable(double alpha, double scale, int dim) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("stable index must lie strictly between 0 and 2");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("stable scale must be positive");
  if (dim < 1) throw DimensionError("jump measure dimension must be >= 1");
  JumpMeasure m(dim, JumpKind::SymmetricStable);
  for (int k = 0; k < dim; ++k) {
    m.lines_.push_back(LineComponent{Vector::Unit(dim, k), StableLaw{alpha, scale}});
  }
  return m;
}

JumpMeasure JumpMeasure::generic(std::function<double(double)> density, GenericHints hints) {
  if (!density) throw DomainError("generic Lévy density is empty");
  if (hints.activity_index && !(*hints.activity_index < 2.0)) {
    throw DomainError("activity index must be below 2");
  }
  for (int e = -8; e <= 8; ++e) {
    for (const double mantissa : {1.0, 2.5, 5.0}) {
      const double t = mantissa * std::pow(10.0, e);
      for (const double y : {t, -t}) {
        const double v = density(y);
        if (!std::isfinite(v) || v < 0.0) {
          throw DomainError("generic Lévy density must be finite and nonnegative away from 0");
        }
      }
    }
  }
  GenericLaw law{std::move(density), hints};
  try {
    const auto g = [&law](double t) { return law.density(t); };
    for (const int side : {+1, -1}) {
      const double outer = quadrature::tail(g, 1.0, side, hints);
      const double inner = quadrature::moment(g, 2, 0.0, 1.0, side, hints);
      if (!std::isfinite(outer) || !std::isfinite(inner)) {
        throw DomainError("generic Lévy density fails the (|y|^2 ^ 1) integrability test");
      }
    }
  } catch (const QuadratureError& e) {
    throw DomainError(std::string("generic Lévy density is not a Lévy measure: ") + e.what());
  }
  JumpMeasure m(1, JumpKind::Generic);
  m.lines_.push_back(LineComponent{Vector::Ones(1), std::move(law)});
  return m;
}

JumpMeasure JumpMeasure::pushforward(const Matrix& map) const {
  if (map.cols() != dim_) {
    throw DimensionError("pushforward map has " + std::to_string(map.cols()) +
                         " columns, measure dimension is " + std::to_string(dim_));
  }
  JumpMeasure out(static_cast<int>(map.rows()), kind_);
  for (const auto& a : atoms_) {
    Vector loc = map * a.location;
    if (loc.norm() > 0.0) out.atoms_.push_back(Atom{std::move(loc), a.mass});
  }
  for (const auto& l : lines_) {
    Vector dir = map * l.direction;
    if (dir.norm() > 0.0) out.lines_.push_back(LineComponent{std::move(dir), l.law});
  }
  return out;
}

bool JumpMeasure::has_generic() const {
  for (const auto& l : lines_) {
    if (std::holds_alternative<GenericLaw>(l.law)) return true;
  }
  return false;
}

bool JumpMeasure::finite_activity() const {
  for (const auto& l : lines_) {
    if (!std::holds_alternative<NormalLaw>(l.law)) return false;
  }
  return true;
}

double line_tail_mass(const LineLaw& law, double radius) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, NormalLaw>) {
          return l.rate * (1.0 - normal_partial_moment(l, 0, -radius, radius));
        } else if constexpr (std::is_same_v<T, StableLaw>) {
          if (radius == 0.0) return kInf;
          return 2.0 * stable_density_constant(l.alpha) * std::pow(l.scale, l.alpha) *
                 std::pow(radius, -l.alpha) / l.alpha;
        } else {
          if (radius == 0.0) return kInf;
          const auto g = density_of(law);
          return quadrature::tail(g, radius, +1, l.hints) +
                 quadrature::tail(g, radius, -1, l.hints);
        }
      },
      law);
}

double line_truncated_mean(const LineLaw& law, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, NormalLaw>) {
          return l.rate * (normal_partial_moment(l, 1, lo, hi) +
                           normal_partial_moment(l, 1, -hi, -lo));
        } else if constexpr (std::is_same_v<T, StableLaw>) {
          return 0.0;
        } else {
          const auto g = density_of(law);
          return quadrature::moment(g, 1, lo, hi, +1, l.hints) -
                 quadrature::moment(g, 1, lo, hi, -1, l.hints);
        }
      },
      law);
}

double line_second_moment(const LineLaw& law, double radius) {
  if (!(radius > 0.0)) return 0.0;
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, NormalLaw>) {
          return l.rate * normal_partial_moment(l, 2, -radius, radius);
        } else if constexpr (std::is_same_v<T, StableLaw>) {
          if (!std::isfinite(radius)) return kInf;
          return 2.0 * stable_density_constant(l.alpha) * std::pow(l.scale, l.alpha) *
                 std::pow(radius, 2.0 - l.alpha) / (2.0 - l.alpha);
        } else {
          const auto g = density_of(law);
          return quadrature::moment(g, 2, 0.0, radius, +1, l.hints) +
                 quadrature::moment(g, 2, 0.0, radius, -1, l.hints);
        }
      },
      law);
}

double tail_mass(const JumpMeasure& m, double radius) {
  double total = 0.0;
  for (const auto& a : m.atoms()) {
    if (a.location.norm() > radius) total += a.mass;
  }
  for (const auto& l : m.lines()) total += line_tail_mass(l.law, radius / l.direction.norm());
  return total;
}

Vector truncated_mean(const JumpMeasure& m, double lo, double hi) {
  Vector out = Vector::Zero(m.dim());
  for (const auto& a : m.atoms()) {
    const double r = a.location.norm();
    if (r > lo && r <= hi) out += a.mass * a.location;
  }
  for (const auto& l : m.lines()) {
    const double nv = l.direction.norm();
    out += l.direction * line_truncated_mean(l.law, lo / nv, hi / nv);
  }
  return out;
}

Matrix truncated_second_moment(const JumpMeasure& m, double radius) {
  Matrix out = Matrix::Zero(m.dim(), m.dim());
  for (const auto& a : m.atoms()) {
    if (a.location.norm() <= radius) out += a.mass * a.location * a.location.transpose();
  }
  for (const auto& l : m.lines()) {
    const double nv = l.direction.norm();
    out += l.direction * l.direction.transpose() * line_second_moment(l.law, radius / nv);
  }
  return out;
}

namespace {

Complex atoms_exponent(const JumpMeasure& m, const Vector& xi) {
  Complex total{0.0, 0.0};
  const Complex i{0.0, 1.0};
  for (const auto& a : m.atoms()) {
    const double u = xi.dot(a.location);
    const double comp = a.location.norm() <= 1.0 ? u : 0.0;
    total -= a.mass * (std::exp(i * u) - 1.0 - i * comp);
  }
  return total;
}

}  // namespace

std::optional<Complex> jump_exponent_closed_form(const JumpMeasure& m, const Vector& xi) {
  if (xi.size() != m.dim()) throw DimensionError("frequency dimension mismatch");
  Complex total = atoms_exponent(m, xi);
  const Complex i{0.0, 1.0};
  for (const auto& l : m.lines()) {
    const double w = xi.dot(l.direction);
    const double cutoff = 1.0 / l.direction.norm();
    if (const auto* n = std::get_if<NormalLaw>(&l.law)) {
      const Complex cf = std::exp(Complex{-0.5 * n->stddev * n->stddev * w * w, n->mean * w});
      total += n->rate * (1.0 - cf) + i * w * line_truncated_mean(l.law, 0.0, cutoff);
    } else if (const auto* s = std::get_if<StableLaw>(&l.law)) {
      total += std::pow(s->scale, s->alpha) * std::pow(std::abs(w), s->alpha);
    } else {
      return std::nullopt;
    }
  }
  return total;
}

Complex jump_exponent_quadrature(const JumpMeasure& m, const Vector& xi) {
  if (xi.size() != m.dim()) throw DimensionError("frequency dimension mismatch");
  Complex total = atoms_exponent(m, xi);
  for (const auto& l : m.lines()) {
    const double w = xi.dot(l.direction);
    const double cutoff = 1.0 / l.direction.norm();
    total -= quadrature::levy_khinchine(density_of(l.law), w, cutoff, hints_for(l.law));
  }
  return total;
}

}  // namespace feller
