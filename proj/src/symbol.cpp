#include "feller/symbol.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "feller/errors.hpp"

namespace feller {
namespace {


void require_dim(const Vector& v, int dim, const char* what) {
  if (v.size() != dim) {
    throw DimensionError(std::string(what) + " has dimension " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim));
  }
}

Complex local_part(const LevyTriplet& t, const Vector& xi) {
  return Complex{t.killing + 0.5 * xi.dot(t.diffusion * xi), -t.drift.dot(xi)};
}

}  // namespace

void validate_triplet(const LevyTriplet& t) {
  const auto d = t.drift.size();
  if (d < 1) throw DimensionError("triplet dimension must be >= 1");
  if (t.diffusion.rows() != d || t.diffusion.cols() != d) {
    throw DimensionError("diffusion matrix must be d x d");
  }
  if (t.jumps.dim() != d) throw DimensionError("jump measure dimension differs from drift");
  if (!t.drift.allFinite() || !t.diffusion.allFinite()) {
    throw DomainError("triplet has non-finite drift or diffusion");
  }
  const double asym = (t.diffusion - t.diffusion.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, t.diffusion.cwiseAbs().maxCoeff())) {
    throw DomainError("diffusion matrix is not symmetric");
  }
  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(t.diffusion, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw DomainError("diffusion matrix is not positive semidefinite");
    }
  }
  if (!(t.killing >= 0.0) || !std::isfinite(t.killing)) {
    throw DomainError("killing rate must be finite and nonnegative");
  }
}

LevyTriplet make_triplet(Vector drift, Matrix diffusion, JumpMeasure jumps, double killing) {
  LevyTriplet t{std::move(drift), std::move(diffusion), std::move(jumps), killing};
  validate_triplet(t);
  return t;
}

const char* to_string(SymbolFamily family) {
  switch (family) {
    case SymbolFamily::Brownian:
      return "Brownian";
    case SymbolFamily::StableLike:
      return "StableLike";
    case SymbolFamily::LevyConstant:
      return "LevyConstant";
    case SymbolFamily::SdeDriven:
      return "SdeDriven";
    case SymbolFamily::Custom:
      return "Custom";
  }
  return "?";
}

StateDependentSymbol::StateDependentSymbol(int dim, TripletFn triplet_at,
                                           std::optional<SymbolFn> closed_form,
                                           SymbolFamily family, std::string name,
                                           ParameterRecord params)
    : dim_(dim),
      triplet_at_(std::move(triplet_at)),
      closed_form_(std::move(closed_form)),
      family_(family),
      name_(std::move(name)),
      params_(std::move(params)) {
  if (dim_ < 1) throw DimensionError("symbol dimension must be >= 1");
  if (!triplet_at_) throw DomainError("symbol needs a triplet map");
}

LevyTriplet StateDependentSymbol::triplet_at(const Vector& x) const {
  require_dim(x, dim_, "state");
  LevyTriplet t = triplet_at_(x);
  if (t.dim() != dim_) throw DimensionError("triplet map returned the wrong dimension");
  return t;
}

Complex StateDependentSymbol::closed_form(const Vector& x, const Vector& xi) const {
  if (!closed_form_) throw DomainError("symbol '" + name_ + "' has no closed form");
  return (*closed_form_)(x, xi);
}

Complex levy_khinchine_exponent(const LevyTriplet& t, const Vector& xi) {
  require_dim(xi, t.dim(), "frequency");
  if (auto jump = jump_exponent_closed_form(t.jumps, xi)) return local_part(t, xi) + *jump;
  return local_part(t, xi) + jump_exponent_quadrature(t.jumps, xi);
}

Complex levy_khinchine_quadrature(const LevyTriplet& t, const Vector& xi) {
  require_dim(xi, t.dim(), "frequency");
  return local_part(t, xi) + jump_exponent_quadrature(t.jumps, xi);
}

Complex eval_symbol(const StateDependentSymbol& sym, const Vector& x, const Vector& xi) {
  require_dim(x, sym.dim(), "state");
  require_dim(xi, sym.dim(), "frequency");
  if (sym.has_closed_form()) return sym.closed_form(x, xi);
  return levy_khinchine_exponent(sym.triplet_at(x), xi);
}

Complex eval_symbol_quadrature(const StateDependentSymbol& sym, const Vector& x,
                               const Vector& xi) {
  require_dim(x, sym.dim(), "state");
  require_dim(xi, sym.dim(), "frequency");
  return levy_khinchine_quadrature(sym.triplet_at(x), xi);
}

StateDependentSymbol brownian(int dim) { return brownian(Matrix::Identity(dim, dim)); }

StateDependentSymbol brownian(const Matrix& covariance) {
  const auto d = static_cast<int>(covariance.rows());
  LevyTriplet t = make_triplet(Vector::Zero(d), covariance, JumpMeasure::none(d));
  SymbolFn q = [covariance](const Vector&, const Vector& xi) {
    return Complex{0.5 * xi.dot(covariance * xi), 0.0};
  };
  return StateDependentSymbol(
      d, [t](const Vector&) { return t; }, std::move(q), SymbolFamily::Brownian, "brownian",
      {{"dim", d}});
}

StateDependentSymbol levy_constant(LevyTriplet triplet, std::string name) {
  validate_triplet(triplet);
  const int d = triplet.dim();
  std::optional<SymbolFn> q;
  if (jump_exponent_closed_form(triplet.jumps, Vector::Zero(d))) {
    q = [triplet](const Vector&, const Vector& xi) {
      return levy_khinchine_exponent(triplet, xi);
    };
  }
  return StateDependentSymbol(
      d, [triplet](const Vector&) { return triplet; }, std::move(q), SymbolFamily::LevyConstant,
      std::move(name), {{"dim", d}});
}

StateDependentSymbol symmetric_stable(double alpha, double scale, int dim) {
  auto t = make_triplet(Vector::Zero(dim), Matrix::Zero(dim, dim),
                        JumpMeasure::symmetric_stable(alpha, scale, dim));
  SymbolFn q = [alpha, scale](const Vector&, const Vector& xi) {
    return Complex{std::pow(scale, alpha) * xi.array().abs().pow(alpha).sum(), 0.0};
  };
  return StateDependentSymbol(
      dim, [t](const Vector&) { return t; }, std::move(q), SymbolFamily::LevyConstant,
      "symmetric_stable", {{"alpha", alpha}, {"scale", scale}, {"dim", dim}});
}

StateDependentSymbol cauchy() {
  auto sym = symmetric_stable(1.0, 1.0, 1);
  return StateDependentSymbol(
      1, [sym](const Vector& x) { return sym.triplet_at(x); },
      [](const Vector&, const Vector& xi) { return Complex{std::abs(xi[0]), 0.0}; },
      SymbolFamily::LevyConstant, "cauchy", {{"alpha", 1.0}, {"scale", 1.0}});
}

StateDependentSymbol pure_drift(Vector drift) {
  const auto d = static_cast<int>(drift.size());
  auto t = make_triplet(drift, Matrix::Zero(d, d), JumpMeasure::none(d));
  return levy_constant(std::move(t), "drift");
}

StateDependentSymbol compound_poisson(JumpMeasure jumps) {
  const int d = jumps.dim();
  Vector drift = truncated_mean(jumps, 0.0, 1.0);
  const double rate = tail_mass(jumps, 0.0);
  auto t = make_triplet(std::move(drift), Matrix::Zero(d, d), std::move(jumps));
  auto sym = levy_constant(std::move(t), "compound_poisson");
  return StateDependentSymbol(
      d, [sym](const Vector& x) { return sym.triplet_at(x); },
      [sym](const Vector& x, const Vector& xi) { return sym.closed_form(x, xi); },
      SymbolFamily::LevyConstant, "compound_poisson", {{"rate", rate}, {"dim", d}});
}

StateDependentSymbol compound_poisson_point(double rate, Vector location) {
  return compound_poisson(JumpMeasure::compound_poisson_point(rate, std::move(location)));
}

StateDependentSymbol compound_poisson_normal(double rate, double mean, double stddev) {
  return compound_poisson(JumpMeasure::compound_poisson_normal(rate, mean, stddev));
}

double ClampedLinearIndex::operator()(double x) const {
  return std::max(std::min(offset + slope * x, upper), lower);
}

ClampedLinearIndex demo_stable_index() { return ClampedLinearIndex{0.9, 1.0, 0.9, 1.9}; }

StateDependentSymbol stable_like(IndexFn alpha, double scale, std::string name,
                                 ParameterRecord params) {
  if (!(scale > 0.0)) throw DomainError("stable-like scale must be positive");
  const auto index_at = [alpha](const Vector& x) {
    const double a = alpha(x[0]);
    if (!(a > 0.0 && a < 2.0)) {
      throw DomainError("stable-like index " + std::to_string(a) + " at x = " +
                        std::to_string(x[0]) + " is outside (0, 2)");
    }
    return a;
  };
  TripletFn triplet = [index_at, scale](const Vector& x) {
    return LevyTriplet{Vector::Zero(1), Matrix::Zero(1, 1),
                       JumpMeasure::symmetric_stable(index_at(x), scale, 1), 0.0};
  };
  SymbolFn q = [index_at, scale](const Vector& x, const Vector& xi) {
    const double a = index_at(x);
    return Complex{std::pow(scale, a) * std::pow(std::abs(xi[0]), a), 0.0};
  };
  params.emplace("scale", scale);
  return StateDependentSymbol(1, std::move(triplet), std::move(q), SymbolFamily::StableLike,
                              std::move(name), std::move(params));
}

StateDependentSymbol stable_like_demo() {
  const auto idx = demo_stable_index();
  return stable_like(idx, 1.0, "stable_like",
                     {{"offset", idx.offset},
                      {"slope", idx.slope},
                      {"alpha_min", idx.lower},
                      {"alpha_max", idx.upper}});
}

StateDependentSymbol symbol_from_sde(CoefficientFn f, const StateDependentSymbol& driver,
                                     int dim) {
  if (!driver.state_independent()) {
    throw DomainError("SDE driver must be a Lévy process (state-independent symbol)");
  }
  const int n = driver.dim();
  const LevyTriplet base = driver.triplet_at(Vector::Zero(n));
  const auto coefficient = [f, dim, n](const Vector& x) {
    Matrix m = f(x);
    if (m.rows() != dim || m.cols() != n) {
      throw DimensionError("SDE coefficient must be " + std::to_string(dim) + " x " +
                           std::to_string(n));
    }
    return m;
  };

  TripletFn triplet = [coefficient, base](const Vector& x) {
    const Matrix m = coefficient(x);
    // Changing the jump variable from y to m y moves the unit-ball cutoff; the
    // difference of compensators is absorbed into the drift.
    Vector drift = m * base.drift;
    for (const auto& a : base.jumps.atoms()) {
      const Vector image = m * a.location;
      const double inside_new = image.norm() <= 1.0 ? 1.0 : 0.0;
      const double inside_old = a.location.norm() <= 1.0 ? 1.0 : 0.0;
      drift += a.mass * (inside_new - inside_old) * image;
    }
    for (const auto& l : base.jumps.lines()) {
      const Vector image = m * l.direction;
      const double r_new = image.norm() > 0.0 ? 1.0 / image.norm() : 0.0;
      const double r_old = 1.0 / l.direction.norm();
      if (image.norm() == 0.0) continue;
      const double lo = std::min(r_new, r_old);
      const double hi = std::max(r_new, r_old);
      const double sign = r_new > r_old ? 1.0 : -1.0;
      drift += sign * line_truncated_mean(l.law, lo, hi) * image;
    }
    Matrix diffusion = m * base.diffusion * m.transpose();
    diffusion = 0.5 * (diffusion + diffusion.transpose());
    return LevyTriplet{std::move(drift), std::move(diffusion), base.jumps.pushforward(m),
                       base.killing};
  };
  SymbolFn q = [coefficient, driver, n](const Vector& x, const Vector& xi) {
    const Vector eta = coefficient(x).transpose() * xi;
    return eval_symbol(driver, Vector::Zero(n), eta);
  };
  return StateDependentSymbol(dim, std::move(triplet), std::move(q), SymbolFamily::SdeDriven,
                              "sde(" + driver.name() + ")", {{"dim", dim}, {"driver_dim", n}});
}

StateDependentSymbol closed_form_only(int dim, SymbolFn q, std::string name) {
  TripletFn triplet = [name](const Vector&) -> LevyTriplet {
    throw DomainError("symbol '" + name + "' has no Lévy triplet");
  };
  return StateDependentSymbol(dim, std::move(triplet), std::move(q), SymbolFamily::Custom, name);
}

StateDependentSymbol with_killing(const StateDependentSymbol& base, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("killing rate must be finite and nonnegative");
  }
  TripletFn triplet = [base, rate](const Vector& x) {
    LevyTriplet t = base.triplet_at(x);
    t.killing += rate;
    return t;
  };
  std::optional<SymbolFn> q;
  if (base.has_closed_form()) {
    q = [base, rate](const Vector& x, const Vector& xi) { return base.closed_form(x, xi) + rate; };
  }
  ParameterRecord params = base.params();
  params["killing"] = rate;
  return StateDependentSymbol(base.dim(), std::move(triplet), std::move(q), base.family(),
                              base.name(), std::move(params));
}

}  // namespace feller
