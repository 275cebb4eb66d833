#include "feller/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "feller/errors.hpp"
#include "feller/quadrature.hpp"

namespace feller {
namespace {

constexpr int kTablePointsPerDecade = 16;
constexpr double kTableDecades = 14.0;
constexpr double kEpsSearchLo = 1e-12;
constexpr double kEpsSearchHi = 1e12;

long draw_poisson(double mean, RngStream& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<long> dist(mean);
  return dist(rng);
}

// Smallest x in [lo, hi] (log scale) with pred(x) true, for pred monotone false -> true.
template <class Pred>
double log_bisect(double lo, double hi, const Pred& pred) {
  if (pred(lo)) return lo;
  if (!pred(hi)) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi / lo < 1.0 + 1e-10) break;
  }
  return hi;
}

}  // namespace

double sample_stable(double alpha, double scale, double h, RngStream& rng) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("stable index must lie strictly between 0 and 2");
  }
  if (!(scale > 0.0) || !(h > 0.0)) throw DomainError("stable scale and time step must be > 0");
  const double v = kPi * (rng.uniform() - 0.5);
  double x;
  if (alpha == 1.0) {
    x = std::tan(v);
  } else {
    const double w = rng.exponential();
    x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
        std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
  }
  return scale * std::pow(h, 1.0 / alpha) * x;
}

const char* to_string(SamplerStrategy s) {
  return s == SamplerStrategy::Exact ? "Exact" : "TruncatedJump";
}

const char* to_string(SmallJumpPolicy p) {
  switch (p) {
    case SmallJumpPolicy::Auto:
      return "auto";
    case SmallJumpPolicy::Gaussian:
      return "gaussian";
    case SmallJumpPolicy::Drop:
      return "drop";
  }
  return "?";
}

BigJumpTable::BigJumpTable(const LineLaw& law, double eps) : eps_(eps) {
  const auto* generic = std::get_if<GenericLaw>(&law);
  if (generic == nullptr) throw SamplerError("big-jump tables are built for generic densities");
  const auto& hints = generic->hints;
  const quadrature::Density density = generic->density;
  for (int s = 0; s < 2; ++s) {
    const int side = s == 0 ? 1 : -1;
    const double support = hints.support_radius;
    bounded_[s] = std::isfinite(support);
    if (eps >= support) continue;
    const double top = bounded_[s] ? support : eps * std::pow(10.0, kTableDecades);
    const int n =
        std::max(2, static_cast<int>(std::ceil(kTablePointsPerDecade * std::log10(top / eps))));
    std::vector<double> r(n + 1);
    for (int k = 0; k <= n; ++k) r[k] = eps * std::pow(top / eps, static_cast<double>(k) / n);
    r[n] = top;
    std::vector<double> t(n + 1);
    t[n] = bounded_[s] ? 0.0 : quadrature::tail(density, top, side, hints);
    for (int k = n - 1; k >= 0; --k) {
      t[k] = t[k + 1] + quadrature::moment(density, 0, r[k], r[k + 1], side, hints);
    }
    // Drop the underflowed end of the table, keeping one zero as a hard end.
    int last = n;
    while (last > 1 && t[last - 1] == 0.0) --last;
    if (t[last] == 0.0) bounded_[s] = true;
    r.resize(last + 1);
    t.resize(last + 1);
    mass_[s] = t[0];
    for (double v : r) log_r_[s].push_back(std::log(v));
    tail_[s] = std::move(t);
    if (!bounded_[s] && last >= 1 && tail_[s][last] > 0.0 && tail_[s][last - 1] > 0.0) {
      tail_slope_[s] = (std::log(tail_[s][last]) - std::log(tail_[s][last - 1])) /
                       (log_r_[s][last] - log_r_[s][last - 1]);
    }
  }
  if (!(rate() > 0.0) || !std::isfinite(rate())) {
    throw SamplerError("big-jump rate lambda(eps) must be positive and finite");
  }
}

double BigJumpTable::invert(int s, double target) const {
  const auto& t = tail_[s];
  const auto& lr = log_r_[s];
  const int last = static_cast<int>(t.size()) - 1;
  if (target < t[last]) {
    // Beyond the table: continue the last power law.
    if (tail_slope_[s] < 0.0) {
      return std::exp(lr[last] + (std::log(target) - std::log(t[last])) / tail_slope_[s]);
    }
    return std::exp(lr[last]);
  }
  // t is decreasing; find k with t[k] >= target > t[k + 1].
  int lo = 0;
  int hi = last;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (t[mid] >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (t[hi] > 0.0) {
    const double frac = (std::log(target) - std::log(t[lo])) / (std::log(t[hi]) - std::log(t[lo]));
    return std::exp(lr[lo] + frac * (lr[hi] - lr[lo]));
  }
  const double r_lo = std::exp(lr[lo]);
  const double r_hi = std::exp(lr[hi]);
  return r_lo + (t[lo] - target) / (t[lo] - t[hi]) * (r_hi - r_lo);
}

double BigJumpTable::draw(RngStream& rng) const {
  const double u = rng.uniform() * rate();
  if (u < mass_[0]) return invert(0, mass_[0] - u);
  return -invert(1, u - mass_[0]);
}

double BigJumpTable::survival(double r) const {
  if (r <= eps_) return 1.0;
  double total = 0.0;
  for (int s = 0; s < 2; ++s) {
    const auto& t = tail_[s];
    if (t.empty()) continue;
    const auto& lr = log_r_[s];
    const double x = std::log(r);
    const int last = static_cast<int>(t.size()) - 1;
    if (x >= lr[last]) {
      if (tail_slope_[s] < 0.0) total += t[last] * std::exp(tail_slope_[s] * (x - lr[last]));
      continue;
    }
    const auto it = std::upper_bound(lr.begin(), lr.end(), x);
    const int hi = static_cast<int>(it - lr.begin());
    const int lo = hi - 1;
    const double frac = (x - lr[lo]) / (lr[hi] - lr[lo]);
    if (t[hi] > 0.0) {
      total += std::exp(std::log(t[lo]) + frac * (std::log(t[hi]) - std::log(t[lo])));
    } else {
      const double r_lo = std::exp(lr[lo]);
      const double r_hi = std::exp(lr[hi]);
      total += t[lo] * (r_hi - r) / (r_hi - r_lo);
    }
  }
  return total / rate();
}

Matrix factor_covariance(const Matrix& q) {
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  Vector ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-10) throw SamplerError("covariance matrix is not positive semidefinite");
  ev = ev.cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

double IncrementSampler::total_jump_rate() const {
  double rate = atom_rate_ + big_jump_rate_;
  for (const auto& n : normals_) rate += n.law.rate;
  return rate;
}

IncrementSampler build_sampler(const LevyTriplet& triplet, double h_hint,
                               const SamplerOptions& options) {
  if (!(h_hint > 0.0)) throw DomainError("time step hint must be positive");
  if (triplet.killing != 0.0) {
    throw SamplerError("triplet has killing rate " + std::to_string(triplet.killing) +
                       "; the scheme requires q(x, 0) = 0");
  }
  try {
    validate_triplet(triplet);
  } catch (const DomainError& e) {
    throw SamplerError(e.what());
  }

  const int d = triplet.dim();
  IncrementSampler s;
  s.drift_ = triplet.drift;
  s.has_diffusion_ = triplet.diffusion.cwiseAbs().maxCoeff() > 0.0;
  if (s.has_diffusion_) s.diffusion_factor_ = factor_covariance(triplet.diffusion);
  s.generic_compensation_ = Vector::Zero(d);
  s.small_cov_ = Matrix::Zero(d, d);

  // Compound Poisson parts are drawn uncompensated; their small-jump compensator
  // moves into the drift.
  for (const auto& a : triplet.jumps.atoms()) {
    s.atom_rate_ += a.mass;
    s.atom_locations_.push_back(a.location);
    s.atom_cumulative_.push_back(s.atom_rate_);
    if (a.location.norm() <= 1.0) s.drift_ -= a.mass * a.location;
  }

  for (const auto& line : triplet.jumps.lines()) {
    const Vector& v = line.direction;
    const double nv = v.norm();
    if (const auto* n = std::get_if<NormalLaw>(&line.law)) {
      s.normals_.push_back({v, *n});
      s.drift_ -= v * line_truncated_mean(line.law, 0.0, 1.0 / nv);
    } else if (const auto* st = std::get_if<StableLaw>(&line.law)) {
      s.stables_.push_back({v, *st});
    } else {
      s.strategy_ = SamplerStrategy::TruncatedJump;
      const auto rate_at = [&](double eps) { return line_tail_mass(line.law, eps / nv); };
      const auto trace_at = [&](double eps) {
        return nv * nv * line_second_moment(line.law, eps / nv);
      };
      double eps;
      if (options.epsilon) {
        eps = *options.epsilon;
        if (!(eps > 0.0)) throw SamplerError("epsilon must be positive");
      } else {
        const double eps_cap = log_bisect(kEpsSearchLo, kEpsSearchHi, [&](double e) {
          return h_hint * rate_at(e) <= options.max_jumps_per_step;
        });
        // Largest eps whose small-jump variance is still within budget.
        const double eps_budget = log_bisect(kEpsSearchLo, kEpsSearchHi, [&](double e) {
          return h_hint * trace_at(e) > options.small_jump_budget;
        });
        eps = std::max(eps_cap, eps_budget);
      }
      const double lambda = rate_at(eps);
      if (!std::isfinite(lambda) || h_hint * lambda > options.reject_expected_jumps) {
        throw SamplerError("expected jumps per step h * lambda(eps) = " +
                           std::to_string(h_hint * lambda) + " is unmanageable");
      }
      const double eps_t = eps / nv;
      const double cutoff_t = 1.0 / nv;
      Vector b = eps_t < cutoff_t ? Vector(-v * line_truncated_mean(line.law, eps_t, cutoff_t))
                                  : Vector(v * line_truncated_mean(line.law, cutoff_t, eps_t));
      const Matrix sigma = v * v.transpose() * line_second_moment(line.law, eps_t);

      s.truncated_.push_back({v, BigJumpTable(line.law, eps_t)});
      s.epsilon_ = eps;
      s.big_jump_rate_ += lambda;
      s.generic_compensation_ += b;
      s.small_cov_ += sigma;
    }
  }

  if (s.strategy_ == SamplerStrategy::TruncatedJump) {
    const double ratio = std::sqrt(s.small_cov_.trace()) / *s.epsilon_;
    switch (options.small_jumps) {
      case SmallJumpPolicy::Auto:
        s.gaussian_small_ = ratio >= options.gaussian_threshold;
        break;
      case SmallJumpPolicy::Gaussian:
        s.gaussian_small_ = true;
        break;
      case SmallJumpPolicy::Drop:
        s.gaussian_small_ = false;
        break;
    }
    if (s.gaussian_small_) s.small_cov_factor_ = factor_covariance(s.small_cov_);
    s.drift_ += s.generic_compensation_;
  }
  return s;
}

Vector IncrementSampler::sample(double h, RngStream& rng, long* jump_count) const {
  const int d = dim();
  Vector x = h * drift_;
  const double sqrt_h = std::sqrt(h);
  if (has_diffusion_) {
    Vector z(d);
    for (int k = 0; k < d; ++k) z[k] = rng.normal();
    x.noalias() += sqrt_h * (diffusion_factor_ * z);
  }
  long count = 0;
  if (atom_rate_ > 0.0) {
    const long k = draw_poisson(h * atom_rate_, rng);
    for (long j = 0; j < k; ++j) {
      const double u = rng.uniform() * atom_rate_;
      auto it = std::upper_bound(atom_cumulative_.begin(), atom_cumulative_.end(), u);
      if (it == atom_cumulative_.end()) --it;
      x += atom_locations_[it - atom_cumulative_.begin()];
    }
    count += k;
  }
  for (const auto& n : normals_) {
    const long k = draw_poisson(h * n.law.rate, rng);
    for (long j = 0; j < k; ++j) x += n.direction * (n.law.mean + n.law.stddev * rng.normal());
    count += k;
  }
  for (const auto& st : stables_) {
    x += st.direction * sample_stable(st.law.alpha, st.law.scale, h, rng);
  }
  for (const auto& tr : truncated_) {
    const long k = draw_poisson(h * tr.table.rate(), rng);
    for (long j = 0; j < k; ++j) x += tr.direction * tr.table.draw(rng);
    count += k;
  }
  if (gaussian_small_) {
    Vector z(d);
    for (int k = 0; k < d; ++k) z[k] = rng.normal();
    x.noalias() += sqrt_h * (small_cov_factor_ * z);
  }
  if (jump_count != nullptr) *jump_count = count;
  return x;
}

Vector sample_increment(const IncrementSampler& sampler, double h, RngStream& rng) {
  if (!(h > 0.0)) throw DomainError("time step must be positive");
  return sampler.sample(h, rng);
}

}  // namespace feller
