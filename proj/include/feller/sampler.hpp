#pragma once

#include <optional>
#include <vector>

#include "feller/rng.hpp"
#include "feller/symbol.hpp"
#include "feller/types.hpp"

namespace feller {

/// Symmetric alpha-stable variate with characteristic function exp(-h scale^alpha |xi|^alpha)
/// (Chambers-Mallows-Stuck; alpha = 1 is drawn as a Cauchy variate).
double sample_stable(double alpha, double scale, double h, RngStream& rng);

enum class SamplerStrategy { Exact, TruncatedJump };
enum class SmallJumpPolicy { Auto, Gaussian, Drop };

const char* to_string(SamplerStrategy s);
const char* to_string(SmallJumpPolicy p);

struct SamplerOptions {
  /// Jump-size threshold for generic densities; chosen automatically when absent.
  std::optional<double> epsilon;
  SmallJumpPolicy small_jumps = SmallJumpPolicy::Auto;
  /// Auto policy uses the Gaussian substitute when sqrt(tr Sigma(eps)) / eps reaches this.
  double gaussian_threshold = 0.3;
  /// Automatic epsilon keeps h * lambda(eps) at or below this.
  double max_jumps_per_step = 50.0;
  /// Automatic epsilon is never smaller than needed to bring h tr Sigma(eps) below this.
  double small_jump_budget = 1e-8;
  /// build_sampler refuses when h * lambda(eps) exceeds this.
  double reject_expected_jumps = 1e7;
};

/// Tabulated law of the big jumps of a one-dimensional density, |t| > eps.
class BigJumpTable {
 public:
  BigJumpTable() = default;
  BigJumpTable(const LineLaw& law, double eps);

  double rate() const { return mass_[0] + mass_[1]; }
  double draw(RngStream& rng) const;
  /// P(|J| > r) under the normalized big-jump law, from the table.
  double survival(double r) const;

 private:
  double invert(int side, double target) const;

  double eps_ = 0.0;
  double mass_[2] = {0.0, 0.0};
  std::vector<double> log_r_[2];
  std::vector<double> tail_[2];  // int_{r_k}^inf n(side t) dt
  double tail_slope_[2] = {0.0, 0.0};
  bool bounded_[2] = {false, false};
};

/// Precomputed sampler for increments of the Lévy process with a fixed triplet.
/// Immutable after construction; each thread must bring its own RngStream.
class IncrementSampler {
 public:
  int dim() const { return static_cast<int>(drift_.size()); }
  SamplerStrategy strategy() const { return strategy_; }

  /// Threshold on |y| for truncated generic components.
  std::optional<double> epsilon() const { return epsilon_; }
  /// lambda(eps) of the truncated generic components (0 when Exact).
  double big_jump_rate() const { return big_jump_rate_; }
  /// Compensation drift b(eps) of the truncated generic components.
  const Vector& compensation_drift() const { return generic_compensation_; }
  /// Sigma(eps) = int_{|y| <= eps} y y' N(dy) of the truncated components.
  const Matrix& small_jump_covariance() const { return small_cov_; }
  bool gaussian_small_jumps() const { return gaussian_small_; }
  /// Expected number of simulated jumps per unit time (all compound Poisson parts).
  double total_jump_rate() const;

  /// One increment over time h. When jump_count is given it receives the number
  /// of compound Poisson jumps drawn (atoms, normal jumps and big generic jumps).
  Vector sample(double h, RngStream& rng, long* jump_count = nullptr) const;

 private:
  friend IncrementSampler build_sampler(const LevyTriplet&, double, const SamplerOptions&);

  struct NormalComponent {
    Vector direction;
    NormalLaw law;
  };
  struct StableComponent {
    Vector direction;
    StableLaw law;
  };
  struct TruncatedComponent {
    Vector direction;
    BigJumpTable table;
  };

  SamplerStrategy strategy_ = SamplerStrategy::Exact;
  Vector drift_;         // l plus compensation of all uncompensated jump draws
  Matrix diffusion_factor_;
  bool has_diffusion_ = false;

  std::vector<Vector> atom_locations_;
  std::vector<double> atom_cumulative_;  // cumulative masses
  double atom_rate_ = 0.0;
  std::vector<NormalComponent> normals_;
  std::vector<StableComponent> stables_;
  std::vector<TruncatedComponent> truncated_;

  std::optional<double> epsilon_;
  double big_jump_rate_ = 0.0;
  Vector generic_compensation_;
  Matrix small_cov_;
  Matrix small_cov_factor_;
  bool gaussian_small_ = false;
};

/// Factor Q = L L' (Cholesky, falling back to a clipped eigendecomposition for
/// semidefinite Q). Throws SamplerError when Q has an eigenvalue below -1e-10.
Matrix factor_covariance(const Matrix& q);

/// Precompute a sampler for the triplet. h_hint sets the automatic epsilon.
/// Throws SamplerError for killing != 0, an invalid diffusion, or unmanageable jump rates.
IncrementSampler build_sampler(const LevyTriplet& triplet, double h_hint,
                               const SamplerOptions& options = {});

/// sampler.sample(h, rng).
Vector sample_increment(const IncrementSampler& sampler, double h, RngStream& rng);

}  // namespace feller
