#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "feller/rng.hpp"
#include "feller/sampler.hpp"
#include "feller/symbol.hpp"
#include "feller/types.hpp"

namespace feller {

/// Skeleton X(0), X(h), ..., X(Mh) of one Euler path.
struct Path {
  std::vector<double> times;
  Matrix states;  // (M + 1) x d
  double h = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  long n_steps() const { return static_cast<long>(times.size()) - 1; }
};

struct Ensemble {
  Matrix terminal;  // n_paths x d
  /// Full paths: all of them when they fit in the recording budget, otherwise
  /// those of the first reservoir_paths stream ids.
  std::vector<Path> paths;
  std::vector<std::uint64_t> stream_ids;
  bool all_paths_recorded = false;
  std::uint64_t seed = 0;
  double h = 0.0;
  long n_steps = 0;
  Vector x0;
};

struct EngineOptions {
  SamplerOptions sampler;
  /// Lattice step for sampler-cache keys. Absent: 0 (exact states) for symbols
  /// with a closed form, 1e-3 otherwise.
  std::optional<double> quantization;
  std::size_t cache_capacity = 1 << 16;
  std::size_t max_recorded_floats = 1000000;
  std::size_t reservoir_paths = 100;
  /// Worker threads for ensembles; 0 reads FELLER_THREADS, then the hardware.
  int threads = 0;
};

/// Fixed-step Euler scheme: each step adds an increment of the Lévy process
/// whose exponent is the symbol frozen at the current state.
///
/// The engine is safe to share between threads; its only mutable state is an
/// internally synchronized sampler cache.
class EulerEngine {
 public:
  /// Throws DomainError when the symbol has q(x, 0) != 0 on the state grid [-10, 10]^d.
  explicit EulerEngine(StateDependentSymbol sym, EngineOptions options = {});

  const StateDependentSymbol& symbol() const { return sym_; }
  const EngineOptions& options() const { return options_; }
  double quantization() const { return quantization_; }
  int threads() const;

  /// x + increment with characteristic function exp(-h q(x, .)).
  Vector step(const Vector& x, double h, RngStream& rng, long* jump_count = nullptr) const;

  /// n_steps >= 1 steps from x0. Errors carry path index rng.stream_id() and the step.
  Path simulate_path(const Vector& x0, double h, long n_steps, RngStream& rng) const;

  /// Path i uses RngStream(seed, i); the result does not depend on the thread count.
  Ensemble simulate_ensemble(const Vector& x0, double h, long n_steps, long n_paths,
                             std::uint64_t seed) const;

  /// The sampler used for a step of size h from x (cached when keyed).
  std::shared_ptr<const IncrementSampler> sampler_at(const Vector& x, double h) const;

 private:
  struct Key {
    std::vector<std::int64_t> cells;
    double h;
    bool operator==(const Key& o) const { return h == o.h && cells == o.cells; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  bool cached() const { return sym_.state_independent() || quantization_ > 0.0; }

  StateDependentSymbol sym_;
  EngineOptions options_;
  double quantization_ = 0.0;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Key, std::shared_ptr<const IncrementSampler>, KeyHash> cache_;
};

Vector step(const StateDependentSymbol& sym, const Vector& x, double h, RngStream& rng);
Path simulate_path(const StateDependentSymbol& sym, const Vector& x0, double h, long n_steps,
                   RngStream& rng);
Ensemble simulate_ensemble(const StateDependentSymbol& sym, const Vector& x0, double h,
                           long n_steps, long n_paths, std::uint64_t seed);

}  // namespace feller
