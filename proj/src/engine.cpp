#include "feller/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "feller/conditions.hpp"
#include "feller/errors.hpp"

namespace feller {
namespace {

int env_threads() {
  const char* s = std::getenv("FELLER_THREADS");
  if (s == nullptr) return 0;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 1) return 0;
  return static_cast<int>(std::min<long>(v, 1024));
}

}  // namespace

std::size_t EulerEngine::KeyHash::operator()(const Key& k) const {
  std::uint64_t hsh = mix_seed(std::hash<double>{}(k.h));
  for (auto c : k.cells) hsh = mix_seed(hsh ^ static_cast<std::uint64_t>(c));
  return static_cast<std::size_t>(hsh);
}

EulerEngine::EulerEngine(StateDependentSymbol sym, EngineOptions options)
    : sym_(std::move(sym)), options_(std::move(options)) {
  quantization_ = options_.quantization.value_or(sym_.has_closed_form() ? 0.0 : 1e-3);
  if (!(quantization_ >= 0.0) || !std::isfinite(quantization_)) {
    throw DomainError("quantization step must be finite and >= 0");
  }
  if (options_.threads < 0) throw DomainError("thread count must be >= 0");
  const auto a3 = check_condition_A3(sym_, uniform_state_grid(-10.0, 10.0, sym_.dim()));
  if (!a3.pass) {
    std::ostringstream os;
    os << "symbol '" << sym_.name() << "' has q(x, 0) = " << a3.witness.value
       << " at x = " << a3.witness.x.transpose() << "; the scheme requires q(x, 0) = 0";
    throw DomainError(os.str());
  }
}

int EulerEngine::threads() const {
  int n = options_.threads > 0 ? options_.threads : env_threads();
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

std::shared_ptr<const IncrementSampler> EulerEngine::sampler_at(const Vector& x,
                                                                double h) const {
  if (!cached()) {
    return std::make_shared<const IncrementSampler>(
        build_sampler(sym_.triplet_at(x), h, options_.sampler));
  }
  Key key{{}, h};
  Vector frozen = x;
  if (!sym_.state_independent()) {
    key.cells.resize(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      key.cells[k] = std::llround(x[k] / quantization_);
      frozen[k] = static_cast<double>(key.cells[k]) * quantization_;
    }
  }
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto s = std::make_shared<const IncrementSampler>(
      build_sampler(sym_.triplet_at(frozen), h, options_.sampler));
  std::unique_lock lock(mutex_);
  if (cache_.size() < options_.cache_capacity) cache_.emplace(std::move(key), s);
  return s;
}

Vector EulerEngine::step(const Vector& x, double h, RngStream& rng, long* jump_count) const {
  if (x.size() != sym_.dim()) {
    throw DimensionError("state has dimension " + std::to_string(x.size()) + ", symbol has " +
                         std::to_string(sym_.dim()));
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("step size must be positive");
  Vector y = x + sampler_at(x, h)->sample(h, rng, jump_count);
  if (!y.allFinite()) throw SimulationError("non-finite state after increment", -1, -1);
  return y;
}

Path EulerEngine::simulate_path(const Vector& x0, double h, long n_steps, RngStream& rng) const {
  if (n_steps < 1) throw DomainError("n_steps must be >= 1");
  if (!x0.allFinite()) throw DomainError("initial state must be finite");
  const long path = static_cast<long>(rng.stream_id());
  Path p;
  p.h = h;
  p.seed = rng.seed();
  p.stream_id = rng.stream_id();
  p.times.resize(n_steps + 1);
  p.states.resize(n_steps + 1, sym_.dim());
  p.states.row(0) = x0.transpose();
  p.times[0] = 0.0;
  Vector x = x0;
  for (long m = 0; m < n_steps; ++m) {
    try {
      x = step(x, h, rng);
    } catch (const SimulationError&) {
      throw SimulationError("non-finite state after increment", path, m);
    } catch (const Error& e) {
      throw SimulationError(e.what(), path, m);
    }
    p.states.row(m + 1) = x.transpose();
    p.times[m + 1] = static_cast<double>(m + 1) * h;
  }
  return p;
}

Ensemble EulerEngine::simulate_ensemble(const Vector& x0, double h, long n_steps, long n_paths,
                                        std::uint64_t seed) const {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  if (n_steps < 1) throw DomainError("n_steps must be >= 1");
  const int d = sym_.dim();
  Ensemble ens;
  ens.seed = seed;
  ens.h = h;
  ens.n_steps = n_steps;
  ens.x0 = x0;
  ens.terminal.resize(n_paths, d);
  ens.stream_ids.resize(n_paths);
  const double floats =
      static_cast<double>(n_paths) * static_cast<double>(n_steps + 1) * static_cast<double>(d + 1);
  ens.all_paths_recorded = floats <= static_cast<double>(options_.max_recorded_floats);
  const long recorded = ens.all_paths_recorded
                            ? n_paths
                            : std::min<long>(n_paths, static_cast<long>(options_.reservoir_paths));
  ens.paths.resize(recorded);

  std::atomic<long> next{0};
  std::mutex fail_mutex;
  std::optional<SimulationError> first_failure;
  long failures = 0;

  const auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n_paths) return;
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      ens.stream_ids[i] = static_cast<std::uint64_t>(i);
      try {
        Path p = simulate_path(x0, h, n_steps, rng);
        ens.terminal.row(i) = p.states.row(n_steps);
        if (i < recorded) ens.paths[i] = std::move(p);
      } catch (const SimulationError& e) {
        std::lock_guard lock(fail_mutex);
        ++failures;
        if (!first_failure || e.path_index() < first_failure->path_index()) first_failure = e;
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<long>(threads(), n_paths));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_failure) {
    throw SimulationError(std::to_string(failures) + " of " + std::to_string(n_paths) +
                              " paths failed; first: " + first_failure->what(),
                          first_failure->path_index(), first_failure->step_index());
  }
  return ens;
}

Vector step(const StateDependentSymbol& sym, const Vector& x, double h, RngStream& rng) {
  return EulerEngine(sym).step(x, h, rng);
}

Path simulate_path(const StateDependentSymbol& sym, const Vector& x0, double h, long n_steps,
                   RngStream& rng) {
  return EulerEngine(sym).simulate_path(x0, h, n_steps, rng);
}

Ensemble simulate_ensemble(const StateDependentSymbol& sym, const Vector& x0, double h,
                           long n_steps, long n_paths, std::uint64_t seed) {
  return EulerEngine(sym).simulate_ensemble(x0, h, n_steps, n_paths, seed);
}

}  // namespace feller
