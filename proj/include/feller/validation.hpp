#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feller/engine.hpp"
#include "feller/symbol.hpp"
#include "feller/types.hpp"

namespace feller {

/// (1/n) sum_k exp(i Y_k' xi) over the rows of an n x d sample matrix.
template <class Derived>
Complex empirical_cf(const Eigen::MatrixBase<Derived>& samples, const Vector& xi) {
  const Eigen::Index n = samples.rows();
  if (n < 1) return {1.0, 0.0};
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = samples.row(k).dot(xi.transpose());
    re += std::cos(a);
    im += std::sin(a);
  }
  Complex z(re / static_cast<double>(n), im / static_cast<double>(n));
  const double m = std::abs(z);
  if (m > 1.0) z /= m;  // rounding only
  return z;
}

/// One statistical check. pass == (statistic <= threshold).
struct TestResult {
  std::string name;
  std::string description;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  long n = 0;
  std::uint64_t seed = 0;
  std::optional<double> p_value;
};

TestResult make_result(std::string name, std::string description, double statistic,
                       double threshold, long n, std::uint64_t seed);

/// Frequencies and their target characteristic function values exp(-h q(x, xi)).
struct CFGrid {
  std::vector<Vector> xi;
  std::vector<Complex> target;
  long n = 0;
};

/// Sign-symmetric grid of `points` (odd) equally spaced frequencies up to max_abs.
/// Without max_abs, the range is chosen so that |target| decays to about e^-4
/// along the first axis, capped at 10 / h^(1/2) and at 50.
CFGrid make_cf_grid(const StateDependentSymbol& sym, const Vector& x, double h, long n,
                    int points = 41, std::optional<double> max_abs = std::nullopt);

/// 3.3 / sqrt(n): per-point bound at level ~1e-3, about 0.04 family-wise over 41 points.
double cf_threshold(long n);

/// sup over the grid of |empirical cf - target| against cf_threshold(n) + bias_budget.
TestResult cf_match_test(const Matrix& samples, const CFGrid& grid, double bias_budget = 0.0,
                         std::uint64_t seed = 0, std::string name = "cf_match");

/// Kolmogorov-Smirnov two-sample test with the asymptotic threshold at `level`.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level = 0.01,
                         std::uint64_t seed = 0, std::string name = "ks_two_sample");

/// Two-sided sign test for median 0; statistic |z|.
TestResult sign_test(const std::vector<double>& samples, double level = 0.01,
                     std::uint64_t seed = 0, std::string name = "sign_test");

/// Chi-square goodness of fit of counts against Poisson(mean).
/// Bins with expected count >= 5, the upper tail pooled.
TestResult jump_count_test(const std::vector<long>& counts, double mean, double level = 0.01,
                           std::uint64_t seed = 0, std::string name = "jump_count");

struct ConvergenceReport {
  std::vector<double> h;
  /// distance[k]: sup over the grid of the CF gap between levels h[k] and h[k + 1].
  std::vector<double> distance;
  double noise_floor = 0.0;
  long n_paths = 0;
  TestResult trend;
};

/// Terminal-law CF distances between successive step sizes. h_list must be
/// strictly decreasing with T / h integral, and have at least three entries.
/// Trend passes when distance[k + 1] <= distance[k] + 2 * noise floor.
ConvergenceReport convergence_study(const EulerEngine& engine, const Vector& x0, double T,
                                    const std::vector<double>& h_list, long n_paths,
                                    std::uint64_t seed);

struct StateDependenceReport {
  double alpha_high = 0.0;  // index at x = 2
  double alpha_low = 0.0;   // index at x = -1
  double tail_high = 0.0;   // P(|increment| > 5) at x = 2
  double tail_low = 0.0;    // P(|increment| > 5) at x = -1
  std::vector<TestResult> tests;

  bool pass() const;
};

/// One-step increments from x = 2 and x = -1 against direct stable draws with the
/// index read from the frozen triplet, plus the ordering of the tail masses beyond 5.
StateDependenceReport state_dependence_experiment(const EulerEngine& engine, long n,
                                                  std::uint64_t seed, double h = 1.0,
                                                  double level = 0.01);

struct ValidationReport {
  std::string title;
  std::map<std::string, std::string> metadata;
  std::vector<TestResult> tests;

  bool pass() const;
  /// key = value lines with one [test <name>] section per result.
  std::string to_text() const;
};

/// Locale-independent shortest round-trip decimal.
std::string format_double(double v);

}  // namespace feller
