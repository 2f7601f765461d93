#pragma once

// Experiment configuration, per-trial records, summaries and the
// deterministic trial scheduler shared by all experiments.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace combilab {

enum class OutputFormat { csv, json };
enum class RunMode { montecarlo, exhaustive };

struct ExperimentConfig {
  std::string experiment = "tail";
  int n = 16;
  std::optional<int> d;  // defaults to n / 2
  std::optional<int> m;  // defaults to n
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::vector<double> eps_grid = default_eps_grid();
  double delta = 0.1;
  double rho = 0.1;
  std::optional<double> alpha;  // defaults to n / 2
  double gamma = 0.1;
  double horizon = 1e6;
  double constant = 1.0;
  int threads = 1;
  RunMode mode = RunMode::montecarlo;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::csv;
  /// Explicit coefficient vector (smallball); generated when empty.
  std::vector<double> vector;

  int resolved_d() const { return d.value_or(n / 2); }
  int resolved_m() const { return m.value_or(n); }
  double resolved_alpha() const { return alpha.value_or(n / 2.0); }

  /// Throws DomainError on trials < 1, n < 2, an unsorted eps grid, etc.
  void validate() const;

  /// 0, 0.05, ..., 1.
  static std::vector<double> default_eps_grid();
};

/// Parses "a:b:step" (inclusive of b up to rounding) or a comma list.
std::vector<double> parse_eps_grid(const std::string& spec);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::string statistic;
  double value = 0.0;
  std::string flag;
};

struct SummaryRow {
  std::string experiment;
  int n = 0;
  double eps = 0.0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::vector<SummaryRow> summary;
  /// Scalar results in insertion order (slopes, fitted constants, counts).
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<CheckOutcome> checks;
  /// Vector-valued results, e.g. the coefficient vector a run used.
  std::vector<std::pair<std::string, std::vector<double>>> arrays;

  std::optional<double> metric(const std::string& name) const;
  bool all_checks_passed() const;
};

struct Interval {
  double low;
  double high;
};

/// Wilson score interval at z = 1.96.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Calls body(i) for every i in [0, count) on up to `threads` threads.
/// body must only write state owned by index i.
void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& body);

}  // namespace combilab
