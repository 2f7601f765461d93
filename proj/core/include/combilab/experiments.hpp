#pragma once

// Monte Carlo and exhaustive experiments built on the core modules.

#include <cstdint>
#include <string>

#include "combilab/harness.hpp"

namespace combilab {

/// Empirical P{s_n(Q_n) <= eps / sqrt(n)} per eps, cross-checked against
/// exact singularity. Exhaustive mode enumerates all matrices (n in {2, 4}).
ExperimentResult run_tail_experiment(const ExperimentConfig& cfg);

struct CensusResult {
  int n = 0;
  int d = 0;
  RunMode mode = RunMode::exhaustive;
  std::uint64_t singular = 0;
  std::uint64_t total = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// 1 / C(n, d): probability that the first two rows agree.
  double trivial_lower_bound = 0.0;

  /// singular / total in lowest terms.
  std::pair<std::uint64_t, std::uint64_t> reduced_fraction() const;
};

inline constexpr std::uint64_t kExhaustiveMatrixCap = 100'000'000;

/// Exact p_n (exhaustive) or its frequency with a Wilson interval.
/// Exhaustive mode throws ResourceError when C(n, d)^n exceeds the cap.
CensusResult run_singularity_census(int n, RunMode mode, const ExperimentConfig& cfg);

/// Wraps the census as an ExperimentResult for persistence.
ExperimentResult run_singularity_experiment(const ExperimentConfig& cfg);

/// dist(R_n, H_n), |<R_n, normal>| and s_n per trial; Levy function of the
/// distance plus both sides of the invertibility-via-distance relation.
ExperimentResult run_distance_experiment(const ExperimentConfig& cfg);

/// W_v samples against the three-term small-ball bound; reports the
/// smallest constant C that makes the bound hold at each eps.
ExperimentResult run_smallball_validation(const ExperimentConfig& cfg);

/// Monte Carlo checks of the matrix concentration, restricted norm,
/// single-vector invertibility and row anti-concentration bounds.
ExperimentResult run_inequality_suite(const ExperimentConfig& cfg);

/// Samples cfg.trials row-regular matrices (records hold the row bit codes).
ExperimentResult run_sample(const ExperimentConfig& cfg);

/// Smallest singular value of cfg.trials sampled Q_n.
ExperimentResult run_svmin(const ExperimentConfig& cfg);

/// CLCD of the configured (or generated) vector.
ExperimentResult run_clcd(const ExperimentConfig& cfg);

/// Substream index reserved for generating fixed vectors of a run, disjoint
/// from trial indices.
inline constexpr std::uint64_t kVectorStream = 1ULL << 62;

}  // namespace combilab
