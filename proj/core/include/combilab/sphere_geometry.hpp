#pragma once

// Almost-constant / sparse / compressible predicates on the unit sphere and
// the rounding step used to build nets.

#include <optional>
#include <span>
#include <vector>

#include "combilab/combi_core.hpp"

namespace combilab {

/// delta, rho in the open unit interval.
struct PartitionParams {
  double delta = 0.1;
  double rho = 0.1;

  void validate() const;
};

struct AlmostConstant {
  bool almost_constant = false;
  /// Midpoint of the best window; present only when almost_constant.
  std::optional<double> lambda;
};

/// True iff some lambda has at least ceil((1 - delta) n) coordinates within
/// rho / sqrt(n). Requires ||v|| = 1 within 1e-9.
AlmostConstant is_almost_constant(std::span<const double> v, const PartitionParams& p);

struct SeparatedSets {
  std::vector<int> first;   // sigma_1, ascending, 0-based
  std::vector<int> second;  // sigma_2
};

/// Checks |sigma_1|, |sigma_2| >= delta n / 8, disjointness, and
/// rho / sqrt(2n) <= |v_i - v_j| <= 6 / sqrt(delta n) for every cross pair.
bool separated_sets_hold(std::span<const double> v, const SeparatedSets& sets,
                         const PartitionParams& p);

/// Splits the coordinates with |v_k| <= 3 / sqrt(delta n) at their widest
/// sorted gap of width >= rho / sqrt(2n) that leaves >= delta n / 8 indices
/// on both sides; sigma_1 is the upper side. Returns nullopt when no such
/// gap exists or the result fails separated_sets_hold.
std::optional<SeparatedSets> find_separated_sets(std::span<const double> v,
                                                 const PartitionParams& p);

/// Distance from unit x to the unit vectors supported on floor(delta n)
/// coordinates: sqrt(2 - 2t), t the norm of the floor(delta n) largest
/// magnitudes. Returns sqrt(2) when floor(delta n) = 0.
double compressibility_distance(std::span<const double> x, double delta);

/// Moves x onto the grid x + (beta s / sqrt(n)) * (1,..,1,0,..,0) with
/// floor(k) leading entries, k = |<v - x, 1>| sqrt(n) / beta. Requires
/// ||v - x|| <= beta; guarantees ||v - w|| <= 2 beta and
/// |<v - w, 1>| <= beta / sqrt(n).
std::vector<double> round_to_net(std::span<const double> v, std::span<const double> x,
                                 double beta);

/// Rejection-samples a uniform unit vector that is not almost-constant.
std::vector<double> random_non_almost_constant(int n, const PartitionParams& p,
                                               RngSubstream& rng, int max_attempts = 10'000);

}  // namespace combilab
