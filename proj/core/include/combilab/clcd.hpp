#pragma once

// Combinatorial least common denominator: difference vectors, their tensor
// products, lattice distance and a certified search for the infimum.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace combilab {

/// Entries v_i - v_j over pairs i < j in lexicographic pair order.
class DifferenceVector {
 public:
  int source_dimension() const noexcept { return n_; }
  std::span<const double> entries() const noexcept { return entries_; }
  double norm() const;

  friend DifferenceVector difference_vector(std::span<const double> v);

 private:
  DifferenceVector(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {}
  int n_;
  std::vector<double> entries_;
};

/// Entries (a_i - a_j)(v_k - v_l) ordered by ((i,j),(k,l)) lexicographically.
class TensorDifference {
 public:
  int source_dimension() const noexcept { return n_; }
  std::span<const double> entries() const noexcept { return entries_; }
  /// ||D(a)|| * ||D(v)||.
  double norm() const noexcept { return norm_; }

  friend TensorDifference tensor_difference(std::span<const double> a, std::span<const double> v,
                                            int max_n);

 private:
  TensorDifference(int n, std::vector<double> entries, double norm)
      : n_(n), entries_(std::move(entries)), norm_(norm) {}
  int n_;
  std::vector<double> entries_;
  double norm_;
};

/// Requires n >= 2.
DifferenceVector difference_vector(std::span<const double> v);

inline constexpr int kDefaultTensorDimensionCap = 40;

/// Requires equal lengths n >= 2 and n <= max_n (ResourceError otherwise).
TensorDifference tensor_difference(std::span<const double> a, std::span<const double> v,
                                   int max_n = kDefaultTensorDimensionCap);

/// Nearest integer with ties to even.
double round_half_even(double x) noexcept;

/// Euclidean distance from w to the integer lattice.
double lattice_distance(std::span<const double> w);

struct ClcdQuery {
  /// alpha for the plain CLCD, L for the tensor variant.
  double cap = 1.0;
  /// gamma for the plain CLCD, u for the tensor variant; in (0, 1).
  double slope = 0.5;
  double horizon = 1e6;
  double bracket_tolerance = 1e-9;
  /// Tolerance granted to the strict inequality when checking witnesses.
  double slack = 1e-12;
  /// Margin evaluations allowed before the scan gives up at its current theta.
  std::uint64_t max_evaluations = 200'000'000;

  void validate() const;
};

enum class ClcdStatus { finite, infinite_within_horizon };

struct ClcdResult {
  ClcdStatus status = ClcdStatus::infinite_within_horizon;
  /// Smallest admissible theta found (within bracket tolerance of the
  /// infimum); +inf when none was found.
  double value = std::numeric_limits<double>::infinity();
  /// Nearest lattice point to value * target.
  std::vector<std::int64_t> witness;
  /// Width of the largest theta interval the scan could not certify.
  double certified_gap = 0.0;
  /// Every theta in (0, searched_to) below value was certified
  /// inadmissible. +inf when the admissible set is provably empty.
  double searched_to = 0.0;
  double slack = 0.0;
  std::uint64_t evaluations = 0;

  bool is_finite() const noexcept { return status == ClcdStatus::finite; }
  /// value when finite, otherwise the certified lower bound searched_to.
  double lower_bound() const noexcept { return is_finite() ? value : searched_to; }
};

/// inf{theta > 0 : dist(theta * target, Z^N) < min(slope * theta * ||target||, cap)}.
///
/// theta -> dist(theta * target, Z^N) is ||target||-Lipschitz, so the margin
/// dist - min(...) is (1 + slope)||target||-Lipschitz. From a point with
/// margin m the scan jumps m / Lipschitz ahead, which skips no admissible
/// theta; when m falls below bracket_tolerance * Lipschitz it walks in steps
/// of bracket_tolerance and an admissible point is refined by bisection.
/// The scan starts at 1 / (2 ||target||_inf): below that the nearest lattice
/// point is the origin and the slope term can never win.
ClcdResult clcd_search(std::span<const double> target, const ClcdQuery& query);

/// min{CLCD_{alpha,gamma}(v), alpha / (4 sqrt(n) ||v - w||)}: the certified
/// lower bound for CLCD_{alpha/2,gamma/2}(w) under the stability hypothesis
/// ||v - w|| < gamma ||D(v)|| / (5 sqrt(n)) (DomainError if violated).
/// When CLCD(v) is not found within the horizon, the horizon stands in.
double stability_floor(std::span<const double> v, std::span<const double> w,
                       const ClcdQuery& query);

}  // namespace combilab
