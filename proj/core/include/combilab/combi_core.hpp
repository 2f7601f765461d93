#pragma once

// Seedable sampling and enumeration of fixed-weight 0/1 vectors and
// row-regular 0/1 matrices.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace combilab {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Counter-based 64-bit generator. Output k of stream (seed, index) is a
/// fixed function of (seed, index, k), so trial i always sees the same
/// numbers no matter which thread runs it or in what order.
class RngSubstream {
 public:
  using result_type = std::uint64_t;

  RngSubstream(std::uint64_t seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Standard normal deviate (Box-Muller, no cached spare).
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t index() const noexcept { return index_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

RngSubstream substream(std::uint64_t seed, std::uint64_t index) noexcept;

/// 0/1 vector of length n with exactly d ones.
class FixedWeightVector {
 public:
  /// Throws DomainError unless every entry is 0 or 1.
  explicit FixedWeightVector(std::vector<std::uint8_t> bits);

  int n() const noexcept { return static_cast<int>(bits_.size()); }
  int d() const noexcept { return d_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::uint8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }

  /// Indices of the ones, ascending.
  std::vector<int> support() const;
  /// Sum of v_i over the support, accumulated in index order.
  double dot(std::span<const double> v) const;

  friend bool operator==(const FixedWeightVector&, const FixedWeightVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  int d_ = 0;
};

/// m x n 0/1 matrix whose rows all have weight d.
class RowRegularMatrix {
 public:
  /// Throws DomainError if rows is empty or rows disagree on n or d.
  explicit RowRegularMatrix(std::vector<FixedWeightVector> rows);

  int m() const noexcept { return static_cast<int>(rows_.size()); }
  int n() const noexcept { return rows_.front().n(); }
  int d() const noexcept { return rows_.front().d(); }
  const FixedWeightVector& row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
  std::span<const FixedWeightVector> rows() const noexcept { return rows_; }
  int operator()(int i, int j) const { return row(i)[j]; }

  friend bool operator==(const RowRegularMatrix&, const RowRegularMatrix&) = default;

 private:
  std::vector<FixedWeightVector> rows_;
};

/// Uniform over the C(n, d) weight-d vectors (partial Fisher-Yates).
FixedWeightVector sample_fixed_weight(int n, int d, RngSubstream& rng);

/// m independent rows from sample_fixed_weight. Requires 1 <= m <= n.
RowRegularMatrix sample_row_regular(int m, int n, int d, RngSubstream& rng);

/// Exact binomial coefficient; saturates at UINT64_MAX on overflow.
std::uint64_t binomial(int n, int k) noexcept;

/// Visits every weight-d support of {0..n-1} in colexicographic order
/// (sorted index lists). Throws ResourceError if C(n, d) > cap.
void for_each_support(int n, int d, const std::function<void(std::span<const int>)>& visit,
                      std::uint64_t cap = kDefaultEnumerationCap);

/// All C(n, d) weight-d vectors. Coordinate i carries bit n-1-i of the
/// colex code word, so the listing is increasing in lexicographic order:
/// (n=2, d=1) gives (0,1), (1,0).
std::vector<FixedWeightVector> enumerate_fixed_weight(int n, int d,
                                                      std::uint64_t cap = kDefaultEnumerationCap);

/// Uniform point on the unit sphere in R^n.
std::vector<double> random_unit_vector(int n, RngSubstream& rng);

}  // namespace combilab
