#include "combilab/combi_core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "combilab/errors.hpp"

namespace combilab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_weight(int n, int d) {
  if (n < 1) throw DomainError("dimension n must be positive, got " + std::to_string(n));
  if (d < 0 || d > n) {
    throw DomainError("weight d must satisfy 0 <= d <= n, got d=" + std::to_string(d) +
                      ", n=" + std::to_string(n));
  }
}

}  // namespace

RngSubstream::RngSubstream(std::uint64_t seed, std::uint64_t index) noexcept
    : seed_(seed), index_(index), key_(mix64(mix64(seed + kGolden) ^ mix64(~index * kGolden))) {}

RngSubstream::result_type RngSubstream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngSubstream::uniform01() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t RngSubstream::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection of the biased low range.
  unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double RngSubstream::normal() noexcept {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngSubstream substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return RngSubstream(seed, index);
}

FixedWeightVector::FixedWeightVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw DomainError("fixed-weight vector must have positive length");
  for (auto b : bits_) {
    if (b > 1) throw DomainError("fixed-weight vector entries must be 0 or 1");
    d_ += b;
  }
}

std::vector<int> FixedWeightVector::support() const {
  std::vector<int> s;
  s.reserve(static_cast<std::size_t>(d_));
  for (int i = 0; i < n(); ++i) {
    if (bits_[static_cast<std::size_t>(i)] != 0) s.push_back(i);
  }
  return s;
}

double FixedWeightVector::dot(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != n()) throw DomainError("dot: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != 0) sum += v[i];
  }
  return sum;
}

RowRegularMatrix::RowRegularMatrix(std::vector<FixedWeightVector> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("row-regular matrix needs at least one row");
  for (const auto& r : rows_) {
    if (r.n() != rows_.front().n() || r.d() != rows_.front().d()) {
      throw DomainError("row-regular matrix rows must share n and d");
    }
  }
}

FixedWeightVector sample_fixed_weight(int n, int d, RngSubstream& rng) {
  check_weight(n, d);
  std::vector<int> index(static_cast<std::size_t>(n));
  std::iota(index.begin(), index.end(), 0);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < d; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(index[static_cast<std::size_t>(i)], index[j]);
    bits[static_cast<std::size_t>(index[static_cast<std::size_t>(i)])] = 1;
  }
  return FixedWeightVector(std::move(bits));
}

RowRegularMatrix sample_row_regular(int m, int n, int d, RngSubstream& rng) {
  check_weight(n, d);
  if (m < 1 || m > n) {
    throw DomainError("row count m must satisfy 1 <= m <= n, got m=" + std::to_string(m));
  }
  std::vector<FixedWeightVector> rows;
  rows.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) rows.push_back(sample_fixed_weight(n, d, rng));
  return RowRegularMatrix(std::move(rows));
}

std::uint64_t binomial(int n, int k) noexcept {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

void for_each_support(int n, int d, const std::function<void(std::span<const int>)>& visit,
                      std::uint64_t cap) {
  check_weight(n, d);
  const std::uint64_t count = binomial(n, d);
  if (count > cap) {
    throw ResourceError("enumeration of C(" + std::to_string(n) + "," + std::to_string(d) +
                            ") = " + std::to_string(count) + " vectors exceeds cap " +
                            std::to_string(cap),
                        count, cap);
  }
  std::vector<int> c(static_cast<std::size_t>(d));
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    visit(std::span<const int>(c));
    // Colex successor: bump the lowest entry that has room, reset the ones below it.
    int j = 0;
    while (j < d && c[static_cast<std::size_t>(j)] + 1 ==
                        (j + 1 < d ? c[static_cast<std::size_t>(j + 1)] : n)) {
      ++j;
    }
    if (j == d) return;
    ++c[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) c[static_cast<std::size_t>(i)] = i;
  }
}

std::vector<FixedWeightVector> enumerate_fixed_weight(int n, int d, std::uint64_t cap) {
  std::vector<FixedWeightVector> out;
  check_weight(n, d);
  if (binomial(n, d) <= cap) out.reserve(static_cast<std::size_t>(binomial(n, d)));
  for_each_support(
      n, d,
      [&](std::span<const int> s) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
        for (int i : s) bits[static_cast<std::size_t>(n - 1 - i)] = 1;
        out.emplace_back(std::move(bits));
      },
      cap);
  return out;
}

std::vector<double> random_unit_vector(int n, RngSubstream& rng) {
  if (n < 1) throw DomainError("random_unit_vector: n must be positive");
  std::vector<double> v(static_cast<std::size_t>(n));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace combilab
