#include "combilab/detail/exact_rank.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "combilab/errors.hpp"

namespace combilab::detail {
namespace {

using i128 = __int128;

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = result * base % p;
    base = base * base % p;
    exp >>= 1U;
  }
  return result;
}

// Deterministic for p < 3,215,031,751.
bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL}) {
    if (p % q == 0) return p == q;
  }
  std::uint64_t d = p - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL}) {
    std::uint64_t x = pow_mod(a, d, p);
    if (x == 1 || x == p - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = x * x % p;
      if (x == p - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace

bool bareiss_singular(const IntegerRows& rows) {
  const auto n = rows.size();
  std::vector<std::vector<i128>> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DomainError("bareiss: matrix must be square");
    m[i].assign(rows[i].begin(), rows[i].end());
  }
  i128 previous = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return true;
      std::swap(m[k], m[swap_row]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous;
      }
      m[i][k] = 0;
    }
    previous = m[k][k];
  }
  return false;
}

std::uint64_t determinant_mod(const IntegerRows& rows, std::uint64_t p) {
  const auto n = rows.size();
  std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DomainError("determinant_mod: matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = rows[i][j] % static_cast<std::int64_t>(p);
      m[i][j] = static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
    }
  }
  std::uint64_t det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m[pivot][k] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      det = (p - det) % p;
    }
    det = det * m[k][k] % p;
    const std::uint64_t inv = pow_mod(m[k][k], p - 2, p);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const std::uint64_t f = m[i][k] * inv % p;
      for (std::size_t j = k; j < n; ++j) {
        m[i][j] = (m[i][j] + p - f * m[k][j] % p) % p;
      }
    }
  }
  return det;
}

const std::vector<std::uint64_t>& certificate_primes() {
  static const std::vector<std::uint64_t> primes = [] {
    std::vector<std::uint64_t> out;
    for (std::uint64_t candidate = (1ULL << 31) - 1; out.size() < 256; candidate -= 2) {
      if (is_prime(candidate)) out.push_back(candidate);
    }
    return out;
  }();
  return primes;
}

bool modular_singular(const IntegerRows& rows, double log2_bound) {
  const auto& primes = certificate_primes();
  double covered_bits = 0.0;
  std::size_t used = 0;
  // det == 0 iff det vanishes modulo a set of primes whose product exceeds 2|det|.
  while (covered_bits <= log2_bound + 1.0) {
    if (used == primes.size()) {
      throw ResourceError("exact singularity certificate needs more than " +
                              std::to_string(primes.size()) + " primes",
                          static_cast<std::uint64_t>(std::ceil(log2_bound)),
                          static_cast<std::uint64_t>(covered_bits));
    }
    const std::uint64_t p = primes[used++];
    if (determinant_mod(rows, p) != 0) return false;
    covered_bits += std::log2(static_cast<double>(p));
  }
  return true;
}

}  // namespace combilab::detail
