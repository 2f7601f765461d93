#pragma once

// Exact singularity kernels behind is_singular_exact, exposed for tests.

#include <cstdint>
#include <vector>

namespace combilab::detail {

using IntegerRows = std::vector<std::vector<std::int64_t>>;

/// Fraction-free Bareiss elimination in 128-bit integers. Valid only when
/// every minor is below 2^62 in magnitude (callers check the Hadamard bound).
bool bareiss_singular(const IntegerRows& rows);

/// det(A) mod p for a prime p < 2^31.
std::uint64_t determinant_mod(const IntegerRows& rows, std::uint64_t p);

/// Singularity decided by determinants modulo enough 31-bit primes that
/// their product exceeds 2 * 2^log2_bound. log2_bound must bound log2|det|.
bool modular_singular(const IntegerRows& rows, double log2_bound);

/// Descending primes below 2^31; the list is computed once.
const std::vector<std::uint64_t>& certificate_primes();

}  // namespace combilab::detail
