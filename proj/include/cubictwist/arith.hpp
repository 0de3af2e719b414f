#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace cubictwist {

using i128 = __int128;
using u128 = unsigned __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % n);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t n);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n);

// Square root of a modulo an odd prime p; a must be a quadratic residue.
std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p);

// Legendre symbol (a/p) for odd prime p, returned as -1, 0 or 1.
int legendre(i128 a, std::uint64_t p);

std::uint64_t isqrt(std::uint64_t n);
std::uint64_t icbrt(std::uint64_t n);
bool is_perfect_square(std::uint64_t n);

// Reduces a into [0, n).
inline std::uint64_t mod_floor(i128 a, std::uint64_t n) {
  i128 r = a % static_cast<i128>(n);
  if (r < 0) r += n;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n);

int valuation(i128 value, std::uint64_t p);

// Prime factorization by trial division, ascending primes.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

bool is_cube_free(std::uint64_t n);
bool is_square_free(std::uint64_t n);

// Checked arithmetic on the 128-bit carrier; throws Error(Overflow).
i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);

}  // namespace cubictwist
