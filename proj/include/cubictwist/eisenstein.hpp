#pragma once

#include <cstdint>
#include <iosfwd>

#include "cubictwist/arith.hpp"

namespace cubictwist {

/// Element a + b*w of Z[w], where w^2 + w + 1 = 0.
struct EisensteinInt {
  i128 a = 0;
  i128 b = 0;

  friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
};

EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt conj(const EisensteinInt& z);
std::ostream& operator<<(std::ostream& os, const EisensteinInt& z);

// a^2 - ab + b^2; throws Error(Overflow) past the 128-bit budget.
i128 norm(const EisensteinInt& z);

// Trace z + conj(z) = 2a - b.
i128 trace(const EisensteinInt& z);

/// Value of a cubic residue symbol: 0 or a cube root of unity.
enum class CubicSymbol : std::uint8_t { zero, one, omega, omega2 };

CubicSymbol operator*(CubicSymbol x, CubicSymbol y);
CubicSymbol conj(CubicSymbol s);

// The unit w^k for k in {0,1,2}; zero maps to the ring zero.
EisensteinInt as_eisenstein(CubicSymbol s);

struct CornacchiaPair {
  std::int64_t L = 0;
  std::int64_t M = 0;
};

// 4p = L^2 + 27 M^2 with L = 1 (mod 3), M >= 0. Throws NotSplitPrime.
CornacchiaPair cornacchia_4p(std::uint64_t p);

// Primary prime over p: norm p, a = 2 and b = 0 (mod 3), b > 0.
EisensteinInt primary_prime(std::uint64_t p);

// Inverse of cornacchia_4p's parametrization: a = (L + 3M)/2, b = 3M.
EisensteinInt primary_from_pair(const CornacchiaPair& pair);

bool is_primary(const EisensteinInt& z);

// Image of w in Z[w]/(pi) = F_p, i.e. -a/b mod p.
std::uint64_t omega_mod(const EisensteinInt& pi, std::uint64_t p);

// Cubic residue symbol (alpha/pi)_3. Throws NotPrimary unless pi is a primary
// prime of split norm p = 1 (mod 3).
CubicSymbol cubic_symbol(const EisensteinInt& alpha, const EisensteinInt& pi);

// Same symbol for a rational integer, given the precomputed image of w mod p.
CubicSymbol cubic_symbol_mod(std::uint64_t value, std::uint64_t p, std::uint64_t omega);

}  // namespace cubictwist
