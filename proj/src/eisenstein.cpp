#include "cubictwist/eisenstein.hpp"

#include <ostream>
#include <string>

#include "cubictwist/errors.hpp"

namespace cubictwist {

namespace {

std::string to_decimal(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  std::string s;
  while (u > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  return neg ? "-" + s : s;
}

void require_split(std::uint64_t p) {
  if (p % 3 != 1 || !is_prime(p)) {
    throw Error(ErrorKind::NotSplitPrime, std::to_string(p) + " is not a prime = 1 mod 3");
  }
}

}  // namespace

EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y) {
  return {checked_add(x.a, y.a), checked_add(x.b, y.b)};
}

EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y) {
  return {checked_add(x.a, -y.a), checked_add(x.b, -y.b)};
}

// (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, and w^2 = -1 - w.
EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y) {
  i128 ac = checked_mul(x.a, y.a);
  i128 bd = checked_mul(x.b, y.b);
  i128 cross = checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a));
  return {checked_add(ac, -bd), checked_add(cross, -bd)};
}

// conj(w) = w^2 = -1 - w.
EisensteinInt conj(const EisensteinInt& z) { return {checked_add(z.a, -z.b), -z.b}; }

std::ostream& operator<<(std::ostream& os, const EisensteinInt& z) {
  return os << to_decimal(z.a) << (z.b < 0 ? "" : "+") << to_decimal(z.b) << "w";
}

i128 norm(const EisensteinInt& z) {
  i128 aa = checked_mul(z.a, z.a);
  i128 ab = checked_mul(z.a, z.b);
  i128 bb = checked_mul(z.b, z.b);
  return checked_add(checked_add(aa, -ab), bb);
}

i128 trace(const EisensteinInt& z) { return checked_add(checked_mul(2, z.a), -z.b); }

CubicSymbol operator*(CubicSymbol x, CubicSymbol y) {
  if (x == CubicSymbol::zero || y == CubicSymbol::zero) return CubicSymbol::zero;
  int k = (static_cast<int>(x) - 1 + static_cast<int>(y) - 1) % 3;
  return static_cast<CubicSymbol>(k + 1);
}

CubicSymbol conj(CubicSymbol s) {
  switch (s) {
    case CubicSymbol::omega: return CubicSymbol::omega2;
    case CubicSymbol::omega2: return CubicSymbol::omega;
    default: return s;
  }
}

EisensteinInt as_eisenstein(CubicSymbol s) {
  switch (s) {
    case CubicSymbol::zero: return {0, 0};
    case CubicSymbol::one: return {1, 0};
    case CubicSymbol::omega: return {0, 1};
    case CubicSymbol::omega2: return {-1, -1};
  }
  return {0, 0};
}

// Cornacchia on x^2 + 27 y^2 = 4p, starting from a root of x^2 = -27 (mod 4p).
CornacchiaPair cornacchia_4p(std::uint64_t p) {
  require_split(p);
  std::uint64_t root = sqrt_mod(p - 27 % p, p);
  if (root % 2 == 0) root = p - root;  // x0 = -27 = 1 (mod 2) lifts the root to mod 4p
  std::uint64_t a = 2 * p;
  std::uint64_t b = root;
  std::uint64_t bound = isqrt(4 * p);
  while (b > bound) {
    std::uint64_t r = a % b;
    a = b;
    b = r;
  }
  std::uint64_t rest = 4 * p - b * b;
  if (rest % 27 != 0 || !is_perfect_square(rest / 27)) {
    throw Error(ErrorKind::NotSplitPrime, "no representation 4p = L^2 + 27M^2");
  }
  auto L = static_cast<std::int64_t>(b);
  auto M = static_cast<std::int64_t>(isqrt(rest / 27));
  if (((L % 3) + 3) % 3 != 1) L = -L;
  return {L, M};
}

EisensteinInt primary_from_pair(const CornacchiaPair& pair) {
  return {(static_cast<i128>(pair.L) + 3 * pair.M) / 2, static_cast<i128>(3) * pair.M};
}

EisensteinInt primary_prime(std::uint64_t p) { return primary_from_pair(cornacchia_4p(p)); }

bool is_primary(const EisensteinInt& z) {
  auto m3 = [](i128 v) { return static_cast<int>(((v % 3) + 3) % 3); };
  return m3(z.a) == 2 && m3(z.b) == 0;
}

std::uint64_t omega_mod(const EisensteinInt& pi, std::uint64_t p) {
  std::uint64_t b = mod_floor(pi.b, p);
  std::uint64_t a = mod_floor(pi.a, p);
  return mulmod((p - a) % p, inverse_mod(b, p), p);
}

CubicSymbol cubic_symbol_mod(std::uint64_t value, std::uint64_t p, std::uint64_t omega) {
  std::uint64_t v = powmod(value % p, (p - 1) / 3, p);
  if (v == 0) return CubicSymbol::zero;
  if (v == 1) return CubicSymbol::one;
  return v == omega ? CubicSymbol::omega : CubicSymbol::omega2;
}

CubicSymbol cubic_symbol(const EisensteinInt& alpha, const EisensteinInt& pi) {
  i128 n = norm(pi);
  if (!is_primary(pi) || n <= 0 || n > static_cast<i128>(UINT32_MAX) * UINT32_MAX ||
      static_cast<std::uint64_t>(n) % 3 != 1 || !is_prime(static_cast<std::uint64_t>(n))) {
    throw Error(ErrorKind::NotPrimary, "modulus is not a primary split prime");
  }
  auto p = static_cast<std::uint64_t>(n);
  std::uint64_t w = omega_mod(pi, p);
  std::uint64_t image =
      (mod_floor(alpha.a, p) + mulmod(mod_floor(alpha.b, p), w, p)) % p;
  return cubic_symbol_mod(image, p, w);
}

}  // namespace cubictwist
