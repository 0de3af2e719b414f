#include "cubictwist/arith.hpp"

#include <array>
#include <cmath>

#include "cubictwist/errors.hpp"

namespace cubictwist {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0 || p == 2) return a;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t x = powmod(a, (q + 1) / 2, p);
  std::uint64_t t = powmod(a, q, p);
  int m = s;
  while (t != 1) {
    int i = 1;
    std::uint64_t t2 = mulmod(t, t, p);
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    std::uint64_t b = c;
    for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    x = mulmod(x, b, p);
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    m = i;
  }
  return x;
}

int legendre(i128 a, std::uint64_t p) {
  std::uint64_t r = mod_floor(a, p);
  if (r == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t icbrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  auto cube = [](std::uint64_t x) { return static_cast<u128>(x) * x * x; };
  while (r > 0 && cube(r) > n) --r;
  while (cube(r + 1) <= n) ++r;
  return r;
}

bool is_perfect_square(std::uint64_t n) {
  std::uint64_t r = isqrt(n);
  return r * r == n;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  i128 t = 0, new_t = 1;
  i128 r = n, new_r = a % n;
  while (new_r != 0) {
    i128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw Error(ErrorKind::DomainError, "value not invertible");
  return mod_floor(t, n);
}

int valuation(i128 value, std::uint64_t p) {
  if (value == 0) return 1 << 20;
  int v = 0;
  while (value % static_cast<i128>(p) == 0) {
    value /= static_cast<i128>(p);
    ++v;
  }
  return v;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  auto strip = [&](std::uint64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_cube_free(std::uint64_t n) {
  if (n == 0) return false;
  for (auto [p, e] : factorize(n)) {
    if (e >= 3) return false;
  }
  return true;
}

bool is_square_free(std::uint64_t n) {
  if (n == 0) return false;
  for (auto [p, e] : factorize(n)) {
    if (e >= 2) return false;
  }
  return true;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "128-bit multiply");
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "128-bit add");
  return r;
}

}  // namespace cubictwist
