#include "cubictwist/curve.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>

#include "cubictwist/errors.hpp"

namespace cubictwist {

namespace {

using Int = boost::multiprecision::cpp_int;

struct Model {
  Int a1, a2, a3, a4, a6;

  // x = x' + r, y = y' + s x' + t
  void transform(const Int& r, const Int& s, const Int& t) {
    Int n1 = a1 + 2 * s;
    Int n2 = a2 - s * a1 + 3 * r - s * s;
    Int n3 = a3 + r * a1 + 2 * t;
    Int n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    Int n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    a1 = n1;
    a2 = n2;
    a3 = n3;
    a4 = n4;
    a6 = n6;
  }
};

struct Invariants {
  Int b2, b4, b6, b8, c4, c6, disc;

  explicit Invariants(const Model& e) {
    b2 = e.a1 * e.a1 + 4 * e.a2;
    b4 = e.a1 * e.a3 + 2 * e.a4;
    b6 = e.a3 * e.a3 + 4 * e.a6;
    b8 = e.a1 * e.a1 * e.a6 + 4 * e.a2 * e.a6 - e.a1 * e.a3 * e.a4 + e.a2 * e.a3 * e.a3 -
         e.a4 * e.a4;
    c4 = b2 * b2 - 24 * b4;
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  }
};

Int to_int(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  Int r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? Int(-r) : r;
}

int val(Int v, std::uint64_t p) {
  if (v == 0) return 1 << 20;
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

bool divides(const Int& d, const Int& v) { return v % d == 0; }

std::uint64_t modp(const Int& v, std::uint64_t p) {
  Int r = v % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint64_t>();
}

// a T^2 + b T + c has a root mod p.
bool quadratic_has_root(const Int& a, const Int& b, const Int& c, std::uint64_t p) {
  std::uint64_t qa = modp(a, p), qb = modp(b, p), qc = modp(c, p);
  if (p == 2) return qc == 0 || (qa + qb + qc) % 2 == 0;
  if (qa == 0) return qb != 0 || qc == 0;
  i128 disc = static_cast<i128>(qb) * qb - 4 * static_cast<i128>(qa) * qc;
  return legendre(disc, p) >= 0;
}

// Polynomials of degree < 3 modulo a monic cubic f over F_p.
using Poly3 = std::array<std::uint64_t, 3>;

Poly3 mulmod_cubic(const Poly3& x, const Poly3& y, const Poly3& f, std::uint64_t p) {
  std::array<std::uint64_t, 5> prod{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) prod[i + j] = (prod[i + j] + mulmod(x[i], y[j], p)) % p;
  }
  // T^3 = -(f2 T^2 + f1 T + f0)
  for (int k = 4; k >= 3; --k) {
    std::uint64_t c = prod[k];
    prod[k] = 0;
    for (int i = 0; i < 3; ++i) {
      prod[k - 3 + i] = (prod[k - 3 + i] + p - mulmod(c, f[i], p)) % p;
    }
  }
  return {prod[0], prod[1], prod[2]};
}

int poly_degree(const std::vector<std::uint64_t>& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
    if (a[i] != 0) return i;
  }
  return -1;
}

// Degree of gcd(a, b) over F_p.
int gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t p) {
  while (poly_degree(b) >= 0) {
    int db = poly_degree(b);
    std::uint64_t inv = inverse_mod(b[db], p);
    while (poly_degree(a) >= db) {
      int da = poly_degree(a);
      std::uint64_t q = mulmod(a[da], inv, p);
      for (int i = 0; i <= db; ++i) {
        a[da - db + i] = (a[da - db + i] + p - mulmod(q, b[i], p)) % p;
      }
    }
    std::swap(a, b);
  }
  return poly_degree(a);
}

// Distinct roots of T^3 + b T^2 + c T + d mod p.
int cubic_root_count(const Int& b, const Int& c, const Int& d, std::uint64_t p) {
  std::uint64_t f0 = modp(d, p), f1 = modp(c, p), f2 = modp(b, p);
  if (p < 64) {
    int count = 0;
    for (std::uint64_t t = 0; t < p; ++t) {
      if ((((t + f2) % p * t + f1) % p * t + f0) % p == 0) ++count;
    }
    return count;
  }
  Poly3 f{f0, f1, f2};
  Poly3 result{1, 0, 0};
  Poly3 base{0, 1, 0};
  for (std::uint64_t e = p; e > 0; e >>= 1) {
    if (e & 1) result = mulmod_cubic(result, base, f, p);
    base = mulmod_cubic(base, base, f, p);
  }
  result[1] = (result[1] + p - 1) % p;  // T^p - T
  return gcd_degree({f0, f1, f2, 1}, {result[0], result[1], result[2]}, p);
}

Int half_mod(std::uint64_t p) { return Int((p + 1) / 2); }

Int inv_mod(const Int& v, std::uint64_t p) { return Int(inverse_mod(modp(v, p), p)); }

LocalData finish(std::uint64_t p, int f, Kodaira k, int c, int index = 0) {
  return LocalData{p, f, k, index, c};
}

}  // namespace

std::string LocalData::kodaira_label() const {
  switch (kodaira) {
    case Kodaira::I0: return "I0";
    case Kodaira::In: return "I" + std::to_string(kodaira_index);
    case Kodaira::II: return "II";
    case Kodaira::III: return "III";
    case Kodaira::IV: return "IV";
    case Kodaira::I0star: return "I0*";
    case Kodaira::Instar: return "I" + std::to_string(kodaira_index) + "*";
    case Kodaira::IVstar: return "IV*";
    case Kodaira::IIIstar: return "III*";
    case Kodaira::IIstar: return "II*";
  }
  return "?";
}

LocalData tate(const Weierstrass& w, std::uint64_t p) {
  Model e{to_int(w.a1), to_int(w.a2), to_int(w.a3), to_int(w.a4), to_int(w.a6)};
  const Int P = p;
  for (;;) {
    Invariants inv(e);
    const int n = val(inv.disc, p);
    if (n == 0) return finish(p, 0, Kodaira::I0, 1);

    // Move the singular point of the reduction to (0, 0).
    Int r, t;
    if (p == 2) {
      if (divides(P, inv.b2)) {
        r = modp(e.a4, 2);
        t = modp(r * (1 + e.a2 + e.a4) + e.a6, 2);
      } else {
        r = modp(e.a3, 2);
        t = modp(r + e.a4, 2);
      }
    } else if (p == 3) {
      r = divides(P, inv.b2) ? modp(-inv.b6, 3) : modp(-inv.b2 * inv.b4, 3);
      t = modp(e.a1 * r + e.a3, 3);
    } else {
      if (divides(P, inv.c4)) {
        r = -inv_mod(12, p) * inv.b2;
      } else {
        r = -inv_mod(12 * inv.c4, p) * (inv.c6 + inv.b2 * inv.c4);
      }
      t = -half_mod(p) * (e.a1 * r + e.a3);
      r = modp(r, p);
      t = modp(t, p);
    }
    e.transform(r, 0, t);

    if (!divides(P, inv.c4)) {
      bool split = quadratic_has_root(1, e.a1, -e.a2, p);
      int c = split ? n : (n % 2 == 1 ? 1 : 2);
      return finish(p, 1, Kodaira::In, c, n);
    }
    if (val(e.a6, p) < 2) return finish(p, n, Kodaira::II, 1);

    Invariants inv2(e);
    if (val(inv2.b8, p) < 3) return finish(p, n - 1, Kodaira::III, 2);
    if (val(inv2.b6, p) < 3) {
      bool root = quadratic_has_root(1, e.a3 / P, -e.a6 / (P * P), p);
      return finish(p, n - 2, Kodaira::IV, root ? 3 : 1);
    }

    // Now arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
    Int s;
    if (p == 2) {
      s = modp(e.a2, 2);
      t = 2 * Int(modp(e.a6 / 4, 2));
    } else {
      s = -e.a1 * half_mod(p);
      t = -e.a3 * half_mod(p);
    }
    e.transform(0, s, t);

    const Int p2 = P * P;
    const Int p3 = p2 * P;
    Int b = e.a2 / P;
    Int c = e.a4 / p2;
    Int d = e.a6 / p3;
    Int disc3 = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
    Int x = 3 * c - b * b;

    if (!divides(P, disc3)) {
      return finish(p, n - 4, Kodaira::I0star, 1 + cubic_root_count(b, c, d, p));
    }

    if (!divides(P, x)) {
      // Double root: move it to T = 0 and peel off I_m*.
      if (p == 2) {
        r = c;
      } else if (p == 3) {
        r = b * c;
      } else {
        r = (b * c - 9 * d) * inv_mod(2 * x, p);
      }
      r = P * Int(modp(r, p));
      e.transform(r, 0, 0);
      int ix = 3, iy = 3;
      Int mx = p2, my = p2;
      int cp = 0;
      while (cp == 0) {
        Int xa2 = e.a2 / P;
        Int xa3 = e.a3 / my;
        Int xa4 = e.a4 / (P * mx);
        Int xa6 = e.a6 / (mx * my);
        if (!divides(P, xa3 * xa3 + 4 * xa6)) {
          cp = quadratic_has_root(1, xa3, -xa6, p) ? 4 : 2;
          break;
        }
        t = p == 2 ? Int(my * xa6) : Int(my * modp(-xa3 * half_mod(p), p));
        e.transform(0, 0, t);
        my *= P;
        ++iy;
        xa2 = e.a2 / P;
        xa3 = e.a3 / my;
        xa4 = e.a4 / (P * mx);
        xa6 = e.a6 / (mx * my);
        if (!divides(P, xa4 * xa4 - 4 * xa2 * xa6)) {
          cp = quadratic_has_root(xa2, xa4, xa6, p) ? 4 : 2;
          break;
        }
        r = p == 2 ? Int(mx * modp(xa6 * xa2, 2)) : Int(mx * modp(-xa4 * inv_mod(2 * xa2, p), p));
        e.transform(r, 0, 0);
        mx *= P;
        ++ix;
      }
      return finish(p, n - ix - iy + 1, Kodaira::Instar, cp, ix + iy - 5);
    }

    // Triple root: move it to T = 0.
    if (p == 2) {
      r = b;
    } else if (p == 3) {
      r = -d;
    } else {
      r = -b * inv_mod(3, p);
    }
    r = P * Int(modp(r, p));
    e.transform(r, 0, 0);
    Int x3 = e.a3 / p2;
    Int x6 = e.a6 / (p2 * p2);
    if (!divides(P, x3 * x3 + 4 * x6)) {
      bool root = quadratic_has_root(1, x3, -x6, p);
      return finish(p, n - 6, Kodaira::IVstar, root ? 3 : 1);
    }
    t = p == 2 ? x6 : Int(x3 * half_mod(p));
    e.transform(0, 0, -p2 * t);
    if (!divides(p2 * p2, e.a4)) return finish(p, n - 7, Kodaira::IIIstar, 2);
    if (!divides(p3 * p3, e.a6)) return finish(p, n - 8, Kodaira::IIstar, 1);

    // Non-minimal: scale by u = p and start over.
    e.a1 /= P;
    e.a2 /= p2;
    e.a3 /= p3;
    e.a4 /= p2 * p2;
    e.a6 /= p3 * p3;
  }
}

TwistCurve curve_model(std::uint64_t m) {
  if (!is_cube_free(m)) {
    throw Error(ErrorKind::NotCubeFree, std::to_string(m) + " is not cube-free");
  }
  TwistCurve curve;
  curve.m = m;
  curve.a6 = checked_mul(-432, checked_mul(m, m));
  return curve;
}

int torsion_factor(std::uint64_t m) {
  if (m == 1) return 9;
  if (m == 2) return 4;
  return 1;
}

int tamagawa_local(std::uint64_t m, std::uint64_t p) {
  if (p == 3) {
    if (m % 3 == 0) return 1;
    switch (m % 9) {
      case 1:
      case 8: return 3;
      case 2:
      case 7: return 2;
      default: return 1;
    }
  }
  if (m % p != 0) return 1;
  return p % 3 == 1 ? 3 : 1;
}

std::vector<std::uint64_t> bad_primes(std::uint64_t m) {
  std::vector<std::uint64_t> out{3};
  for (auto [p, e] : factorize(m)) {
    if (p != 3) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t tamagawa_product(std::uint64_t m) {
  std::uint64_t product = 1;
  for (std::uint64_t p : bad_primes(m)) product *= tamagawa_local(m, p);
  return product;
}

double period(std::uint64_t m) {
  const long double base = kGammaOneThird * kGammaOneThird * kGammaOneThird /
                           (2.0L * std::numbers::pi_v<long double> * std::sqrt(3.0L));
  long double value = base / std::cbrt(static_cast<long double>(m));
  if (m % 9 == 0) value *= 3;
  return static_cast<double>(value);
}

LocalData local_data_tate(std::uint64_t m, std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NotBadPrime, std::to_string(p) + " is not prime");
  TwistCurve model = curve_model(m);
  LocalData local = tate(Weierstrass{0, 0, 0, 0, model.a6}, p);
  if (local.conductor_exponent == 0) {
    throw Error(ErrorKind::NotBadPrime,
                "E_" + std::to_string(m) + " has good reduction at " + std::to_string(p));
  }
  return local;
}

std::uint64_t conductor(std::uint64_t m) {
  const Weierstrass model{0, 0, 0, 0, curve_model(m).a6};
  std::uint64_t n = 1;
  for (std::uint64_t p : bad_primes(m)) {
    LocalData local = tate(model, p);
    for (int i = 0; i < local.conductor_exponent; ++i) {
      if (__builtin_mul_overflow(n, p, &n)) throw Error(ErrorKind::Overflow, "conductor");
    }
  }
  return n;
}

TwistCurve twist_curve(std::uint64_t m) {
  TwistCurve curve = curve_model(m);
  curve.conductor = 1;
  curve.tamagawa_product = 1;
  for (std::uint64_t p : bad_primes(m)) {
    LocalData local = tate(Weierstrass{0, 0, 0, 0, curve.a6}, p);
    if (local.conductor_exponent == 0) continue;
    for (int i = 0; i < local.conductor_exponent; ++i) {
      if (__builtin_mul_overflow(curve.conductor, p, &curve.conductor)) {
        throw Error(ErrorKind::Overflow, "conductor");
      }
    }
    curve.local_data.push_back(local);
  }
  // The BSD factor uses the closed-form Tamagawa numbers; Tate's values are
  // cross-checked against them in the test suite.
  curve.tamagawa_product = tamagawa_product(m);
  curve.period = period(m);
  curve.torsion_factor = torsion_factor(m);
  return curve;
}

}  // namespace cubictwist
