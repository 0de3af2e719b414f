#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubictwist/arith.hpp"

namespace cubictwist {

// Gamma(1/3) to 36 significant digits.
inline constexpr long double kGammaOneThird = 2.67893853470774763365569294097467764L;

enum class Kodaira { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };

struct LocalData {
  std::uint64_t p = 0;
  int conductor_exponent = 0;
  Kodaira kodaira = Kodaira::I0;
  int kodaira_index = 0;  // n for I_n and I_n*
  int tamagawa = 1;

  std::string kodaira_label() const;
};

/// E_m : x^3 + y^3 = m, in the model y^2 = x^3 + a6 with a6 = -432 m^2.
struct TwistCurve {
  std::uint64_t m = 0;
  i128 a6 = 0;
  std::uint64_t conductor = 0;
  std::vector<LocalData> local_data;
  double period = 0.0;
  std::uint64_t tamagawa_product = 0;
  int torsion_factor = 0;
};

// Model fields only (m, a6). Throws NotCubeFree.
TwistCurve curve_model(std::uint64_t m);

// Every field populated; local data comes from Tate's algorithm.
TwistCurve twist_curve(std::uint64_t m);

int torsion_factor(std::uint64_t m);

// Closed-form Tamagawa numbers for this family.
int tamagawa_local(std::uint64_t m, std::uint64_t p);
std::uint64_t tamagawa_product(std::uint64_t m);

// Real period C_inf(E_m) from the Gamma(1/3) closed form.
double period(std::uint64_t m);

/// General Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct Weierstrass {
  i128 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
};

// Tate's algorithm at the prime p. Returns conductor exponent 0 at good primes.
LocalData tate(const Weierstrass& e, std::uint64_t p);

// Tate's algorithm for E_m at p; throws NotBadPrime if E_m has good reduction.
LocalData local_data_tate(std::uint64_t m, std::uint64_t p);

// Primes where E_m may have bad reduction: 3 and the primes dividing m.
std::vector<std::uint64_t> bad_primes(std::uint64_t m);

std::uint64_t conductor(std::uint64_t m);

}  // namespace cubictwist
