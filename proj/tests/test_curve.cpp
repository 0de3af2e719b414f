#include <cmath>

#include "cubictwist/curve.hpp"
#include "cubictwist/errors.hpp"
#include "doctest.h"

using namespace cubictwist;

TEST_CASE("curve_model") {
  CHECK(curve_model(1).a6 == -432);
  CHECK(curve_model(2).a6 == -1728);
  CHECK_THROWS_AS(curve_model(8), Error);
  CHECK_THROWS_AS(curve_model(54), Error);
  CHECK_THROWS_AS(curve_model(0), Error);
  try {
    curve_model(16);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCubeFree);
  }
}

TEST_CASE("torsion factor") {
  CHECK(torsion_factor(1) == 9);
  CHECK(torsion_factor(2) == 4);
  CHECK(torsion_factor(35) == 1);
}

TEST_CASE("closed-form Tamagawa numbers") {
  CHECK(tamagawa_local(35, 2) == 1);
  CHECK(tamagawa_local(7, 7) == 3);
  CHECK(tamagawa_local(2, 3) == 2);
  CHECK(tamagawa_local(10, 3) == 3);  // 10 = 1 mod 9
  CHECK(tamagawa_local(13, 3) == 1);  // 13 = 4 mod 9
  CHECK(tamagawa_local(6, 3) == 1);
  CHECK(tamagawa_local(5, 5) == 1);
  CHECK(tamagawa_product(1) == 3);
  CHECK(tamagawa_product(2) == 2);
  CHECK(tamagawa_product(3) == 1);
  CHECK(tamagawa_product(7 * 13) == 3 * 3 * 3);  // 91 = 1 mod 9
}

TEST_CASE("period closed form") {
  CHECK(period(1) == doctest::Approx(1.76663875028544995731).epsilon(1e-14));
  CHECK(period(8) / period(1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(period(9) / period(1) == doctest::Approx(3.0 / std::cbrt(9.0)).epsilon(1e-14));
  // period * cbrt(m) takes one value when 9 does not divide m, three times it otherwise.
  for (std::uint64_t m : {2, 5, 10, 17, 100, 4999}) {
    CHECK(period(m) * std::cbrt(static_cast<double>(m)) == doctest::Approx(period(1)).epsilon(1e-13));
  }
  for (std::uint64_t m : {9, 18, 45, 153}) {
    CHECK(period(m) * std::cbrt(static_cast<double>(m)) == doctest::Approx(3 * period(1)).epsilon(1e-13));
  }
}

TEST_CASE("Tate's algorithm on E_m") {
  auto d13 = local_data_tate(1, 3);
  CHECK(d13.conductor_exponent == 3);
  CHECK(conductor(1) == 27);
  CHECK(local_data_tate(7, 7).tamagawa == 3);
  CHECK(local_data_tate(7, 7).conductor_exponent == 2);
  CHECK_THROWS_AS(local_data_tate(5, 2), Error);
  CHECK_THROWS_AS(local_data_tate(5, 7), Error);
  CHECK(conductor(2) == 36);
  CHECK(conductor(6) == 972);
  for (std::uint64_t p : {5, 7, 11, 13, 101}) {
    CHECK(conductor(p * p) % (p * p) == 0);
    CHECK(conductor(p * p) % (p * p * p) != 0);
  }
}

TEST_CASE("Tate's algorithm on textbook curves") {
  // 11a1: y^2 + y = x^3 - x^2 - 10x - 20, split I5 at 11.
  auto d11 = tate(Weierstrass{0, -1, 1, -10, -20}, 11);
  CHECK(d11.kodaira == Kodaira::In);
  CHECK(d11.kodaira_index == 5);
  CHECK(d11.tamagawa == 5);
  CHECK(d11.conductor_exponent == 1);
  // 37a1: y^2 + y = x^3 - x is good at 2 and I1 at 37.
  CHECK(tate(Weierstrass{0, 0, 1, -1, 0}, 2).conductor_exponent == 0);
  CHECK(tate(Weierstrass{0, 0, 1, -1, 0}, 37).conductor_exponent == 1);
  // y^2 = x^3 + 1 (36a1): IV at 2 with c = 3, conductor 2^2 3^2.
  auto d2 = tate(Weierstrass{0, 0, 0, 0, 1}, 2);
  CHECK(d2.conductor_exponent == 2);
  CHECK(tate(Weierstrass{0, 0, 0, 0, 1}, 3).conductor_exponent == 2);
  // y^2 = x^3 - x (32a2): conductor 2^5.
  CHECK(tate(Weierstrass{0, 0, 0, -1, 0}, 2).conductor_exponent == 5);
}

TEST_CASE("twist_curve populates every field") {
  TwistCurve c = twist_curve(10);
  CHECK(c.m == 10);
  CHECK(c.a6 == -43200);
  CHECK(c.torsion_factor == 1);
  CHECK(c.tamagawa_product == tamagawa_product(10));
  CHECK(c.conductor == conductor(10));
  CHECK(c.local_data.size() == 3);
  for (const auto& l : c.local_data) {
    CHECK(l.conductor_exponent >= 2);
    CHECK(l.tamagawa == tamagawa_local(10, l.p));
  }
}
