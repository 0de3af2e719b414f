#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cubictwist/arith.hpp"
#include "cubictwist/classnum.hpp"
#include "cubictwist/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cubictwist;

namespace {

// (a/p) for a prime p via Euler's criterion or the definition at 2.
int symbol_at_prime(std::int64_t a, std::uint64_t p) {
  if (p == 2) {
    const std::int64_t r = ((a % 8) + 8) % 8;
    if (r % 2 == 0) return 0;
    return r == 1 || r == 7 ? 1 : -1;
  }
  const std::int64_t r = ((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
  if (r == 0) return 0;
  std::uint64_t acc = 1;
  for (std::uint64_t e = 0; e < (p - 1) / 2; ++e) acc = acc * static_cast<std::uint64_t>(r) % p;
  return acc == 1 ? 1 : -1;
}

int brute_kronecker(std::int64_t a, std::uint64_t n) {
  int result = 1;
  for (std::uint64_t p = 2; n > 1; ++p) {
    while (n % p == 0) {
      result *= symbol_at_prime(a, p);
      n /= p;
    }
  }
  return result;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("kronecker matches residue brute force") {
  for (std::int64_t a = -60; a < 500; ++a) {
    for (std::uint64_t n = 1; n < 500; ++n) CHECK(kronecker(a, n) == brute_kronecker(a, n));
  }
  CHECK(kind_of([] { kronecker(3, 0); }) == ErrorKind::DomainError);
}

TEST_CASE("regulator examples") {
  CHECK(regulator(5) == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-14));
  CHECK(regulator(8) == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-14));
  CHECK(fundamental_unit(5).norm == -1);
  CHECK(fundamental_unit(12).norm == 1);  // 2 + sqrt 3
  CHECK(regulator(12) == doctest::Approx(std::log(2 + std::sqrt(3.0))).epsilon(1e-14));
  // 1520 + 273 sqrt 31 has norm +1.
  CHECK(regulator(124) == doctest::Approx(std::log(1520 + 273 * std::sqrt(31.0))).epsilon(1e-12));
}

TEST_CASE("unit norms agree with the form-cycle oracle") {
  for (std::uint64_t d = 2; d <= 3000; ++d) {
    if (!is_square_free(d)) continue;
    const std::uint64_t disc = fundamental_discriminant(d);
    CHECK(fundamental_unit(disc).norm == oracle::fundamental_unit_norm(static_cast<std::int64_t>(disc)));
  }
}

TEST_CASE("dirichlet_L1 properties") {
  // h(5) = 1 closes the loop with the regulator.
  CHECK(std::sqrt(5.0) * dirichlet_L1(5) / (2 * regulator(5)) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t disc : {5, 8, 12, 13, 40, 229, 316}) {
    int sum = 0;
    for (std::uint64_t a = 1; a < disc; ++a) {
      const int chi = kronecker(static_cast<std::int64_t>(disc), a);
      sum += chi;
      if (std::gcd(a, disc) > 1) CHECK(chi == 0);
    }
    CHECK(sum == 0);
    CHECK(static_cast<double>(dirichlet_L1_extended(disc)) == doctest::Approx(dirichlet_L1(disc)).epsilon(1e-12));
  }
}

TEST_CASE("class_number examples") {
  CHECK(class_number(5).h == 1);
  CHECK(class_number(10).h == 2);
  CHECK(class_number(2).h == 1);
  CHECK(class_number(79).h == 3);
  CHECK(class_number(10).D == 40);
  CHECK(class_number(13).D == 13);
  CHECK(kind_of([] { class_number(12); }) == ErrorKind::NotSquareFree);
  CHECK(kind_of([] { class_number(1); }) == ErrorKind::NotSquareFree);
}

TEST_CASE("class numbers match the form-class oracle for d <= 2000") {
  for (std::uint64_t d = 2; d <= 2000; ++d) {
    if (!is_square_free(d)) continue;
    const auto rec = class_number(d);
    CHECK(rec.h == oracle::wide_class_number(static_cast<std::int64_t>(rec.D)));
  }
}

TEST_CASE("class numbers match the fixture file") {
  std::ifstream in(CUBICTWIST_FIXTURE_DIR "/classnum_2000.csv");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  CHECK(line == "d,D,h");
  const ClassStore store = classnum_range(2000, 2);
  std::size_t i = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::uint64_t d, disc, h;
    char comma;
    fields >> d >> comma >> disc >> comma >> h;
    REQUIRE(i < store.rows.size());
    CHECK(store.rows[i].d == d);
    CHECK(store.rows[i].D == disc);
    CHECK(store.rows[i].h == h);
    ++i;
  }
  CHECK(i == store.rows.size());
}

TEST_CASE("class statistics") {
  const ClassStore synthetic{5, {{2, 8, 0.88, 0.6, 1}, {3, 12, 1.3, 0.7, 1}, {5, 5, 0.48, 0.4, 1}}};
  CHECK(count_class(synthetic, 1, 5) == 3);
  CHECK(kind_of([&] { count_class(synthetic, 1, 6); }) == ErrorKind::RangeNotCovered);
  CHECK(kind_of([&] { ratio_H(synthetic, 2, 5); }) == ErrorKind::DivisionByZero);

  const ClassStore store = classnum_range(3000);
  std::uint64_t squarefree = 0;
  for (std::uint64_t d = 2; d <= 3000; ++d) {
    bool ok = true;
    for (std::uint64_t k = 2; k * k <= d; ++k) ok = ok && d % (k * k) != 0;
    squarefree += ok;
  }
  CHECK(store.rows.size() == squarefree);
  CHECK(count_squarefree(store, 3000) == squarefree);
  for (auto x : count_grid(store.bound, 100)) {
    CHECK(ratio_H(store, 1, x) == Ratio{count_class(store, 1, x), count_class(store, 1, x)});
    std::uint64_t total = 0;
    for (std::uint64_t k = 1; k <= 64; ++k) total += count_class(store, k, x);
    CHECK(total == count_squarefree(store, x));
  }
  CHECK(parse_class_store(class_store_csv(store)).rows == store.rows);
  CHECK(parse_class_store(class_store_csv(store)).bound == 3000);
  CHECK(class_store_csv(classnum_range(3000, 3)) == class_store_csv(store));
  CHECK(class_report(store, "Hkx", {.k = 2}).rfind("X,H\n", 0) == 0);
  CHECK(class_report(store, "h1-normalized", {}).rfind("X,h1,h1_r0,h1_r1\n", 0) == 0);
}
