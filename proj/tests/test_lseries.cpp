#include <cmath>
#include <numeric>
#include <thread>

#include "cubictwist/errors.hpp"
#include "cubictwist/lseries.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cubictwist;

// L(E_1, 1) from an mpmath evaluation of the series with point-count
// coefficients (1500 terms, 30 digits).
constexpr double kLE1 = 0.588879583428483;

TEST_CASE("ap_good examples") {
  CHECK(ap_good(1, 5) == 0);
  CHECK(oracle::ap_by_count(1, 7) == -1);
  CHECK(ap_good(1, 7) == -1);
  CHECK(oracle::ap_by_count(1, 13) == 5);
  CHECK(ap_good(1, 13) == 5);
  CHECK_THROWS_AS(ap_good(1, 3), Error);
  CHECK_THROWS_AS(ap_good(7, 7), Error);
  CHECK_THROWS_AS(ap_good(1, 9), Error);
}

TEST_CASE("ap_good matches point counts, m <= 50, p < 1000, with Hasse bound") {
  for (std::uint64_t m = 1; m <= 50; ++m) {
    if (!is_cube_free(m)) continue;
    for (std::uint64_t p : oracle::primes_up_to(1000)) {
      if (p == 3 || m % p == 0) continue;
      if (p == 2) continue;  // the short model is not minimal at 2
      const std::int64_t ap = ap_good(m, p);
      CHECK(ap == oracle::ap_by_count(m, p));
      CHECK(static_cast<double>(ap * ap) <= 4.0 * static_cast<double>(p));
    }
  }
}

TEST_CASE("coefficients examples") {
  auto t = coefficients(1, 100);
  CHECK(t[1] == 1);
  CHECK(t[7] == -1);
  CHECK(t[49] == -6);
  for (std::uint64_t m : {1, 2, 5, 7, 10, 11}) {
    CHECK(coefficients(m, 20)[15] == 0);
  }
  auto empty = coefficients(3, 0);
  CHECK(empty.values.size() == 1);
}

TEST_CASE("coefficients equal the Euler product expansion up to 10^4") {
  for (std::uint64_t m : {1, 2, 3, 5}) {
    const auto expected = oracle::euler_coefficients(m, 10000);
    const auto got = coefficients(m, 10000);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
      if (got[n] != expected[n]) {
        FAIL_CHECK("m=" << m << " n=" << n << " got " << got[n] << " expected " << expected[n]);
        break;
      }
    }
  }
}

TEST_CASE("coefficients are multiplicative") {
  auto t = coefficients(10, 5000);
  for (std::uint64_t u = 1; u < 70; ++u) {
    for (std::uint64_t v = 1; v < 70; ++v) {
      if (std::gcd(u, v) == 1) CHECK(t[u * v] == t[u] * t[v]);
    }
  }
}

TEST_CASE("series_sum and tail bounds") {
  const auto zero = coefficients(1, 0);
  CertifiedValue s0 = series_sum(zero, 27, 1.0);
  CHECK(s0.value == 0.0);
  CHECK(s0.error_bound == doctest::Approx(tail_bound(0, 27, 1.0)));

  double previous = 1e300;
  for (std::uint64_t m_cut : {10, 20, 40, 80, 160}) {
    CertifiedValue s = series_sum(coefficients(1, m_cut), 27, 1.0);
    CHECK(s.error_bound <= previous);
    CHECK(std::fabs(2 * s.value - kLE1) <= 2 * s.error_bound + 1e-14);
    previous = s.error_bound;
  }
  CertifiedValue s = series_sum(coefficients(1, 200), 27, 1.0);
  CHECK(2 * s.value == doctest::Approx(kLE1).epsilon(1e-13));
  CHECK_THROWS_AS(series_sum(coefficients(1, 5), 27, 1.0, 1e-6), Error);
}

TEST_CASE("cutoff_for gives the smallest adequate cutoff") {
  for (std::uint64_t n : {27, 972, 1000000}) {
    for (double tol : {1e-4, 1e-8}) {
      std::uint64_t c = cutoff_for(n, 1.0, tol);
      CHECK(tail_bound(c, n, 1.0) <= tol);
      if (c > 0) CHECK(tail_bound(c - 1, n, 1.0) > tol);
    }
  }
}

TEST_CASE("root number examples") {
  CHECK(root_number(1) == 1);
  CHECK(root_number(2) == 1);
  CHECK(root_number(6) == -1);
  // Doubling the cutoff leaves the sign unchanged.
  for (std::uint64_t m : {1, 2, 6, 7, 15, 17, 22, 65, 100}) {
    const std::uint64_t n = conductor(m);
    const std::uint64_t c = cutoff_for(n, kRootNumberMinT, 1e-7);
    int s1 = root_number_from_table(coefficients(m, c), n).sign;
    int s2 = root_number_from_table(coefficients(m, 2 * c), n).sign;
    CHECK(s1 == s2);
  }
}

TEST_CASE("central value") {
  CertifiedValue l = central_value(1);
  CHECK(std::fabs(l.value - kLE1) <= l.error_bound);
  CHECK(l.error_bound <= 1e-4);
  CHECK_THROWS_AS(central_value(6), Error);
  try {
    central_value(6);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OddSign);
  }
  // Intervals from different cutoffs overlap, and doubling never widens them.
  for (std::uint64_t m : {2, 10, 19, 37}) {
    const std::uint64_t n = conductor(m);
    const std::uint64_t c = cutoff_for(n, 1.0, 1e-3);
    CertifiedValue a = central_value_from_table(coefficients(m, c), n, 0.0);
    CertifiedValue b = central_value_from_table(coefficients(m, 2 * c), n, 0.0);
    CHECK(b.error_bound <= a.error_bound);
    CHECK(std::fabs(a.value - b.value) <= a.error_bound + b.error_bound);
  }
}

TEST_CASE("prime cache grows and snapshots stay valid") {
  PrimeCache cache;
  auto small = cache.ensure(1000);
  CHECK(small->limit() >= 1000);
  std::vector<std::thread> workers;
  for (int i = 0; i < 4; ++i) {
    workers.emplace_back([&cache, i] { cache.ensure(2000 + 3000 * i); });
  }
  for (auto& w : workers) w.join();
  auto big = cache.snapshot();
  CHECK(big->limit() >= 11000);
  CHECK(small->limit() >= 1000);
  CHECK(small->smallest_factor(997) == 997);
  CHECK(coefficients(5, 1000, *small).values == coefficients(5, 1000, *big).values);
}
