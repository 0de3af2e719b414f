#include <cmath>
#include <numbers>

#include "cubictwist/errors.hpp"
#include "cubictwist/stats.hpp"
#include "doctest.h"

using namespace cubictwist;

namespace {

TwistResult row(std::uint64_t m, RowKind kind, std::uint64_t sha = 0, bool prime = false) {
  TwistResult r;
  r.m = m;
  r.epsilon = kind == RowKind::odd ? -1 : 1;
  r.kind = kind;
  r.sha = sha;
  r.is_prime_m = prime;
  if (kind == RowKind::order || kind == RowKind::vanishing) {
    r.l1_value = kind == RowKind::order ? 1.0 : 0.0;
    r.l1_error = 1e-9;
  }
  return r;
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

TEST_CASE("counts on synthetic stores") {
  const ResultStore empty;
  CHECK(count_sha(empty, 1, 0) == 0);
  CHECK(kind_of([&] { count_sha(empty, 1, 1); }) == ErrorKind::RangeNotCovered);

  const ResultStore two{2, {row(1, RowKind::order, 1), row(2, RowKind::order, 4)}};
  CHECK(count_sha(two, 2, 2) == 1);
  CHECK(count_sha(two, 1, 2) == 1);
  CHECK(count_sha(two, 2, 1) == 0);

  const ResultStore mixed{5,
                          {row(1, RowKind::order, 1), row(2, RowKind::vanishing, 0, true),
                           row(3, RowKind::vanishing, 0, true), row(4, RowKind::vanishing),
                           row(5, RowKind::odd, 0, true)}};
  CHECK(count_vanishing(mixed, 5, false) == 3);
  CHECK(count_vanishing(mixed, 5, true) == 2);
  CHECK(count_vanishing(mixed, 2, false) == 1);
  CHECK(count_even(mixed, 5) == 4);
}

TEST_CASE("watkins_reference") {
  CHECK(watkins_reference(std::numbers::e) == doctest::Approx(std::exp(5.0 / 6.0) / 6.0).epsilon(1e-14));
  CHECK(kind_of([] { watkins_reference(1.0); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { watkins_reference(0.5); }) == ErrorKind::DomainError);
  double previous = watkins_reference(3.0);
  for (double x = 4.0; x < 1e9; x *= 1.5) {
    const double v = watkins_reference(x);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("sha_ratio is exact") {
  const ResultStore s{4,
                      {row(1, RowKind::order, 1), row(2, RowKind::order, 1), row(3, RowKind::order, 4),
                       row(4, RowKind::order, 1)}};
  CHECK(sha_ratio(s, 2, 4) == Ratio{3, 1});
  CHECK(kind_of([&] { sha_ratio(s, 3, 4); }) == ErrorKind::DivisionByZero);
}

TEST_CASE("delaunay averages") {
  const ResultStore s{3, {row(1, RowKind::order, 1), row(2, RowKind::order, 4, true), row(3, RowKind::order, 9, true)}};
  CHECK(delaunay_average(s, 3, Subset::all_cubefree) == doctest::Approx(14.0 / 3.0));
  CHECK(delaunay_average(s, 3, Subset::primes) == doctest::Approx(6.5));
  CHECK(delaunay_normalized(s, 3, Subset::all_cubefree) == doctest::Approx(14.0 / 3.0 / std::sqrt(3.0)));
  CHECK(kind_of([&] { delaunay_average(s, 1, Subset::primes); }) == ErrorKind::EmptySubset);
}

TEST_CASE("Cohen-Lenstra predictions") {
  // 30-digit mpmath evaluations of the product.
  CHECK(std::fabs(cl_predicted(2) - 0.580577558204892402) < 1e-12);
  CHECK(std::fabs(cl_predicted(3) - 0.360995423362522220) < 1e-12);
  CHECK(std::fabs(cl_predicted(5) - 0.206664529941882078) < 1e-12);
  CHECK(std::fabs(cl_predicted(7) - 0.145408011419037639) < 1e-12);
  CHECK(cl_predicted(5, 1) == doctest::Approx(0.2));
  CHECK(cl_predicted(2, 2) == doctest::Approx(1.0 - 0.5 * 0.875));
  CHECK(std::fabs(cl_predicted(2) - cl_predicted(2, 60)) < 1e-12);
}

TEST_CASE("divisibility frequency") {
  const ResultStore ones{3, {row(1, RowKind::order, 1), row(2, RowKind::order, 1), row(3, RowKind::order, 1)}};
  CHECK(divisibility_freq(ones, 2, 3, false) == 0.0);
  const ResultStore s{3, {row(1, RowKind::order, 1), row(2, RowKind::order, 4, true), row(3, RowKind::order, 9, true)}};
  CHECK(divisibility_freq(s, 2, 3, false) == doctest::Approx(1.0 / 3.0));
  CHECK(divisibility_freq(s, 3, 3, true) == doctest::Approx(0.5));
  CHECK(kind_of([&] { divisibility_freq(ResultStore{}, 2, 0, false); }) == ErrorKind::EmptySubset);
}

TEST_CASE("standardized histogram") {
  // m = e^e gives log log m = 1; v = -1/2 standardizes to 0.
  CHECK(standardize(-0.5, std::exp(std::numbers::e)) == doctest::Approx(0.0));

  ResultStore s;
  s.bound = 100;
  for (std::uint64_t m = 1; m <= 100; ++m) s.rows.push_back(row(m, RowKind::order, m % 2 ? 1 : 4));
  s.rows.push_back(row(101, RowKind::vanishing));
  const Histogram h = standardized_histogram(s, HistogramKind::sha_sqrt2);
  CHECK(h.total() == 98);  // m = 1, 2 and the vanishing row are excluded

  Histogram manual;
  manual.add(0.0);
  manual.add(0.05);
  manual.add(-10.0);
  manual.add(-10.01);
  manual.add(10.0);
  manual.add(9.95);
  CHECK(manual.counts[100] == 2);
  CHECK(manual.counts[0] == 1);
  CHECK(manual.counts[199] == 1);
  CHECK(manual.underflow == 1);
  CHECK(manual.overflow == 1);
  CHECK(manual.total() == 6);

  const std::string csv = histogram_csv(manual);
  CHECK(csv.rfind("bin_left,count\n-inf,1\n-10,1\n", 0) == 0);
  CHECK(csv.find("\n0,2\n") != std::string::npos);
  CHECK(csv.find("\n0.3,0\n") != std::string::npos);

  CHECK(kind_of([] { standardized_histogram(ResultStore{}, HistogramKind::logL); }) == ErrorKind::EmptySubset);
}

TEST_CASE("fit_powerlog") {
  CountSeries exact;
  for (double x = 1e3; x <= 1e9; x *= 2) {
    exact.grid.push_back(static_cast<std::uint64_t>(x));
    // Large scale keeps integer rounding far below the tolerance.
    exact.counts.push_back(static_cast<std::uint64_t>(std::llround(1e6 * powerlog_scale(x, 1.0))));
  }
  const PowerLogFit fit = fit_powerlog(exact);
  CHECK(std::fabs(fit.c - 1e6) / 1e6 < 1e-6);
  CHECK(std::fabs(fit.d - 1.0) < 1e-6);

  CountSeries constant;
  for (std::uint64_t x = 1000; x <= 1'000'000'000; x *= 2) {
    constant.grid.push_back(x);
    constant.counts.push_back(500);
  }
  CHECK(kind_of([&] { fit_powerlog(constant); }) == ErrorKind::InsufficientData);

  CountSeries short_series{{1000, 2000}, {5, 6}};
  CHECK(kind_of([&] { fit_powerlog(short_series); }) == ErrorKind::InsufficientData);
}

TEST_CASE("count grid") {
  CHECK(count_grid(0).empty());
  CHECK(count_grid(500) == std::vector<std::uint64_t>{500});
  CHECK(count_grid(5000) == std::vector<std::uint64_t>{1000, 2000, 4000, 5000});
  CHECK(count_grid(4000) == std::vector<std::uint64_t>{1000, 2000, 4000});
}

TEST_CASE("counts conserve on a real scan") {
  const ResultStore s = scan_range(2500, ScanConfig{});
  for (auto x : count_grid(s.bound, 100)) {
    std::uint64_t total = count_vanishing(s, x, false);
    for (std::uint64_t k = 1; k * k <= 1'000'000; ++k) total += count_sha(s, k, x);
    CHECK(total == count_even(s, x));
    CHECK(count_vanishing(s, x, true) <= count_vanishing(s, x, false));
  }
  const CountSeries f1 = sha_series(s, 1);
  for (std::size_t i = 1; i < f1.counts.size(); ++i) CHECK(f1.counts[i] >= f1.counts[i - 1]);

  const std::string fkx = twist_report(s, "Fkx", {.k = 2});
  CHECK(fkx.rfind("X,F\n", 0) == 0);
  for (auto name : {"ratio-fg", "gstar-vs-watkins", "g-normalized", "delaunay", "divisibility", "hist-logL",
                    "hist-sha2", "hist-sha3"}) {
    CHECK(is_twist_report(name));
    CHECK(twist_report(s, name, {}) == twist_report(s, name, {}));
  }
  CHECK(kind_of([&] { twist_report(s, "nope", {}); }) == ErrorKind::DomainError);
}
