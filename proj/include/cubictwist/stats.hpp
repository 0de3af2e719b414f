#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cubictwist/scan.hpp"

namespace cubictwist {

/// Counts of some statistic on an ascending grid of bounds X.
struct CountSeries {
  std::vector<std::uint64_t> grid;
  std::vector<std::uint64_t> counts;
};

/// Exact quotient of two counts.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct Histogram {
  static constexpr double kStart = -10.0;
  static constexpr double kWidth = 0.1;
  static constexpr std::size_t kBins = 200;

  std::array<std::uint64_t, kBins> counts{};
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
  // Moments of the standardized sample, over- and underflow included.
  double mean = 0.0;
  double variance = 0.0;

  std::uint64_t total() const;
  double bin_left(std::size_t i) const { return kStart + kWidth * static_cast<double>(i); }
  void add(double value);
};

enum class HistogramKind { logL, sha_sqrt2, sha_sqrt3 };

struct PowerLogFit {
  double c = 0.0;
  double d = 0.0;
  double rms_residual = 0.0;
};

// Every query below requires X <= store.bound and throws RangeNotCovered otherwise.

// f(k, X): eps = +1, nonvanishing, |Sha| = k^2.
std::uint64_t count_sha(const ResultStore& store, std::uint64_t k, std::uint64_t x);
// g(X), or g*(X) when restricted to prime m.
std::uint64_t count_vanishing(const ResultStore& store, std::uint64_t x, bool primes_only);
// Number of cube-free m <= X with eps = +1.
std::uint64_t count_even(const ResultStore& store, std::uint64_t x);

// (1/6) X^{5/6} (log X)^{-5/8}; DomainError for X <= 1.
double watkins_reference(double x);
// X^{5/6} (log X)^r.
double powerlog_scale(double x, double r);

// f(X) / f(k, X); DivisionByZero when f(k, X) = 0.
Ratio sha_ratio(const ResultStore& store, std::uint64_t k, std::uint64_t x);

enum class Subset { primes, all_cubefree };

// Mean |Sha| over nonvanishing eps = +1 rows with m <= T; EmptySubset if none.
double delaunay_average(const ResultStore& store, std::uint64_t t, Subset subset);
double delaunay_normalized(const ResultStore& store, std::uint64_t t, Subset subset);

// 1 - prod_{j <= J} (1 - p^{1-2j}). With terms = 0 J is chosen so the
// truncation error is below 1e-12.
double cl_predicted(std::uint64_t p, unsigned terms = 0);

// Share of nonvanishing eps = +1 rows with p dividing |Sha|.
double divisibility_freq(const ResultStore& store, std::uint64_t p, std::uint64_t x, bool primes_only);

// Rows with m >= 3 only.
Histogram standardized_histogram(const ResultStore& store, HistogramKind kind);
// (v + log log m / 2) / sqrt(log log m).
double standardize(double v, double m);

// Least squares of log(count) - (5/6) log X against log log X. Throws
// InsufficientData with fewer than three positive points or when the RMS
// residual exceeds max_rms.
PowerLogFit fit_powerlog(const CountSeries& series, double max_rms = 0.1);

// 1000 * 2^i up to the bound, with the bound itself appended.
std::vector<std::uint64_t> count_grid(std::uint64_t bound, std::uint64_t start = 1000);

CountSeries sha_series(const ResultStore& store, std::uint64_t k);
CountSeries vanishing_series(const ResultStore& store, bool primes_only);

// Plot-ready CSV series. Reports: ratio-fg, gstar-vs-watkins, g-normalized,
// Fkx, delaunay, divisibility, hist-logL, hist-sha2, hist-sha3.
struct ReportParams {
  std::uint64_t k = 2;
  std::uint64_t p = 3;
  bool primes_only = false;
};

bool is_twist_report(std::string_view name);
std::string twist_report(const ResultStore& store, std::string_view name, const ReportParams& params);
std::string histogram_csv(const Histogram& h);

}  // namespace cubictwist
