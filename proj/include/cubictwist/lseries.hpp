#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "cubictwist/curve.hpp"
#include "cubictwist/eisenstein.hpp"

namespace cubictwist {

/// A real number together with a rigorous bound on its absolute error.
struct CertifiedValue {
  double value = 0.0;
  double error_bound = 0.0;

  double lower() const { return value - error_bound; }
  double upper() const { return value + error_bound; }
};

// Per-prime data for p = 1 (mod 3): the primary prime a + b w over p and the
// image of w in F_p. Independent of the twist parameter.
struct SplitPrimeData {
  std::int32_t a = 0;
  std::int32_t b = 0;
  std::uint32_t omega = 0;
};

/// Smallest-prime-factor sieve plus split-prime data up to a fixed limit.
/// Immutable after construction.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::uint32_t smallest_factor(std::uint64_t n) const { return spf_[n]; }
  // p must be a prime = 1 (mod 3) not above limit().
  const SplitPrimeData& split(std::uint64_t p) const { return split_[p / 6]; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<SplitPrimeData> split_;
};

/// Grow-only shared PrimeTable. Readers hold a snapshot; growth swaps in a
/// larger table, so snapshots already handed out stay valid.
class PrimeCache {
 public:
  PrimeCache() = default;
  explicit PrimeCache(std::uint64_t initial_limit) { ensure(initial_limit); }

  std::shared_ptr<const PrimeTable> ensure(std::uint64_t limit);
  std::shared_ptr<const PrimeTable> snapshot() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const PrimeTable> table_;
};

// a_p(E_m) for a good prime p (p not dividing 3m). Throws BadPrime.
std::int64_t ap_good(std::uint64_t m, std::uint64_t p);

// Same value from cached split-prime data; p must be good for m.
std::int64_t ap_from_split(std::uint64_t m, std::uint64_t p, const SplitPrimeData& split);

struct CoefficientTable {
  std::uint64_t m = 0;
  std::uint64_t limit = 0;
  std::vector<std::int64_t> values;  // values[n] = a_m(n), values[0] unused

  std::int64_t operator[](std::uint64_t n) const { return values[n]; }
};

CoefficientTable coefficients(std::uint64_t m, std::uint64_t limit, const PrimeTable& primes);
CoefficientTable coefficients(std::uint64_t m, std::uint64_t limit);

// Bound on sum_{n>M} |a(n)|/n exp(-2 pi n t / sqrt(N)), using |a(n)|/n <= 2.
double tail_bound(std::uint64_t cutoff, std::uint64_t conductor, double t);

// Smallest cutoff whose tail bound is at most tolerance.
std::uint64_t cutoff_for(std::uint64_t conductor, double t, double tolerance);

// S(t) = sum_{n <= M} a(n)/n exp(-2 pi n t / sqrt(N)) over the whole table.
// Throws CutoffTooSmall when a tolerance is given and the bound exceeds it.
CertifiedValue series_sum(const CoefficientTable& table, std::uint64_t conductor, double t,
                          double tolerance = 0.0);

// Several S(t) in one pass over the table.
std::vector<CertifiedValue> series_sums(const CoefficientTable& table, std::uint64_t conductor,
                                        std::span<const double> ts);

struct RootNumberPolicy {
  double tail_tolerance = 1e-7;
  double defect_tolerance = 1e-5;
  double separation = 10.0;
  int escalations = 2;
  double escalation_factor = 1e-3;
};

struct RootNumberResult {
  int sign = 0;
  // Worst-case functional-equation defects over t in {1.1, 1.3}, with the
  // summed error bounds of the sums involved.
  double defect_plus = 0.0;
  double defect_minus = 0.0;
  double error = 0.0;
};

// Evaluation points used by the functional-equation test, and the smallest t
// among them (it sets the cutoff).
inline constexpr double kRootNumberT1 = 1.1;
inline constexpr double kRootNumberT2 = 1.3;
inline constexpr double kRootNumberMinT = 1.0 / kRootNumberT2;

// Decides the sign from an existing table; throws AmbiguousSign.
RootNumberResult root_number_from_table(const CoefficientTable& table, std::uint64_t conductor,
                                        const RootNumberPolicy& policy = {});

// Self-contained sign determination with cutoff escalation.
int root_number(std::uint64_t m, const RootNumberPolicy& policy = {});

// Target absolute error for L(E_m,1): min(cap, delta/4) with the 1% rounding
// margin expressed in L-units.
double central_tolerance(const TwistCurve& curve, double cap = 1e-4);

// L(E_m,1) = 2 S(1); throws CutoffTooSmall if the bound exceeds tolerance.
CertifiedValue central_value_from_table(const CoefficientTable& table, std::uint64_t conductor,
                                        double tolerance);

// Throws OddSign when the root number is -1.
CertifiedValue central_value(std::uint64_t m);

}  // namespace cubictwist
