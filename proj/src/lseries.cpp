#include "cubictwist/lseries.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cubictwist/errors.hpp"

namespace cubictwist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitRoundoff = 0x1p-53;
constexpr std::uint64_t kWeightRefresh = std::uint64_t{1} << 16;

// -Tr(u * pi) for u = 1, w, w^2 with pi = a + b w.
std::int64_t twisted_trace(std::int64_t a, std::int64_t b, CubicSymbol unit) {
  switch (unit) {
    case CubicSymbol::one: return -(2 * a - b);
    case CubicSymbol::omega: return a + b;
    case CubicSymbol::omega2: return a - 2 * b;
    case CubicSymbol::zero: break;
  }
  return 0;
}

// Neumaier's variant of compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit >= UINT32_MAX) throw Error(ErrorKind::Overflow, "prime table limit");
  spf_.assign(limit + 1, 0);
  split_.assign(limit / 6 + 1, SplitPrimeData{});
  std::vector<std::uint32_t> primes;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf_[n] == 0) {
      spf_[n] = static_cast<std::uint32_t>(n);
      primes.push_back(static_cast<std::uint32_t>(n));
    }
    for (std::uint32_t p : primes) {
      if (p > spf_[n] || n * p > limit) break;
      spf_[n * p] = p;
    }
  }
  for (std::uint32_t p : primes) {
    if (p % 3 != 1) continue;
    EisensteinInt pi = primary_prime(p);
    split_[p / 6] = SplitPrimeData{static_cast<std::int32_t>(pi.a), static_cast<std::int32_t>(pi.b),
                                   static_cast<std::uint32_t>(omega_mod(pi, p))};
  }
}

std::shared_ptr<const PrimeTable> PrimeCache::ensure(std::uint64_t limit) {
  std::lock_guard lock(mutex_);
  if (!table_ || table_->limit() < limit) {
    std::uint64_t target = table_ ? std::max(limit, table_->limit() + table_->limit() / 2) : limit;
    table_ = std::make_shared<const PrimeTable>(std::max<std::uint64_t>(target, 16));
  }
  return table_;
}

std::shared_ptr<const PrimeTable> PrimeCache::snapshot() const {
  std::lock_guard lock(mutex_);
  return table_;
}

std::int64_t ap_from_split(std::uint64_t m, std::uint64_t p, const SplitPrimeData& split) {
  if (p % 3 != 1) return 0;
  CubicSymbol chi = cubic_symbol_mod(m % p, p, split.omega);
  return twisted_trace(split.a, split.b, conj(chi));
}

std::int64_t ap_good(std::uint64_t m, std::uint64_t p) {
  if (!is_prime(p) || p == 3 || m % p == 0) {
    throw Error(ErrorKind::BadPrime, std::to_string(p) + " is not a good prime for E_" +
                                         std::to_string(m));
  }
  if (p % 3 == 2) return 0;
  EisensteinInt pi = primary_prime(p);
  SplitPrimeData split{static_cast<std::int32_t>(pi.a), static_cast<std::int32_t>(pi.b),
                       static_cast<std::uint32_t>(omega_mod(pi, p))};
  return ap_from_split(m, p, split);
}

CoefficientTable coefficients(std::uint64_t m, std::uint64_t limit, const PrimeTable& primes) {
  if (primes.limit() < limit) throw Error(ErrorKind::DomainError, "prime table too small");
  CoefficientTable table;
  table.m = m;
  table.limit = limit;
  table.values.assign(limit + 1, 0);
  if (limit == 0) return table;
  auto& a = table.values;
  a[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t p = primes.smallest_factor(n);
    const bool bad = p == 3 || m % p == 0;
    if (p == n) {
      a[n] = (bad || p % 3 == 2) ? 0 : ap_from_split(m, p, primes.split(p));
      continue;
    }
    std::uint64_t rest = n / p;
    if (rest % p != 0) {
      a[n] = a[p] * a[rest];
      continue;
    }
    std::uint64_t power = p;
    while (rest % p == 0) {
      rest /= p;
      power *= p;
    }
    if (rest != 1) {
      a[n] = a[power] * a[rest];
    } else if (bad) {
      a[n] = 0;
    } else {
      a[n] = a[p] * a[n / p] - static_cast<std::int64_t>(p) * a[n / p / p];
    }
  }
  return table;
}

CoefficientTable coefficients(std::uint64_t m, std::uint64_t limit) {
  PrimeTable primes(std::max<std::uint64_t>(limit, 2));
  return coefficients(m, limit, primes);
}

double tail_bound(std::uint64_t cutoff, std::uint64_t conductor, double t) {
  const double rate = kTwoPi * t / std::sqrt(static_cast<double>(conductor));
  // 2 r^(M+1) / (1 - r) with r = exp(-rate), evaluated in log space.
  double log_bound = std::log(2.0) - rate * static_cast<double>(cutoff + 1) - std::log(-std::expm1(-rate));
  // Slack for the rounding in this evaluation itself.
  return std::exp(log_bound) * (1.0 + 1e-12);
}

std::uint64_t cutoff_for(std::uint64_t conductor, double t, double tolerance) {
  const double rate = kTwoPi * t / std::sqrt(static_cast<double>(conductor));
  double needed = (std::log(2.0 / tolerance) - std::log(-std::expm1(-rate))) / rate - 1.0;
  auto cutoff = static_cast<std::uint64_t>(std::max(0.0, std::ceil(needed)));
  while (tail_bound(cutoff, conductor, t) > tolerance) ++cutoff;
  while (cutoff > 0 && tail_bound(cutoff - 1, conductor, t) <= tolerance) --cutoff;
  return cutoff;
}

std::vector<CertifiedValue> series_sums(const CoefficientTable& table, std::uint64_t conductor,
                                        std::span<const double> ts) {
  const std::size_t k = ts.size();
  const double sqrt_n = std::sqrt(static_cast<double>(conductor));
  std::vector<double> ratio(k), weight(k), abs_sum(k, 0.0);
  std::vector<CompensatedSum> acc(k);
  for (std::size_t j = 0; j < k; ++j) {
    ratio[j] = std::exp(-kTwoPi * ts[j] / sqrt_n);
    weight[j] = 1.0;
  }
  for (std::uint64_t n = 1; n <= table.limit; ++n) {
    const bool refresh = (n % kWeightRefresh) == 0;
    const std::int64_t an = table.values[n];
    for (std::size_t j = 0; j < k; ++j) {
      weight[j] = refresh ? std::exp(-kTwoPi * ts[j] * static_cast<double>(n) / sqrt_n)
                          : weight[j] * ratio[j];
    }
    if (an == 0) continue;
    const double coeff = static_cast<double>(an) / static_cast<double>(n);
    for (std::size_t j = 0; j < k; ++j) {
      const double term = coeff * weight[j];
      acc[j].add(term);
      abs_sum[j] += std::fabs(term);
    }
  }
  std::vector<CertifiedValue> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    // Weight drift is at most (refresh interval + 2) roundings per term;
    // compensated summation contributes a few more.
    const double rounding =
        abs_sum[j] * kUnitRoundoff * static_cast<double>(kWeightRefresh + 16) * (1.0 + 1e-6);
    out[j] = CertifiedValue{acc[j].value(),
                            tail_bound(table.limit, conductor, ts[j]) + rounding};
  }
  return out;
}

CertifiedValue series_sum(const CoefficientTable& table, std::uint64_t conductor, double t,
                          double tolerance) {
  const std::array<double, 1> ts{t};
  CertifiedValue result = series_sums(table, conductor, ts).front();
  if (tolerance > 0.0 && result.error_bound > tolerance) {
    throw Error(ErrorKind::CutoffTooSmall, "certified bound " + std::to_string(result.error_bound) +
                                               " exceeds tolerance " + std::to_string(tolerance));
  }
  return result;
}

RootNumberResult root_number_from_table(const CoefficientTable& table, std::uint64_t conductor,
                                        const RootNumberPolicy& policy) {
  const std::array<double, 5> ts{1.0, kRootNumberT1, 1.0 / kRootNumberT1, kRootNumberT2,
                                 1.0 / kRootNumberT2};
  const auto s = series_sums(table, conductor, ts);
  RootNumberResult result;
  double error = 0.0;
  // Sign +1: S(t) + S(1/t) = 2 S(1). Sign -1: S(t) = S(1/t).
  for (std::size_t i : {std::size_t{1}, std::size_t{3}}) {
    const double plus = std::fabs(s[i].value + s[i + 1].value - 2.0 * s[0].value);
    const double minus = std::fabs(s[i].value - s[i + 1].value);
    result.defect_plus = std::max(result.defect_plus, plus);
    result.defect_minus = std::max(result.defect_minus, minus);
    error = std::max(error, s[i].error_bound + s[i + 1].error_bound + 2.0 * s[0].error_bound);
  }
  result.error = error;

  auto decide = [&](double small, double large) {
    const double effective = small + error;
    return effective < policy.defect_tolerance &&
           large - error >= policy.separation * effective;
  };
  if (decide(result.defect_plus, result.defect_minus)) {
    result.sign = 1;
  } else if (decide(result.defect_minus, result.defect_plus)) {
    result.sign = -1;
  } else {
    throw Error(ErrorKind::AmbiguousSign,
                "E_" + std::to_string(table.m) + ": defects +" + std::to_string(result.defect_plus) +
                    " -" + std::to_string(result.defect_minus) + " error " + std::to_string(error));
  }
  return result;
}

int root_number(std::uint64_t m, const RootNumberPolicy& policy) {
  const std::uint64_t n = conductor(curve_model(m).m);
  PrimeCache cache;
  double tolerance = policy.tail_tolerance;
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t cutoff = cutoff_for(n, kRootNumberMinT, tolerance);
    auto primes = cache.ensure(cutoff);
    try {
      return root_number_from_table(coefficients(m, cutoff, *primes), n, policy).sign;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AmbiguousSign || attempt >= policy.escalations) throw;
      tolerance *= policy.escalation_factor;
    }
  }
}

double central_tolerance(const TwistCurve& curve, double cap) {
  const double delta_l = 0.01 * static_cast<double>(curve.tamagawa_product) * curve.period /
                         static_cast<double>(curve.torsion_factor);
  return std::min(cap, delta_l / 4.0);
}

CertifiedValue central_value_from_table(const CoefficientTable& table, std::uint64_t conductor,
                                        double tolerance) {
  CertifiedValue s = series_sum(table, conductor, 1.0);
  CertifiedValue l{2.0 * s.value, 2.0 * s.error_bound};
  if (tolerance > 0.0 && l.error_bound > tolerance) {
    throw Error(ErrorKind::CutoffTooSmall, "certified bound " + std::to_string(l.error_bound) +
                                               " exceeds tolerance " + std::to_string(tolerance));
  }
  return l;
}

CertifiedValue central_value(std::uint64_t m) {
  if (root_number(m) != 1) {
    throw Error(ErrorKind::OddSign, "E_" + std::to_string(m) + " has root number -1");
  }
  const TwistCurve curve = twist_curve(m);
  const double tolerance = central_tolerance(curve);
  const std::uint64_t cutoff = cutoff_for(curve.conductor, 1.0, tolerance / 2.0);
  return central_value_from_table(coefficients(m, cutoff), curve.conductor, tolerance);
}

}  // namespace cubictwist
