#include "cubictwist/stats.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cubictwist/errors.hpp"
#include "cubictwist/io.hpp"

namespace cubictwist {

namespace {

void require_covered(const ResultStore& store, std::uint64_t x) {
  if (x > store.bound) {
    throw Error(ErrorKind::RangeNotCovered,
                "store covers m <= " + std::to_string(store.bound) + ", query needs " + std::to_string(x));
  }
}

bool nonvanishing(const TwistResult& r) { return r.epsilon == 1 && r.kind == RowKind::order; }

template <class Pred>
std::uint64_t count_rows(const ResultStore& store, std::uint64_t x, Pred pred) {
  require_covered(store, x);
  std::uint64_t n = 0;
  for (const auto& r : store.rows) {
    if (r.m > x) break;
    if (pred(r)) ++n;
  }
  return n;
}

}  // namespace

std::uint64_t Histogram::total() const {
  std::uint64_t n = underflow + overflow;
  for (auto c : counts) n += c;
  return n;
}

void Histogram::add(double value) {
  const double pos = std::floor((value - kStart) / kWidth + 1e-9);
  if (pos < 0) {
    ++underflow;
  } else if (pos >= static_cast<double>(kBins)) {
    ++overflow;
  } else {
    ++counts[static_cast<std::size_t>(pos)];
  }
}

std::uint64_t count_sha(const ResultStore& store, std::uint64_t k, std::uint64_t x) {
  return count_rows(store, x, [&](const TwistResult& r) { return nonvanishing(r) && r.sha == k * k; });
}

std::uint64_t count_vanishing(const ResultStore& store, std::uint64_t x, bool primes_only) {
  return count_rows(store, x, [&](const TwistResult& r) {
    return r.epsilon == 1 && r.kind == RowKind::vanishing && (!primes_only || r.is_prime_m);
  });
}

std::uint64_t count_even(const ResultStore& store, std::uint64_t x) {
  return count_rows(store, x, [](const TwistResult& r) { return r.epsilon == 1; });
}

double powerlog_scale(double x, double r) { return std::pow(x, 5.0 / 6.0) * std::pow(std::log(x), r); }

double watkins_reference(double x) {
  if (!(x > 1.0)) throw Error(ErrorKind::DomainError, "Watkins reference needs X > 1");
  return powerlog_scale(x, -5.0 / 8.0) / 6.0;
}

Ratio sha_ratio(const ResultStore& store, std::uint64_t k, std::uint64_t x) {
  const std::uint64_t den = count_sha(store, k, x);
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "f(" + std::to_string(k) + ", X) = 0");
  return {count_sha(store, 1, x), den};
}

double delaunay_average(const ResultStore& store, std::uint64_t t, Subset subset) {
  require_covered(store, t);
  std::uint64_t n = 0;
  double sum = 0.0;
  for (const auto& r : store.rows) {
    if (r.m > t) break;
    if (!nonvanishing(r) || (subset == Subset::primes && !r.is_prime_m)) continue;
    ++n;
    sum += static_cast<double>(r.sha);
  }
  if (n == 0) throw Error(ErrorKind::EmptySubset, "no nonvanishing rows with m <= " + std::to_string(t));
  return sum / static_cast<double>(n);
}

double delaunay_normalized(const ResultStore& store, std::uint64_t t, Subset subset) {
  return delaunay_average(store, t, subset) / std::sqrt(static_cast<double>(t));
}

double cl_predicted(std::uint64_t p, unsigned terms) {
  if (p < 2) throw Error(ErrorKind::DomainError, "cl_predicted needs p >= 2");
  const double q = 1.0 / static_cast<double>(p);
  double product = 1.0;
  double power = q;  // p^{1-2j}
  for (unsigned j = 1;; ++j) {
    product *= 1.0 - power;
    power *= q * q;
    if (terms > 0 ? j >= terms : power < 1e-13) break;
  }
  return 1.0 - product;
}

double divisibility_freq(const ResultStore& store, std::uint64_t p, std::uint64_t x, bool primes_only) {
  require_covered(store, x);
  std::uint64_t total = 0;
  std::uint64_t divisible = 0;
  for (const auto& r : store.rows) {
    if (r.m > x) break;
    if (!nonvanishing(r) || (primes_only && !r.is_prime_m)) continue;
    ++total;
    if (r.sha % p == 0) ++divisible;
  }
  if (total == 0) throw Error(ErrorKind::EmptySubset, "no nonvanishing rows with m <= " + std::to_string(x));
  return static_cast<double>(divisible) / static_cast<double>(total);
}

double standardize(double v, double m) {
  const double ll = std::log(std::log(m));
  return (v + 0.5 * ll) / std::sqrt(ll);
}

Histogram standardized_histogram(const ResultStore& store, HistogramKind kind) {
  Histogram h;
  std::vector<double> sample;
  for (const auto& r : store.rows) {
    if (r.m < 3 || !nonvanishing(r)) continue;
    const double m = static_cast<double>(r.m);
    double v = 0.0;
    switch (kind) {
      case HistogramKind::logL: v = std::log(*r.l1_value); break;
      case HistogramKind::sha_sqrt2: v = std::log(static_cast<double>(r.sha) / std::sqrt(m)); break;
      case HistogramKind::sha_sqrt3: v = std::log(static_cast<double>(r.sha) / std::cbrt(m)); break;
    }
    sample.push_back(standardize(v, m));
  }
  if (sample.empty()) throw Error(ErrorKind::EmptySubset, "no rows qualify for the histogram");
  double sum = 0.0;
  for (double s : sample) {
    h.add(s);
    sum += s;
  }
  h.mean = sum / static_cast<double>(sample.size());
  double sq = 0.0;
  for (double s : sample) sq += (s - h.mean) * (s - h.mean);
  h.variance = sample.size() > 1 ? sq / static_cast<double>(sample.size() - 1) : 0.0;
  return h;
}

PowerLogFit fit_powerlog(const CountSeries& series, double max_rms) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.grid.size() && i < series.counts.size(); ++i) {
    const double x = static_cast<double>(series.grid[i]);
    if (series.counts[i] == 0 || x <= std::numbers::e) continue;
    xs.push_back(std::log(std::log(x)));
    ys.push_back(std::log(static_cast<double>(series.counts[i])) - 5.0 / 6.0 * std::log(x));
  }
  if (xs.size() < 3) throw Error(ErrorKind::InsufficientData, "power-log fit needs three positive points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(ErrorKind::InsufficientData, "power-log fit needs distinct grid points");
  PowerLogFit fit;
  fit.d = sxy / sxx;
  const double intercept = my - fit.d * mx;
  fit.c = std::exp(intercept);
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - intercept - fit.d * xs[i];
    rss += e * e;
  }
  fit.rms_residual = std::sqrt(rss / n);
  if (fit.rms_residual > max_rms) {
    throw Error(ErrorKind::InsufficientData,
                "series does not follow X^{5/6}(log X)^d: rms residual " + format_real(fit.rms_residual));
  }
  return fit;
}

std::vector<std::uint64_t> count_grid(std::uint64_t bound, std::uint64_t start) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t x = start; x <= bound; x *= 2) grid.push_back(x);
  if (bound > 0 && (grid.empty() || grid.back() != bound)) grid.push_back(bound);
  return grid;
}

CountSeries sha_series(const ResultStore& store, std::uint64_t k) {
  CountSeries s;
  s.grid = count_grid(store.bound);
  for (auto x : s.grid) s.counts.push_back(count_sha(store, k, x));
  return s;
}

CountSeries vanishing_series(const ResultStore& store, bool primes_only) {
  CountSeries s;
  s.grid = count_grid(store.bound);
  for (auto x : s.grid) s.counts.push_back(count_vanishing(store, x, primes_only));
  return s;
}

bool is_twist_report(std::string_view name) {
  for (std::string_view known : {"ratio-fg", "gstar-vs-watkins", "g-normalized", "Fkx", "delaunay", "divisibility",
                                 "hist-logL", "hist-sha2", "hist-sha3"}) {
    if (name == known) return true;
  }
  return false;
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin_left,count\n";
  out << "-inf," << h.underflow << "\n";
  for (std::size_t i = 0; i < Histogram::kBins; ++i) {
    // Bin edges are printed from integer tenths so -0.0 and 0.30000000000000004 never appear.
    const long tenths = static_cast<long>(i) - 100;
    out << format_real(static_cast<double>(tenths) / 10.0) << "," << h.counts[i] << "\n";
  }
  out << "10," << h.overflow << "\n";
  return out.str();
}

std::string twist_report(const ResultStore& store, std::string_view name, const ReportParams& params) {
  std::ostringstream out;
  const auto grid = count_grid(store.bound);
  const auto real = [](double v) { return format_real(v); };
  if (name == "ratio-fg") {
    out << "X,f,g,ratio\n";
    for (auto x : grid) {
      const auto f = count_sha(store, 1, x);
      const auto g = count_vanishing(store, x, false);
      out << x << "," << f << "," << g << "," << (g ? real(static_cast<double>(f) / static_cast<double>(g)) : "")
          << "\n";
    }
  } else if (name == "gstar-vs-watkins") {
    out << "X,gstar,watkins,gstar_normalized\n";
    for (auto x : grid) {
      const auto g = count_vanishing(store, x, true);
      const double xd = static_cast<double>(x);
      out << x << "," << g << "," << real(watkins_reference(xd)) << ","
          << real(static_cast<double>(g) / powerlog_scale(xd, -5.0 / 8.0)) << "\n";
    }
  } else if (name == "g-normalized") {
    out << "X,g,g_normalized\n";
    for (auto x : grid) {
      const auto g = count_vanishing(store, x, false);
      out << x << "," << g << ","
          << real(static_cast<double>(g) / powerlog_scale(static_cast<double>(x), -5.0 / 8.0)) << "\n";
    }
  } else if (name == "Fkx") {
    // Bounds with f(k, X) = 0 have no ratio and are left out.
    out << "X,F\n";
    for (auto x : grid) {
      if (count_sha(store, params.k, x) == 0) continue;
      out << x << "," << real(sha_ratio(store, params.k, x).value()) << "\n";
    }
  } else if (name == "delaunay") {
    out << "T,M_star,f_T,N_2star,g_T\n";
    for (auto t : grid) {
      const double root = std::sqrt(static_cast<double>(t));
      std::string primes_cols = ",";
      try {
        const double avg = delaunay_average(store, t, Subset::primes);
        primes_cols = real(avg) + "," + real(avg / root);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptySubset) throw;
      }
      const double all = delaunay_average(store, t, Subset::all_cubefree);
      out << t << "," << primes_cols << "," << real(all) << "," << real(all / root) << "\n";
    }
  } else if (name == "divisibility") {
    out << "X,f_p,f0\n";
    const std::string target = real(cl_predicted(params.p));
    for (auto x : grid) {
      out << x << "," << real(divisibility_freq(store, params.p, x, params.primes_only)) << "," << target << "\n";
    }
  } else if (name == "hist-logL") {
    return histogram_csv(standardized_histogram(store, HistogramKind::logL));
  } else if (name == "hist-sha2") {
    return histogram_csv(standardized_histogram(store, HistogramKind::sha_sqrt2));
  } else if (name == "hist-sha3") {
    return histogram_csv(standardized_histogram(store, HistogramKind::sha_sqrt3));
  } else {
    throw Error(ErrorKind::DomainError, "unknown report '" + std::string(name) + "'");
  }
  return out.str();
}

}  // namespace cubictwist
