#include "cubictwist/classnum.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cubictwist/arith.hpp"
#include "cubictwist/errors.hpp"
#include "cubictwist/io.hpp"

namespace cubictwist {

int kronecker(std::int64_t a, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::DomainError, "kronecker needs n >= 1");
  static constexpr int kTab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};  // (2/r) for odd r, indexed by r mod 8
  const auto amod8 = [](std::int64_t x) { return static_cast<int>(((x % 8) + 8) % 8); };
  if (n % 2 == 0 && a % 2 == 0) return 0;
  int sign = 1;
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v % 2 == 1) sign = kTab2[amod8(a)];
  // Now n is odd; reduce to the Jacobi symbol with a taken mod n.
  std::uint64_t b = n;
  std::int64_t r = a % static_cast<std::int64_t>(b);
  if (r < 0) r += static_cast<std::int64_t>(b);
  std::uint64_t x = static_cast<std::uint64_t>(r);
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      if (b % 8 == 3 || b % 8 == 5) sign = -sign;
    }
    std::swap(x, b);
    if (x % 4 == 3 && b % 4 == 3) sign = -sign;
    x %= b;
  }
  return b == 1 ? sign : 0;
}

std::uint64_t fundamental_discriminant(std::uint64_t d) {
  if (d < 2 || !is_square_free(d)) {
    throw Error(ErrorKind::NotSquareFree, std::to_string(d) + " is not a square-free integer > 1");
  }
  return d % 4 == 1 ? d : 4 * d;
}

FundamentalUnit fundamental_unit(std::uint64_t disc) {
  // alpha = (P + sqrt(R)) / Q with Q | R - P^2.
  std::int64_t radicand, p, q;
  if (disc % 4 == 0) {
    radicand = static_cast<std::int64_t>(disc / 4);
    p = 0;
    q = 1;
  } else {
    radicand = static_cast<std::int64_t>(disc);
    p = 1;
    q = 2;
  }
  const double root = std::sqrt(static_cast<double>(radicand));
  const std::int64_t iroot = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(radicand)));
  auto step = [&](std::int64_t& pp, std::int64_t& qq) {
    const std::int64_t a = (pp + iroot) / qq;
    pp = a * qq - pp;
    qq = (radicand - pp * pp) / qq;
  };
  step(p, q);
  const std::int64_t p1 = p, q1 = q;
  FundamentalUnit unit;
  do {
    unit.regulator += std::log((static_cast<double>(p) + root) / static_cast<double>(q));
    ++unit.period;
    step(p, q);
  } while (p != p1 || q != q1);
  unit.norm = unit.period % 2 == 0 ? 1 : -1;
  return unit;
}

double regulator(std::uint64_t disc) { return fundamental_unit(disc).regulator; }

namespace {

// chi_D on [0, D), built multiplicatively from values at primes.
std::vector<signed char> character_table(std::uint64_t disc) {
  std::vector<signed char> chi(disc, 0);
  std::vector<std::uint32_t> spf(disc, 0);
  if (disc > 1) chi[1] = 1;
  for (std::uint64_t a = 2; a < disc; ++a) {
    if (spf[a] == 0) {
      for (std::uint64_t k = a; k < disc; k += a) {
        if (spf[k] == 0) spf[k] = static_cast<std::uint32_t>(a);
      }
      chi[a] = static_cast<signed char>(kronecker(static_cast<std::int64_t>(disc), a));
    } else {
      chi[a] = static_cast<signed char>(chi[spf[a]] * chi[a / spf[a]]);
    }
  }
  return chi;
}

template <class Real>
Real log_sin_sum(std::uint64_t disc) {
  const auto chi = character_table(disc);
  const Real pi = std::numbers::pi_v<Real>;
  const Real scale = pi / static_cast<Real>(disc);
  // chi_D is even for D > 0, so the sum folds onto a < D/2.
  Real sum = 0;
  for (std::uint64_t a = 1; 2 * a < disc; ++a) {
    if (chi[a] != 0) sum += static_cast<Real>(chi[a]) * std::log(std::sin(scale * static_cast<Real>(a)));
  }
  sum *= 2;
  return -sum / std::sqrt(static_cast<Real>(disc));
}

}  // namespace

double dirichlet_L1(std::uint64_t disc) { return log_sin_sum<double>(disc); }
long double dirichlet_L1_extended(std::uint64_t disc) { return log_sin_sum<long double>(disc); }

ClassNumberRecord class_number(std::uint64_t d) {
  ClassNumberRecord rec;
  rec.d = d;
  rec.D = fundamental_discriminant(d);
  rec.regulator = regulator(rec.D);
  rec.L1 = dirichlet_L1(rec.D);
  const double root = std::sqrt(static_cast<double>(rec.D));
  double value = root * rec.L1 / (2.0 * rec.regulator);
  double nearest = std::round(value);
  if (std::fabs(value - nearest) >= kClassRoundingMargin) {
    const long double lvalue = std::sqrt(static_cast<long double>(rec.D)) * dirichlet_L1_extended(rec.D) /
                               (2.0L * static_cast<long double>(rec.regulator));
    nearest = static_cast<double>(std::roundl(lvalue));
    if (std::fabs(static_cast<double>(lvalue) - nearest) >= kClassRoundingMargin) {
      throw Error(ErrorKind::RoundingMarginFailed, "h(" + std::to_string(d) + ") ~ " + format_real(value));
    }
  }
  if (nearest < 1) throw Error(ErrorKind::RoundingMarginFailed, "h(" + std::to_string(d) + ") rounds below 1");
  rec.h = static_cast<std::uint64_t>(nearest);
  return rec;
}

ClassStore classnum_range(std::uint64_t x, unsigned workers) {
  if (workers == 0) throw Error(ErrorKind::DomainError, "worker count must be at least 1");
  std::vector<std::uint64_t> ds;
  for (std::uint64_t d = 2; d <= x; ++d) {
    if (is_square_free(d)) ds.push_back(d);
  }
  ClassStore store;
  store.bound = x;
  store.rows.resize(ds.size());
  constexpr std::size_t kBlock = 256;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t start = next.fetch_add(kBlock);
      if (start >= ds.size() || failed) return;
      try {
        for (std::size_t i = start; i < std::min(ds.size(), start + kBlock); ++i) store.rows[i] = class_number(ds[i]);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return store;
}

std::string class_store_csv(const ClassStore& store) {
  std::string out(kClassHeader);
  out += '\n';
  for (const auto& r : store.rows) {
    out += std::to_string(r.d) + ',' + std::to_string(r.D) + ',' + format_real(r.regulator) + ',' +
           format_real(r.L1) + ',' + std::to_string(r.h) + '\n';
  }
  return out;
}

ClassStore parse_class_store(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kClassHeader) throw Error(ErrorKind::Io, "class store: wrong header");
  ClassStore store;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw Error(ErrorKind::Io, "class store: bad line '" + line + "'");
    store.rows.push_back({parse_uint(f[0]), parse_uint(f[1]), parse_real(f[2]), parse_real(f[3]), parse_uint(f[4])});
  }
  // Coverage: the longest prefix of square-free d >= 2 present without gaps.
  std::size_t i = 0;
  for (std::uint64_t d = 2;; ++d) {
    if (!is_square_free(d)) continue;
    if (i == store.rows.size() || store.rows[i].d != d) {
      store.bound = d - 1;
      break;
    }
    ++i;
  }
  if (i < store.rows.size()) throw Error(ErrorKind::Io, "class store: rows out of order or not square-free");
  // Extend over trailing non-square-free integers.
  while (!is_square_free(store.bound + 1)) ++store.bound;
  return store;
}

ClassStore read_class_store(const std::filesystem::path& path) { return parse_class_store(read_file(path)); }

void write_class_store(const std::filesystem::path& path, const ClassStore& store) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  atomic_write(path, class_store_csv(store));
}

namespace {

template <class Pred>
std::uint64_t count_class_rows(const ClassStore& store, std::uint64_t x, Pred pred) {
  if (x > store.bound) {
    throw Error(ErrorKind::RangeNotCovered,
                "class store covers d <= " + std::to_string(store.bound) + ", query needs " + std::to_string(x));
  }
  std::uint64_t n = 0;
  for (const auto& r : store.rows) {
    if (r.d > x) break;
    if (pred(r)) ++n;
  }
  return n;
}

}  // namespace

std::uint64_t count_class(const ClassStore& store, std::uint64_t k, std::uint64_t x) {
  return count_class_rows(store, x, [k](const ClassNumberRecord& r) { return r.h == k; });
}

std::uint64_t count_squarefree(const ClassStore& store, std::uint64_t x) {
  return count_class_rows(store, x, [](const ClassNumberRecord&) { return true; });
}

Ratio ratio_H(const ClassStore& store, std::uint64_t k, std::uint64_t x) {
  const std::uint64_t den = count_class(store, k, x);
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "h(" + std::to_string(k) + ", X) = 0");
  return {count_class(store, 1, x), den};
}

bool is_class_report(std::string_view name) { return name == "Hkx" || name == "h1-normalized"; }

std::string class_report(const ClassStore& store, std::string_view name, const ReportParams& params) {
  std::ostringstream out;
  const auto grid = count_grid(store.bound);
  if (name == "Hkx") {
    out << "X,H\n";
    for (auto x : grid) {
      if (count_class(store, params.k, x) == 0) continue;
      out << x << "," << format_real(ratio_H(store, params.k, x).value()) << "\n";
    }
  } else if (name == "h1-normalized") {
    out << "X,h1,h1_r0,h1_r1\n";
    for (auto x : grid) {
      const double h1 = static_cast<double>(count_class(store, 1, x));
      const double xd = static_cast<double>(x);
      out << x << "," << count_class(store, 1, x) << "," << format_real(h1 / powerlog_scale(xd, 0.0)) << ","
          << format_real(h1 / powerlog_scale(xd, 1.0)) << "\n";
    }
  } else {
    throw Error(ErrorKind::DomainError, "unknown class report '" + std::string(name) + "'");
  }
  return out.str();
}

}  // namespace cubictwist
