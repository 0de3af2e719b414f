#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cubictwist/stats.hpp"

namespace cubictwist {

// Kronecker symbol (a/n) for n >= 1.
int kronecker(std::int64_t a, std::uint64_t n);

// D = d for d = 1 mod 4, else 4d. Throws NotSquareFree.
std::uint64_t fundamental_discriminant(std::uint64_t d);

struct FundamentalUnit {
  double regulator = 0.0;   // log of the unit
  int norm = 0;             // +1 or -1
  std::uint64_t period = 0; // continued-fraction period length
};

// Continued fraction of sqrt(D/4) or (1 + sqrt(D))/2; the unit is the
// product of the complete quotients over one period.
FundamentalUnit fundamental_unit(std::uint64_t disc);
double regulator(std::uint64_t disc);

// L(1, chi_D) = -(1/sqrt D) sum_{a<D} chi_D(a) log sin(pi a / D).
double dirichlet_L1(std::uint64_t disc);
long double dirichlet_L1_extended(std::uint64_t disc);

struct ClassNumberRecord {
  std::uint64_t d = 0;
  std::uint64_t D = 0;
  double regulator = 0.0;
  double L1 = 0.0;
  std::uint64_t h = 0;
  friend bool operator==(const ClassNumberRecord&, const ClassNumberRecord&) = default;
};

// Distance from the nearest integer that class_number accepts.
inline constexpr double kClassRoundingMargin = 0.25;

// Wide class number of Q(sqrt d). Throws NotSquareFree, or RoundingMarginFailed
// if extended precision still leaves the value ambiguous.
ClassNumberRecord class_number(std::uint64_t d);

/// Records for every square-free 2 <= d <= bound, ascending.
struct ClassStore {
  std::uint64_t bound = 0;
  std::vector<ClassNumberRecord> rows;
};

inline constexpr std::string_view kClassHeader = "d,D,regulator,L1,h";

ClassStore classnum_range(std::uint64_t x, unsigned workers = 1);
std::string class_store_csv(const ClassStore& store);
ClassStore parse_class_store(const std::string& text);
ClassStore read_class_store(const std::filesystem::path& path);
void write_class_store(const std::filesystem::path& path, const ClassStore& store);

// h(k, X) and H(k, X) = h(1, X) / h(k, X); RangeNotCovered beyond the store.
std::uint64_t count_class(const ClassStore& store, std::uint64_t k, std::uint64_t x);
std::uint64_t count_squarefree(const ClassStore& store, std::uint64_t x);
Ratio ratio_H(const ClassStore& store, std::uint64_t k, std::uint64_t x);

// Reports: Hkx, h1-normalized.
bool is_class_report(std::string_view name);
std::string class_report(const ClassStore& store, std::string_view name, const ReportParams& params);

}  // namespace cubictwist
