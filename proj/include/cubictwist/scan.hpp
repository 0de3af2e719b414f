#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cubictwist/lseries.hpp"
#include "cubictwist/sha.hpp"

namespace cubictwist {

enum class RowKind { order, vanishing, odd, quarantined };

std::string_view to_string(RowKind kind);
RowKind parse_row_kind(std::string_view text);

/// One scan record per cube-free m.
struct TwistResult {
  std::uint64_t m = 0;
  int epsilon = 0;  // 0 only for quarantined rows whose sign was never pinned
  std::uint64_t conductor = 0;
  std::optional<double> l1_value;  // present iff epsilon == +1
  std::optional<double> l1_error;
  std::uint64_t c_fin = 0;
  double c_inf = 0.0;
  int t_m = 0;
  RowKind kind = RowKind::quarantined;
  std::uint64_t sha = 0;  // 0 unless kind == order
  bool is_prime_m = false;
  int m_mod_9 = 0;

  friend bool operator==(const TwistResult&, const TwistResult&) = default;
};

struct TwistPolicy {
  RootNumberPolicy root;
  double l_tolerance_cap = 1e-4;
  // Multiplies every cutoff; 2.0 re-runs a scan at doubled precision.
  double cutoff_scale = 1.0;
  int precision_escalations = 2;
  double escalation_factor = 1e-3;
};

// Full pipeline for one m: curve, sign, central value, certified |Sha|.
// Numerical failures end up as quarantined rows, never as exceptions.
TwistResult analyze_twist(std::uint64_t m, PrimeCache& cache, const TwistPolicy& policy = {});

// Cube-free integers in [1, x], ascending.
std::vector<std::uint64_t> cubefree_iter(std::uint64_t x);
// Cube-free integers in [lo, hi], ascending.
std::vector<std::uint64_t> cubefree_between(std::uint64_t lo, std::uint64_t hi);

/// Rows sorted by m, covering every cube-free m <= bound.
struct ResultStore {
  std::uint64_t bound = 0;
  std::vector<TwistResult> rows;
};

inline constexpr std::string_view kStoreHeader = "m,eps,conductor,L1,L1err,cfin,cinf,tm,kind,sha,prime,m9";

std::string format_row(const TwistResult& row);
TwistResult parse_row(std::string_view line);
std::string store_csv(const std::vector<TwistResult>& rows);
// The bound of a loaded store is the largest x with every cube-free m <= x present.
ResultStore read_store(const std::filesystem::path& path);
void write_store(const std::filesystem::path& path, const ResultStore& store);

struct ScanConfig {
  unsigned workers = 1;
  std::uint64_t chunk_size = 1024;
  // Empty: in-memory scan with no checkpoints.
  std::filesystem::path checkpoint_dir;
  // Empty: the merged store is returned but not written.
  std::filesystem::path output;
  TwistPolicy policy;
  // Stop (cleanly, leaving a resumable manifest) after this many newly
  // completed chunks; 0 means no limit.
  std::size_t chunk_budget = 0;
  const std::atomic<bool>* stop = nullptr;
  bool verbose = false;
};

struct ScanStats {
  std::size_t chunks_total = 0;
  std::size_t chunks_computed = 0;
  std::size_t chunks_reused = 0;
  std::size_t quarantined = 0;
  bool complete = false;
};

// Scans every cube-free m <= x. With a checkpoint directory the run is
// resumable; an existing manifest there for the same scan is continued.
ResultStore scan_range(std::uint64_t x, const ScanConfig& config, ScanStats* stats = nullptr);

struct ScanManifest {
  std::uint64_t max = 0;
  std::uint64_t chunk_size = 0;
  TwistPolicy policy;
  std::string output;
  struct Chunk {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::string digest;
  };
  std::vector<Chunk> completed;

  bool complete() const;
};

inline constexpr std::string_view kManifestName = "manifest.txt";

ScanManifest read_manifest(const std::filesystem::path& path);

// Continues an interrupted scan. Completed chunks are verified against their
// digests (ManifestCorrupt on mismatch) and never recomputed.
ResultStore resume(const std::filesystem::path& manifest_path, unsigned workers = 1,
                   const std::atomic<bool>* stop = nullptr, ScanStats* stats = nullptr);

}  // namespace cubictwist
