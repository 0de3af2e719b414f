#include "cubictwist/scan.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cubictwist/errors.hpp"
#include "cubictwist/io.hpp"

namespace cubictwist {

namespace fs = std::filesystem;

std::string_view to_string(RowKind kind) {
  switch (kind) {
    case RowKind::order: return "order";
    case RowKind::vanishing: return "vanishing";
    case RowKind::odd: return "odd";
    case RowKind::quarantined: return "quarantined";
  }
  return "quarantined";
}

RowKind parse_row_kind(std::string_view text) {
  if (text == "order") return RowKind::order;
  if (text == "vanishing") return RowKind::vanishing;
  if (text == "odd") return RowKind::odd;
  if (text == "quarantined") return RowKind::quarantined;
  throw Error(ErrorKind::Io, "unknown row kind '" + std::string(text) + "'");
}

namespace {

std::uint64_t scaled(std::uint64_t cutoff, double scale) {
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(cutoff) * scale));
}

}  // namespace

TwistResult analyze_twist(std::uint64_t m, PrimeCache& cache, const TwistPolicy& policy) {
  const TwistCurve curve = twist_curve(m);
  TwistResult row;
  row.m = m;
  row.conductor = curve.conductor;
  row.c_fin = curve.tamagawa_product;
  row.c_inf = curve.period;
  row.t_m = curve.torsion_factor;
  row.is_prime_m = is_prime(m);
  row.m_mod_9 = static_cast<int>(m % 9);
  row.kind = RowKind::quarantined;

  const std::uint64_t n = curve.conductor;
  double tail = policy.root.tail_tolerance;
  double l_tol = central_tolerance(curve, policy.l_tolerance_cap);
  auto central_cutoff = [&] { return scaled(cutoff_for(n, 1.0, l_tol / 2.0), policy.cutoff_scale); };

  CoefficientTable table;
  for (int attempt = 0; attempt <= policy.root.escalations; ++attempt) {
    const std::uint64_t cutoff =
        std::max(scaled(cutoff_for(n, kRootNumberMinT, tail), policy.cutoff_scale), central_cutoff());
    table = coefficients(m, cutoff, *cache.ensure(cutoff));
    try {
      row.epsilon = root_number_from_table(table, n, policy.root).sign;
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AmbiguousSign) throw;
      tail *= policy.root.escalation_factor;
    }
  }
  if (row.epsilon == 0) return row;
  if (row.epsilon == -1) {
    row.kind = RowKind::odd;
    return row;
  }

  for (int attempt = 0; attempt <= policy.precision_escalations; ++attempt) {
    if (attempt > 0) {
      l_tol *= policy.escalation_factor;
      const std::uint64_t cutoff = central_cutoff();
      if (cutoff > table.limit) table = coefficients(m, cutoff, *cache.ensure(cutoff));
    }
    const CertifiedValue l = central_value_from_table(table, n, l_tol);
    row.l1_value = l.value;
    row.l1_error = l.error_bound;
    try {
      const ShaOutcome outcome = certify(sha_analytic(l, curve));
      row.kind = outcome.kind == ShaKind::order ? RowKind::order : RowKind::vanishing;
      row.sha = outcome.order;
      return row;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotASquare) return row;
      if (e.kind() != ErrorKind::NotNearInteger) throw;
    }
  }
  return row;
}

std::vector<std::uint64_t> cubefree_between(std::uint64_t lo, std::uint64_t hi) {
  if (lo == 0) lo = 1;
  if (hi < lo) return {};
  std::vector<char> marked(hi - lo + 1, 0);
  for (std::uint64_t p = 2; p * p * p <= hi; ++p) {
    if (!is_prime(p)) continue;
    const std::uint64_t cube = p * p * p;
    for (std::uint64_t k = (lo + cube - 1) / cube * cube; k <= hi; k += cube) marked[k - lo] = 1;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = lo; m <= hi; ++m) {
    if (!marked[m - lo]) out.push_back(m);
  }
  return out;
}

std::vector<std::uint64_t> cubefree_iter(std::uint64_t x) { return cubefree_between(1, x); }

std::string format_row(const TwistResult& r) {
  std::string s;
  s += std::to_string(r.m) + ',' + std::to_string(r.epsilon) + ',' + std::to_string(r.conductor) + ',';
  s += (r.l1_value ? format_real(*r.l1_value) : "") + ',';
  s += (r.l1_error ? format_real(*r.l1_error) : "") + ',';
  s += std::to_string(r.c_fin) + ',' + format_real(r.c_inf) + ',' + std::to_string(r.t_m) + ',';
  s += std::string(to_string(r.kind)) + ',' + std::to_string(r.sha) + ',';
  s += std::string(r.is_prime_m ? "1" : "0") + ',' + std::to_string(r.m_mod_9);
  return s;
}

TwistResult parse_row(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() != 12) throw Error(ErrorKind::Io, "expected 12 fields: " + std::string(line));
  TwistResult r;
  r.m = parse_uint(f[0]);
  r.epsilon = static_cast<int>(parse_int(f[1]));
  r.conductor = parse_uint(f[2]);
  if (!f[3].empty()) r.l1_value = parse_real(f[3]);
  if (!f[4].empty()) r.l1_error = parse_real(f[4]);
  r.c_fin = parse_uint(f[5]);
  r.c_inf = parse_real(f[6]);
  r.t_m = static_cast<int>(parse_int(f[7]));
  r.kind = parse_row_kind(f[8]);
  r.sha = parse_uint(f[9]);
  r.is_prime_m = f[10] == "1";
  r.m_mod_9 = static_cast<int>(parse_int(f[11]));
  return r;
}

std::string store_csv(const std::vector<TwistResult>& rows) {
  std::string out(kStoreHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_row(r);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<TwistResult> parse_rows(const std::string& text, const std::string& origin) {
  std::vector<TwistResult> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kStoreHeader) {
    throw Error(ErrorKind::Io, origin + ": missing or wrong header");
  }
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(parse_row(line));
  }
  return rows;
}

std::uint64_t covered_bound(const std::vector<TwistResult>& rows) {
  // Walk cube-free integers in order while they are present.
  std::uint64_t bound = 0;
  std::size_t i = 0;
  std::uint64_t m = 1;
  while (i < rows.size()) {
    if (!is_cube_free(m)) {
      ++m;
      continue;
    }
    if (rows[i].m != m) break;
    bound = m;
    ++i;
    ++m;
  }
  // Trailing non-cube-free integers are covered too.
  while (bound > 0 && !is_cube_free(bound + 1)) ++bound;
  return bound;
}

}  // namespace

ResultStore read_store(const fs::path& path) {
  ResultStore store;
  store.rows = parse_rows(read_file(path), path.string());
  std::sort(store.rows.begin(), store.rows.end(), [](auto& a, auto& b) { return a.m < b.m; });
  store.bound = covered_bound(store.rows);
  return store;
}

void write_store(const fs::path& path, const ResultStore& store) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  atomic_write(path, store_csv(store.rows));
}

bool ScanManifest::complete() const {
  std::uint64_t chunks = max == 0 ? 0 : (max + chunk_size - 1) / chunk_size;
  return completed.size() == chunks;
}

namespace {

std::string manifest_text(const ScanManifest& mf) {
  std::ostringstream out;
  const TwistPolicy& p = mf.policy;
  out << "cubictwist-scan-manifest 1\n";
  out << "max " << mf.max << "\n";
  out << "chunk " << mf.chunk_size << "\n";
  out << "output " << (mf.output.empty() ? "-" : mf.output) << "\n";
  out << "policy.tail " << format_real(p.root.tail_tolerance) << "\n";
  out << "policy.defect " << format_real(p.root.defect_tolerance) << "\n";
  out << "policy.separation " << format_real(p.root.separation) << "\n";
  out << "policy.root_escalations " << p.root.escalations << "\n";
  out << "policy.root_escalation_factor " << format_real(p.root.escalation_factor) << "\n";
  out << "policy.lcap " << format_real(p.l_tolerance_cap) << "\n";
  out << "policy.scale " << format_real(p.cutoff_scale) << "\n";
  out << "policy.escalations " << p.precision_escalations << "\n";
  out << "policy.escalation_factor " << format_real(p.escalation_factor) << "\n";
  std::vector<ScanManifest::Chunk> sorted = mf.completed;
  std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
  for (const auto& c : sorted) out << "done " << c.lo << " " << c.hi << " " << c.digest << "\n";
  return out.str();
}

fs::path shard_path(const fs::path& dir, std::uint64_t lo, std::uint64_t hi) {
  return dir / ("chunk-" + std::to_string(lo) + "-" + std::to_string(hi) + ".csv");
}

// Same bound, chunking and policy; the output path may differ.
bool same_scan(ScanManifest a, ScanManifest b) {
  a.output.clear();
  b.output.clear();
  a.completed.clear();
  b.completed.clear();
  return manifest_text(a) == manifest_text(b);
}

ResultStore run_scan(ScanManifest manifest, const fs::path& dir, unsigned workers, std::size_t budget,
                     const std::atomic<bool>* stop, bool verbose, ScanStats* stats) {
  if (manifest.chunk_size == 0) throw Error(ErrorKind::DomainError, "chunk size must be positive");
  if (workers == 0) throw Error(ErrorKind::DomainError, "worker count must be at least 1");
  const bool persistent = !dir.empty();

  std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks;
  for (std::uint64_t lo = 1; lo <= manifest.max; lo += manifest.chunk_size) {
    chunks.emplace_back(lo, std::min(manifest.max, lo + manifest.chunk_size - 1));
  }

  std::map<std::uint64_t, std::vector<TwistResult>> done_rows;
  for (const auto& c : manifest.completed) {
    const fs::path shard = shard_path(dir, c.lo, c.hi);
    if (!fs::exists(shard)) throw Error(ErrorKind::ManifestCorrupt, "missing shard " + shard.string());
    const std::string text = read_file(shard);
    if (hex64(fnv1a(text)) != c.digest) {
      throw Error(ErrorKind::ManifestCorrupt, "digest mismatch for " + shard.string());
    }
    done_rows[c.lo] = parse_rows(text, shard.string());
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> pending;
  for (const auto& c : chunks) {
    if (!done_rows.contains(c.first)) pending.push_back(c);
  }

  PrimeCache cache;
  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::size_t computed = 0;

  auto worker = [&] {
    for (;;) {
      if (failed.load() || (stop && stop->load())) return;
      const std::size_t index = next.fetch_add(1);
      if (index >= pending.size() || (budget > 0 && index >= budget)) return;
      const auto [lo, hi] = pending[index];
      try {
        std::vector<TwistResult> rows;
        for (std::uint64_t m : cubefree_between(lo, hi)) rows.push_back(analyze_twist(m, cache, manifest.policy));
        const std::string text = store_csv(rows);
        std::lock_guard lock(mutex);
        if (persistent) {
          atomic_write(shard_path(dir, lo, hi), text);
          manifest.completed.push_back({lo, hi, hex64(fnv1a(text))});
          atomic_write(dir / kManifestName, manifest_text(manifest));
        }
        if (verbose) std::cerr << "chunk " << lo << "-" << hi << " done\n";
        done_rows[lo] = std::move(rows);
        ++computed;
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

  ResultStore store;
  for (auto& [lo, rows] : done_rows) {
    for (auto& r : rows) store.rows.push_back(std::move(r));
  }
  const bool complete = done_rows.size() == chunks.size();
  store.bound = complete ? manifest.max : covered_bound(store.rows);
  if (stats) {
    stats->chunks_total = chunks.size();
    stats->chunks_computed = computed;
    stats->chunks_reused = chunks.size() - pending.size();
    stats->quarantined = static_cast<std::size_t>(std::count_if(
        store.rows.begin(), store.rows.end(), [](auto& r) { return r.kind == RowKind::quarantined; }));
    stats->complete = complete;
  }
  if (complete && !manifest.output.empty()) write_store(manifest.output, store);
  return store;
}

}  // namespace

ResultStore scan_range(std::uint64_t x, const ScanConfig& config, ScanStats* stats) {
  ScanManifest manifest;
  manifest.max = x;
  manifest.chunk_size = config.chunk_size;
  manifest.policy = config.policy;
  manifest.output = config.output.string();
  if (!config.checkpoint_dir.empty()) {
    fs::create_directories(config.checkpoint_dir);
    const fs::path path = config.checkpoint_dir / kManifestName;
    if (fs::exists(path)) {
      ScanManifest existing = read_manifest(path);
      if (!same_scan(existing, manifest)) {
        throw Error(ErrorKind::DomainError,
                    "checkpoint directory " + config.checkpoint_dir.string() + " holds a different scan");
      }
      manifest.completed = existing.completed;
    } else {
      atomic_write(path, manifest_text(manifest));
    }
  }
  return run_scan(manifest, config.checkpoint_dir, config.workers, config.chunk_budget, config.stop,
                  config.verbose, stats);
}

ScanManifest read_manifest(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "cubictwist-scan-manifest 1") {
    throw Error(ErrorKind::ManifestCorrupt, path.string() + ": not a scan manifest");
  }
  ScanManifest mf;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto space = line.find(' ');
      if (space == std::string::npos) throw Error(ErrorKind::ManifestCorrupt, "bad line '" + line + "'");
      const std::string key = line.substr(0, space);
      const std::string value = line.substr(space + 1);
      auto& p = mf.policy;
      if (key == "max") mf.max = parse_uint(value);
      else if (key == "chunk") mf.chunk_size = parse_uint(value);
      else if (key == "output") mf.output = value == "-" ? "" : value;
      else if (key == "policy.tail") p.root.tail_tolerance = parse_real(value);
      else if (key == "policy.defect") p.root.defect_tolerance = parse_real(value);
      else if (key == "policy.separation") p.root.separation = parse_real(value);
      else if (key == "policy.root_escalations") p.root.escalations = static_cast<int>(parse_int(value));
      else if (key == "policy.root_escalation_factor") p.root.escalation_factor = parse_real(value);
      else if (key == "policy.lcap") p.l_tolerance_cap = parse_real(value);
      else if (key == "policy.scale") p.cutoff_scale = parse_real(value);
      else if (key == "policy.escalations") p.precision_escalations = static_cast<int>(parse_int(value));
      else if (key == "policy.escalation_factor") p.escalation_factor = parse_real(value);
      else if (key == "done") {
        const auto f = split(value, ' ');
        if (f.size() != 3) throw Error(ErrorKind::ManifestCorrupt, "bad chunk line '" + line + "'");
        mf.completed.push_back({parse_uint(f[0]), parse_uint(f[1]), std::string(f[2])});
      } else {
        throw Error(ErrorKind::ManifestCorrupt, "unknown key '" + key + "'");
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ManifestCorrupt) throw;
    throw Error(ErrorKind::ManifestCorrupt, path.string() + ": " + e.what());
  }
  if (mf.chunk_size == 0) throw Error(ErrorKind::ManifestCorrupt, path.string() + ": missing chunk size");
  return mf;
}

ResultStore resume(const fs::path& manifest_path, unsigned workers, const std::atomic<bool>* stop,
                   ScanStats* stats) {
  ScanManifest mf = read_manifest(manifest_path);
  return run_scan(std::move(mf), manifest_path.parent_path(), workers, 0, stop, false, stats);
}

}  // namespace cubictwist
