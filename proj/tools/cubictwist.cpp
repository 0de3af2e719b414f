#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "cubictwist/classnum.hpp"
#include "cubictwist/errors.hpp"
#include "cubictwist/io.hpp"
#include "cubictwist/scan.hpp"
#include "cubictwist/stats.hpp"

using namespace cubictwist;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow:
    case ErrorKind::CutoffTooSmall:
    case ErrorKind::AmbiguousSign:
    case ErrorKind::NotNearInteger:
    case ErrorKind::NotASquare:
    case ErrorKind::RoundingMarginFailed:
      return kExitNumerical;
    case ErrorKind::Io:
    case ErrorKind::ManifestCorrupt:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

unsigned default_threads() {
  if (const char* env = std::getenv("CUBICTWIST_THREADS")) {
    try {
      const auto n = parse_uint(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const Error&) {
    }
    std::cerr << "ignoring CUBICTWIST_THREADS='" << env << "'\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    atomic_write(out, text);
  }
}

int cmd_twist(std::uint64_t m, const TwistPolicy& policy) {
  PrimeCache cache;
  const TwistResult r = analyze_twist(m, cache, policy);
  std::cout << "m " << r.m << "\n";
  std::cout << "epsilon " << r.epsilon << "\n";
  std::cout << "conductor " << r.conductor << "\n";
  if (r.l1_value) std::cout << "L1 " << format_real(*r.l1_value) << " +- " << format_real(*r.l1_error) << "\n";
  std::cout << "c_fin " << r.c_fin << "\n";
  std::cout << "c_inf " << format_real(r.c_inf) << "\n";
  std::cout << "t_m " << r.t_m << "\n";
  std::cout << "kind " << to_string(r.kind) << "\n";
  std::cout << "sha " << r.sha << "\n";
  if (r.kind == RowKind::quarantined) {
    std::cerr << "m = " << m << ": numerical certification failed after escalation\n";
    return kExitNumerical;
  }
  return 0;
}

void report_scan(const ScanStats& stats, const std::string& checkpoint) {
  std::cerr << "chunks: " << stats.chunks_computed << " computed, " << stats.chunks_reused << " reused, "
            << stats.chunks_total << " total; quarantined rows: " << stats.quarantined << "\n";
  if (!stats.complete) {
    std::cerr << "scan incomplete";
    if (!checkpoint.empty()) std::cerr << "; continue with: cubictwist resume " << (fs::path(checkpoint) / kManifestName).string();
    std::cerr << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic twists x^3 + y^3 = m: L-values, analytic Sha, statistics and real quadratic class numbers"};
  app.require_subcommand(1);

  unsigned threads = default_threads();
  double tol = 1e-4;

  auto* twist = app.add_subcommand("twist", "Analyze one cube-free m");
  std::uint64_t m = 0;
  twist->add_option("m", m, "Cube-free twist parameter")->required();
  twist->add_option("--tol", tol, "Cap on the central-value error bound")->check(CLI::PositiveNumber);

  auto* scan = app.add_subcommand("scan", "Scan all cube-free m <= X");
  std::uint64_t max = 0;
  std::uint64_t chunk = 1024;
  std::string out;
  std::string checkpoint;
  scan->add_option("--max", max, "Upper bound X")->required();
  scan->add_option("--threads", threads, "Worker threads (default: CUBICTWIST_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  scan->add_option("--chunk", chunk, "Integers per chunk")->check(CLI::PositiveNumber);
  scan->add_option("--out", out, "Result store CSV (default: stdout)");
  scan->add_option("--checkpoint", checkpoint, "Checkpoint directory for resumable runs");
  scan->add_option("--tol", tol, "Cap on the central-value error bound")->check(CLI::PositiveNumber);

  auto* resume_cmd = app.add_subcommand("resume", "Continue a checkpointed scan");
  std::string manifest;
  resume_cmd->add_option("manifest", manifest, "Path to manifest.txt or its directory")->required();
  resume_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Emit a statistic as CSV from a result store");
  std::string store_path;
  std::string report;
  ReportParams params;
  stats->add_option("--store", store_path, "Result store (scan output, or classnum output for Hkx/h1-normalized)")
      ->required();
  stats->add_option("--report", report,
                    "ratio-fg, gstar-vs-watkins, g-normalized, Fkx, delaunay, divisibility, hist-logL, hist-sha2, "
                    "hist-sha3, Hkx, h1-normalized")
      ->required();
  stats->add_option("--k", params.k, "k for Fkx and Hkx")->check(CLI::PositiveNumber);
  stats->add_option("--p", params.p, "Prime for divisibility")->check(CLI::PositiveNumber);
  stats->add_flag("--primes-only", params.primes_only, "Restrict divisibility to prime m");
  stats->add_option("--out", out, "Output CSV (default: stdout)");

  auto* classnum = app.add_subcommand("classnum", "Class numbers of Q(sqrt d) for square-free d <= X");
  classnum->add_option("--max", max, "Upper bound X")->required();
  classnum->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  classnum->add_option("--out", out, "Class store CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    TwistPolicy policy;
    policy.l_tolerance_cap = tol;
    if (*twist) return cmd_twist(m, policy);

    if (*scan) {
      ScanConfig config;
      config.workers = threads;
      config.chunk_size = chunk;
      config.checkpoint_dir = checkpoint;
      config.policy = policy;
      config.stop = &g_stop;
      const bool to_stdout = out.empty() || out == "-";
      if (!to_stdout) config.output = out;
      ScanStats st;
      const ResultStore store = scan_range(max, config, &st);
      if (to_stdout && st.complete) std::cout << store_csv(store.rows);
      report_scan(st, checkpoint);
      return 0;
    }

    if (*resume_cmd) {
      fs::path path = manifest;
      if (fs::is_directory(path)) path /= kManifestName;
      ScanStats st;
      resume(path, threads, &g_stop, &st);
      report_scan(st, path.parent_path().string());
      return 0;
    }

    if (*stats) {
      if (is_class_report(report)) {
        emit(class_report(read_class_store(store_path), report, params), out);
      } else if (is_twist_report(report)) {
        const ResultStore store = read_store(store_path);
        if (report.rfind("hist-", 0) == 0) std::cerr << "histogram excludes m = 1, 2\n";
        emit(twist_report(store, report, params), out);
      } else {
        std::cerr << "unknown report '" << report << "'\n";
        return kExitUsage;
      }
      return 0;
    }

    if (*classnum) {
      emit(class_store_csv(classnum_range(max, threads)), out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
