// factorisatio: exact computation of the multiplicative partition function
// f(n) -- the number of ways to write n as an unordered product of integers
// greater than 1 -- plus the analyses built on top of it: arithmetic tables,
// the distinct-value set of f, the density of n with f(n) | n, short-interval
// averages, and the finite prime-window inequalities backing those studies.
//
// All reports go to stdout (JSON, or CSV for tables); logging goes to stderr.
// Exit codes:
//   0  success
//   2  usage or domain error (bad arguments, violated precondition)
//   3  a resource budget was exceeded
//   4  result produced but not exact (value-set walk hit its node budget)
//   5  checkpoint trouble (missing, corrupt, or from a different job)

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "factorisatio/arith.hpp"
#include "factorisatio/errors.hpp"
#include "factorisatio/harness.hpp"
#include "factorisatio/multiplicative.hpp"
#include "factorisatio/partitions.hpp"
#include "factorisatio/reporting.hpp"

namespace {

using namespace factorisatio;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInexact = 4;
constexpr int kExitCheckpoint = 5;

struct CliOptions {
  RunConfig cfg;
  // f
  std::uint64_t f_n = 0;
  // tables
  std::string table_kind;
  std::uint64_t table_limit = 0;
  // values
  std::string values_x;
  bool values_retain = false;
  // selfdiv
  std::uint64_t selfdiv_x = 0;
  // interval
  std::uint64_t interval_x = 0;
  std::uint64_t interval_y = 0;
  // window
  std::uint32_t window_k = 0;
  double window_A = 0.0;
  double window_B = 0.0;
  // mcheck / hscan (y given as its base-10 exponent so 10^1000 is sayable)
  double log10_y = 0.0;
  std::optional<std::uint64_t> mcheck_k;
  std::optional<std::uint64_t> mcheck_s;
  // omegahist
  std::uint64_t omega_x = 0;
  // checkpointing (selfdiv, interval)
  std::string checkpoint_file;
  bool resume = false;
  std::uint64_t halt_at = 0;
};

// The long scans share one shape: blocks of checkpoint_every between fixed
// absolute boundaries, aggregates folded per block, snapshot + checkpoint
// after each block.  Returns false when the run halted early at --halt-at
// (checkpoint written, no report yet).
template <typename Aggregates, typename ScanBlock, typename ToCheckpoint,
          typename FromCheckpoint>
bool run_checkpointed(const CliOptions& opt, const std::string& job_id,
                      std::uint64_t lo, std::uint64_t hi, SignatureCache& cache,
                      Aggregates& agg, ScanBlock scan_block, ToCheckpoint to_cp,
                      FromCheckpoint from_cp) {
  std::uint64_t start = lo;
  if (opt.resume) {
    Checkpoint cp = load_checkpoint(opt.checkpoint_file);
    if (cp.job_id != job_id)
      throw CheckpointError("checkpoint belongs to job \"" + cp.job_id +
                            "\", expected \"" + job_id + "\"");
    if (cp.last_completed_n < lo || cp.last_completed_n > hi)
      throw CheckpointError("checkpoint progress is outside this job's range");
    if (!cp.cache_snapshot_path.empty()) {
      if (!std::filesystem::exists(cp.cache_snapshot_path))
        throw CheckpointError("cache snapshot missing: " + cp.cache_snapshot_path);
      cache.load_file(cp.cache_snapshot_path);
    }
    from_cp(cp);
    start = cp.last_completed_n + 1;
    std::cerr << "resumed from n=" << cp.last_completed_n << "\n";
    if (start > hi) return true;  // the checkpoint already covers the range
  }

  const bool blocks_on = !opt.checkpoint_file.empty() && opt.cfg.checkpoint_every > 0;
  if (!blocks_on) {
    scan_block(start, hi);
    return true;
  }

  const std::uint64_t every = opt.cfg.checkpoint_every;
  while (start <= hi) {
    // Boundaries are absolute (relative to lo), so an interrupted run and a
    // straight-through run cut the range identically.
    std::uint64_t block_hi = std::min(hi, lo + ((start - lo) / every + 1) * every - 1);
    scan_block(start, block_hi);

    Checkpoint cp;
    cp.job_id = job_id;
    cp.last_completed_n = block_hi;
    cp.cache_snapshot_path = opt.checkpoint_file + ".cache";
    to_cp(cp);
    cache.save_file(cp.cache_snapshot_path);
    save_checkpoint(cp, opt.checkpoint_file);

    if (opt.halt_at != 0 && block_hi >= opt.halt_at && block_hi < hi) {
      std::cerr << "halted after n=" << block_hi << " (checkpoint written)\n";
      return false;
    }
    start = block_hi + 1;
  }
  return true;
}

int run(const CliOptions& opt, const std::string& subcommand) {
  validate_run_config(opt.cfg);

  // One shared signature cache per process; optionally warmed from and
  // persisted to --cache.
  SignatureCache cache;
  if (!opt.cfg.cache_path.empty() && std::filesystem::exists(opt.cfg.cache_path))
    cache.load_file(opt.cfg.cache_path);
  auto persist_cache = [&] {
    if (!opt.cfg.cache_path.empty()) cache.save_file(opt.cfg.cache_path);
  };

  if (subcommand == "f") {
    if (opt.f_n == 0) throw DomainError("f is undefined at 0");
    std::cout << count_factorizations(opt.f_n).get_str() << "\n";
    return kExitOk;
  }

  if (subcommand == "tables") {
    const bool csv = opt.cfg.format == "csv";
    if (opt.table_kind == "partitions") {
      PartitionTable t = partition_table(opt.table_limit);
      std::cout << (csv ? partition_table_csv(t) : partition_table_json(t));
    } else if (opt.table_kind == "bell") {
      BellSequence t = bell_sequence(opt.table_limit);
      std::cout << (csv ? bell_table_csv(t) : bell_table_json(t));
    } else if (opt.table_kind == "stirling") {
      StirlingRow row = stirling_row(opt.table_limit);
      std::cout << (csv ? stirling_row_csv(row) : stirling_row_json(row));
    } else {
      throw DomainError("unknown table \"" + opt.table_kind +
                        "\" (expected partitions, bell, or stirling)");
    }
    return kExitOk;
  }

  // Everything below reports JSON regardless of --format; CSV has no sane
  // rendering for nested reports.
  if (opt.cfg.format != "json")
    throw DomainError("subcommand \"" + subcommand + "\" only reports JSON");

  if (subcommand == "values") {
    ValueSetReport rep = enumerate_value_set(BigNat(opt.values_x), cache,
                                             opt.values_retain, opt.cfg.node_budget);
    std::cout << to_json(rep);
    persist_cache();
    return rep.exact ? kExitOk : kExitInexact;
  }

  if (subcommand == "selfdiv") {
    if (opt.selfdiv_x < 2) throw DomainError("selfdiv: x must be >= 2");
    if (opt.selfdiv_x > opt.cfg.sieve_limit)
      throw DomainError("selfdiv: x exceeds --sieve-limit");
    SpfTable table = build_spf(opt.cfg.sieve_limit);
    SelfDividingScan scan;
    std::string job_id = "selfdiv:x=" + std::to_string(opt.selfdiv_x);
    bool complete = run_checkpointed(
        opt, job_id, 2, opt.selfdiv_x, cache, scan,
        [&](std::uint64_t lo, std::uint64_t hi) {
          scan_self_dividing(lo, hi, table, cache, opt.cfg.workers, scan);
        },
        [&](Checkpoint& cp) {
          cp.partial_count = scan.count;
          cp.partial_histogram = scan.omega_histogram;
        },
        [&](const Checkpoint& cp) {
          scan.count = cp.partial_count;
          scan.omega_histogram = cp.partial_histogram;
        });
    if (!complete) return kExitOk;
    std::cout << to_json(finalize_self_dividing(opt.selfdiv_x, scan));
    persist_cache();
    return kExitOk;
  }

  if (subcommand == "interval") {
    if (opt.interval_y < 3) throw DomainError("interval: y must be >= 3");
    if (opt.interval_x > std::numeric_limits<std::uint64_t>::max() - opt.interval_y)
      throw DomainError("interval: x + y overflows 64 bits");
    std::uint64_t lo = std::max<std::uint64_t>(opt.interval_x, 1);
    std::uint64_t hi = opt.interval_x + opt.interval_y;
    SpfTable table;
    const SpfTable* table_ptr = nullptr;
    if (hi <= opt.cfg.sieve_limit) {
      table = build_spf(opt.cfg.sieve_limit);
      table_ptr = &table;
    }
    IntervalScan scan;
    std::string job_id = "interval:x=" + std::to_string(opt.interval_x) +
                         ":y=" + std::to_string(opt.interval_y);
    bool complete = run_checkpointed(
        opt, job_id, lo, hi, cache, scan,
        [&](std::uint64_t block_lo, std::uint64_t block_hi) {
          scan_interval_f(block_lo, block_hi, table_ptr, cache, opt.cfg.workers, scan);
        },
        [&](Checkpoint& cp) { cp.partial_sum_f = scan.sum_f; },
        [&](const Checkpoint& cp) { scan.sum_f = cp.partial_sum_f; });
    if (!complete) return kExitOk;

    // The scan already holds the whole window's sum; reuse interval_average's
    // parameter assembly by rebuilding the report from it.
    IntervalReport rep;
    rep.x = opt.interval_x;
    rep.y = opt.interval_y;
    rep.sum_f = scan.sum_f;
    rep.mean = rep.sum_f.get_d() / static_cast<double>(opt.interval_y);
    double log_y = std::log(static_cast<double>(opt.interval_y));
    rep.params = interval_parameters(log_y);
    rep.bound_main_term = std::exp((4.0 / std::sqrt(2.0 * std::exp(1.0))) *
                                   std::sqrt(log_y) / std::log(log_y));
    std::cout << to_json(rep);
    persist_cache();
    return kExitOk;
  }

  if (subcommand == "window") {
    WindowInequalityReport rep = window_inequality_check(opt.window_k, opt.window_A, opt.window_B);
    std::cout << to_json(rep);
    return kExitOk;
  }

  if (subcommand == "mcheck") {
    double log_y = opt.log10_y * std::log(10.0);
    IntervalParams params = interval_parameters(log_y);
    std::uint64_t k = opt.mcheck_k.value_or(params.k);
    std::uint64_t s = opt.mcheck_s.value_or(params.s);
    std::cout << to_json(mertens_window_identity(log_y, k, s));
    return kExitOk;
  }

  if (subcommand == "hscan") {
    std::cout << to_json(h_scan(opt.log10_y * std::log(10.0)));
    return kExitOk;
  }

  if (subcommand == "omegahist") {
    if (opt.omega_x > opt.cfg.sieve_limit)
      throw DomainError("omegahist: x exceeds --sieve-limit");
    SpfTable table = build_spf(opt.cfg.sieve_limit);
    std::cout << to_json(omega_distribution(opt.omega_x, table));
    return kExitOk;
  }

  throw DomainError("no subcommand given (try --help)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact multiplicative partition counts f(n) and the studies built on them"};
  app.require_subcommand(0, 1);

  CliOptions opt;
  // --cache default comes from the environment so batch jobs can share one
  // warm cache without repeating the flag; an explicit --cache wins.
  if (const char* env = std::getenv("FACTORISATIO_CACHE")) opt.cfg.cache_path = env;

  app.add_option("--sieve-limit", opt.cfg.sieve_limit,
                 "factor-table ceiling for scans (default 1e6)");
  app.add_option("--workers", opt.cfg.workers, "worker threads for bulk scans");
  app.add_option("--cache", opt.cfg.cache_path,
                 "signature-cache file, loaded if present and saved on success");
  app.add_option("--format", opt.cfg.format, "output format: json, or csv (tables only)");
  app.add_option("--checkpoint-every", opt.cfg.checkpoint_every,
                 "block size for checkpointed scans (0 disables, min 1e4)");
  app.add_option("--node-budget", opt.cfg.node_budget,
                 "node ceiling for the value-set walk");

  CLI::App* cmd_f = app.add_subcommand("f", "print f(n) exactly");
  cmd_f->add_option("n", opt.f_n, "argument")->required();

  CLI::App* cmd_tables =
      app.add_subcommand("tables", "arithmetic tables (partitions, bell, stirling)");
  cmd_tables->add_option("kind", opt.table_kind, "partitions | bell | stirling")->required();
  cmd_tables->add_option("limit", opt.table_limit, "table limit / row index")->required();

  CLI::App* cmd_values =
      app.add_subcommand("values", "distinct values of f up to x (signature-lattice walk)");
  cmd_values->add_option("x", opt.values_x, "ceiling (decimal, any size)")->required();
  cmd_values->add_flag("--retain", opt.values_retain, "include the sorted values in the report");

  CLI::App* cmd_selfdiv =
      app.add_subcommand("selfdiv", "count n <= x with f(n) dividing n");
  cmd_selfdiv->add_option("x", opt.selfdiv_x, "scan ceiling")->required();

  CLI::App* cmd_interval =
      app.add_subcommand("interval", "exact mean of f over [x, x+y]");
  cmd_interval->add_option("x", opt.interval_x, "window start (0 clamps to 1)")->required();
  cmd_interval->add_option("y", opt.interval_y, "window length")->required();

  CLI::App* cmd_window = app.add_subcommand(
      "window", "exact rational prime-window inequality check for k-prime products");
  cmd_window->add_option("k", opt.window_k, "number of prime factors")->required();
  cmd_window->add_option("A", opt.window_A, "window lower end")->required();
  cmd_window->add_option("B", opt.window_B, "window upper end")->required();

  CLI::App* cmd_mcheck = app.add_subcommand(
      "mcheck", "sieved prime-reciprocal window sum vs its closed form");
  cmd_mcheck->add_option("log10y", opt.log10_y, "base-10 exponent of y")->required();
  std::uint64_t mk = 0, ms = 0;
  CLI::Option* mk_opt = cmd_mcheck->add_option("--k", mk, "override k");
  CLI::Option* ms_opt = cmd_mcheck->add_option("--s", ms, "override s");

  CLI::App* cmd_hscan =
      app.add_subcommand("hscan", "h(k) growth-exponent curve over its whole k grid");
  cmd_hscan->add_option("log10y", opt.log10_y, "base-10 exponent of y")->required();

  CLI::App* cmd_omega =
      app.add_subcommand("omegahist", "omega/Omega histograms with sparse-set thresholds");
  cmd_omega->add_option("x", opt.omega_x, "scan ceiling")->required();

  for (CLI::App* cmd : {cmd_selfdiv, cmd_interval}) {
    cmd->add_option("--checkpoint-file", opt.checkpoint_file, "checkpoint path");
    cmd->add_flag("--resume", opt.resume, "resume from --checkpoint-file");
    cmd->add_option("--halt-at", opt.halt_at,
                    "stop after the checkpoint block covering this n (testing aid)");
  }

  // Global flags remain usable after a subcommand name.
  for (CLI::App* cmd : {cmd_f, cmd_tables, cmd_values, cmd_selfdiv, cmd_interval,
                        cmd_window, cmd_mcheck, cmd_hscan, cmd_omega})
    cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the parser's message
    return kExitUsage;
  }

  try {
    if (app.get_subcommands().empty())
      throw DomainError("no subcommand given (try --help)");
    if (*mk_opt) opt.mcheck_k = mk;
    if (*ms_opt) opt.mcheck_s = ms;
    if (opt.halt_at != 0 &&
        (opt.checkpoint_file.empty() || opt.cfg.checkpoint_every == 0))
      throw DomainError("--halt-at needs --checkpoint-file and --checkpoint-every");
    if (opt.resume && opt.checkpoint_file.empty())
      throw DomainError("--resume needs --checkpoint-file");
    return run(opt, app.get_subcommands().front()->get_name());
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint: " << e.what() << "\n";
    return kExitCheckpoint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
