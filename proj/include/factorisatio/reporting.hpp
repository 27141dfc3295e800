#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "factorisatio/harness.hpp"

namespace factorisatio {

// Serialization layer: every analysis result renders to a stable JSON schema
// (big integers as decimal strings, rationals as "num/den", doubles in
// shortest round-trip form), and the arithmetic tables also render as CSV.
// Output is deterministic byte-for-byte for identical inputs, regardless of
// worker count — tests rely on that.

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  std::uint64_t sieve_limit = 1'000'000;
  unsigned workers = 1;
  std::string cache_path;             // empty: start with a cold cache
  std::string format = "json";        // "json", or "csv" for tables
  std::uint64_t checkpoint_every = 0; // block size in n; 0 disables
  std::uint64_t node_budget = 100'000'000;
};

// Throws DomainError on out-of-range settings.  Checkpoint blocks under 10^4
// are rejected: the snapshot write would dominate the work between them.
void validate_run_config(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Report JSON
// ---------------------------------------------------------------------------

std::string to_json(const ValueSetReport& rep);
std::string to_json(const SelfDividingReport& rep);
std::string to_json(const IntervalReport& rep);
std::string to_json(const WindowInequalityReport& rep);
std::string to_json(const MertensIdentityReport& rep);
std::string to_json(const HScanReport& rep);
std::string to_json(const StirlingPowerReport& rep);
std::string to_json(const OmegaDistribution& dist);

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

// partitions: n,p,estimate,ratio — estimate is the closed-form asymptotic,
// ratio is p / estimate; both cells empty where undefined (n = 0) or not
// finite in double.
std::string partition_table_csv(const PartitionTable& t);
std::string partition_table_json(const PartitionTable& t);

// bell: k,bell,log_bell,log_estimate,residual — log_estimate is the five-term
// expansion (defined from k = 3), residual = log_bell - log_estimate.
std::string bell_table_csv(const BellSequence& t);
std::string bell_table_json(const BellSequence& t);

// stirling: l,stirling over one row.
std::string stirling_row_csv(const StirlingRow& row);
std::string stirling_row_json(const StirlingRow& row);

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

// On-disk resume point for the long scans.  The aggregate fields are a
// superset over the jobs that checkpoint (selfdiv uses count + histogram,
// interval uses sum_f); unused ones stay at their defaults.
struct Checkpoint {
  std::uint32_t format_version = 1;
  std::string job_id;                  // binds the file to one exact job
  std::uint64_t last_completed_n = 0;
  std::uint64_t partial_count = 0;
  std::map<std::uint32_t, std::uint64_t> partial_histogram;
  BigNat partial_sum_f = 0;
  std::string cache_snapshot_path;     // empty: no snapshot taken
};

// Writes via a temp file in the same directory plus rename, so a crash can
// only ever leave the previous intact checkpoint behind.
void save_checkpoint(const Checkpoint& cp, const std::string& path);

// Throws CheckpointError on unreadable files, schema violations, or a
// format_version from a different era.
Checkpoint load_checkpoint(const std::string& path);

// Shortest decimal rendering of a double that parses back to the same value;
// used by both the CSV emitters and anything hand-assembling numbers.
std::string double_to_string(double v);

}  // namespace factorisatio
