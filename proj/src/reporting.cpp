#include "factorisatio/reporting.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <utility>

#include "factorisatio/arith.hpp"
#include "factorisatio/errors.hpp"

namespace factorisatio {

namespace {

using njson = nlohmann::ordered_json;

njson hist_to_json(const std::map<std::uint32_t, std::uint64_t>& h) {
  njson o = njson::object();
  for (const auto& [key, count] : h) o[std::to_string(key)] = count;
  return o;
}

// All report output funnels through here: two-space indent, trailing newline.
std::string finish(const njson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string double_to_string(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

void validate_run_config(const RunConfig& cfg) {
  if (cfg.sieve_limit < 2)
    throw DomainError("sieve-limit must be at least 2");
  if (cfg.sieve_limit > kDefaultSpfBudgetEntries)
    throw DomainError("sieve-limit exceeds the allocation budget");
  if (cfg.workers < 1 || cfg.workers > 256)
    throw DomainError("workers must be between 1 and 256");
  if (cfg.format != "json" && cfg.format != "csv")
    throw DomainError("format must be \"json\" or \"csv\"");
  if (cfg.checkpoint_every != 0 && cfg.checkpoint_every < 10'000)
    throw DomainError("checkpoint-every must be 0 or at least 10000");
  if (cfg.node_budget < 1)
    throw DomainError("node-budget must be positive");
}

// ---------------------------------------------------------------------------
// Report JSON
// ---------------------------------------------------------------------------

std::string to_json(const ValueSetReport& rep) {
  njson j;
  j["x"] = rep.x.get_str();
  j["count"] = rep.count;
  j["exponent_profile"] = rep.exponent_profile;
  j["nodes_visited"] = rep.nodes_visited;
  j["nodes_pruned"] = rep.nodes_pruned;
  j["exact"] = rep.exact;
  if (!rep.values.empty()) {
    njson arr = njson::array();
    for (const auto& v : rep.values) arr.push_back(v.get_str());
    j["values"] = std::move(arr);
  }
  return finish(j);
}

std::string to_json(const SelfDividingReport& rep) {
  njson j;
  j["x"] = rep.x;
  j["count"] = rep.count;
  j["normalized"] = rep.normalized;
  j["omega_histogram"] = hist_to_json(rep.omega_histogram);
  return finish(j);
}

std::string to_json(const IntervalReport& rep) {
  njson j;
  j["x"] = rep.x;
  j["y"] = rep.y;
  j["sum_f"] = rep.sum_f.get_str();
  j["mean"] = rep.mean;
  j["k"] = rep.params.k;
  j["s"] = rep.params.s;
  j["A"] = rep.params.A;
  j["B"] = rep.params.B;
  j["S"] = rep.params.S;
  j["bound_main_term"] = rep.bound_main_term;
  j["S_estimated"] = rep.params.S_estimated;
  j["k_clamped"] = rep.params.k_clamped;
  j["regime"] = rep.params.asymptotic_regime ? "asymptotic" : "pre-asymptotic";
  return finish(j);
}

std::string to_json(const WindowInequalityReport& rep) {
  njson j;
  j["k"] = rep.k;
  j["A"] = rep.A;
  j["B"] = rep.B;
  j["lhs"] = rat_to_string(rep.lhs);
  j["rhs"] = rat_to_string(rep.rhs);
  j["holds"] = rep.holds;
  return finish(j);
}

std::string to_json(const MertensIdentityReport& rep) {
  njson j;
  j["log_y"] = rep.log_y;
  j["k"] = rep.k;
  j["s"] = rep.s;
  j["A"] = rep.A;
  j["B"] = rep.B;
  j["S_computed"] = rep.S_computed;
  j["S_closed_form"] = rep.S_closed_form;
  j["difference"] = rep.difference;
  j["used_estimate"] = rep.used_estimate;
  return finish(j);
}

std::string to_json(const HScanReport& rep) {
  njson j;
  j["log_y"] = rep.log_y;
  j["reference_k"] = rep.reference_k;
  j["argmax_k"] = rep.argmax_k;
  j["h_max"] = rep.h_max;
  njson grid = njson::array();
  for (const auto& e : rep.grid) {
    njson row;
    row["k"] = e.k;
    row["h"] = e.h;
    grid.push_back(std::move(row));
  }
  j["grid"] = std::move(grid);
  return finish(j);
}

std::string to_json(const StirlingPowerReport& rep) {
  njson j;
  j["i"] = rep.i;
  j["y"] = rep.y;
  j["k_i"] = rep.k_i;
  j["lhs"] = rep.lhs.get_str();
  j["rhs"] = rat_to_string(rep.rhs);
  j["holds"] = rep.holds;
  return finish(j);
}

std::string to_json(const OmegaDistribution& dist) {
  njson j;
  j["x"] = dist.x;
  j["bigomega_threshold"] = dist.bigomega_threshold;
  if (std::isnan(dist.small_omega_threshold)) {
    j["small_omega_threshold"] = nullptr;
  } else {
    j["small_omega_threshold"] = dist.small_omega_threshold;
  }
  j["count_bigomega_above"] = dist.count_bigomega_above;
  j["count_omega_below"] = dist.count_omega_below;
  j["omega_histogram"] = hist_to_json(dist.omega_histogram);
  j["bigomega_histogram"] = hist_to_json(dist.bigomega_histogram);
  return finish(j);
}

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

namespace {

// estimate/ratio cells for the partition table; nullopt renders empty (CSV)
// or null (JSON).
struct PartitionCells {
  std::optional<double> estimate;
  std::optional<double> ratio;
};

PartitionCells partition_cells(const PartitionTable& t, std::uint64_t n) {
  PartitionCells c;
  if (n == 0) return c;  // the asymptotic starts at n = 1
  double est = hardy_ramanujan_estimate(n);
  if (!std::isfinite(est)) return c;
  c.estimate = est;
  double pn = t.p(n).get_d();
  if (std::isfinite(pn)) c.ratio = pn / est;
  return c;
}

struct BellCells {
  double log_bell = 0.0;
  std::optional<double> log_estimate;
  std::optional<double> residual;
};

BellCells bell_cells(const BellSequence& t, std::uint64_t k) {
  BellCells c;
  c.log_bell = log_bignat(t.b(k));
  if (k >= 3) {
    double est = debruijn_log_bell(k);
    c.log_estimate = est;
    c.residual = c.log_bell - est;
  }
  return c;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? double_to_string(*v) : std::string();
}

njson opt_json(const std::optional<double>& v) {
  return v ? njson(*v) : njson(nullptr);
}

}  // namespace

std::string partition_table_csv(const PartitionTable& t) {
  std::string out = "n,p,estimate,ratio\n";
  for (std::uint64_t n = 0; n <= t.limit(); ++n) {
    PartitionCells c = partition_cells(t, n);
    out += std::to_string(n) + "," + t.p(n).get_str() + "," + opt_cell(c.estimate) +
           "," + opt_cell(c.ratio) + "\n";
  }
  return out;
}

std::string partition_table_json(const PartitionTable& t) {
  njson j;
  j["table"] = "partitions";
  j["limit"] = t.limit();
  njson rows = njson::array();
  for (std::uint64_t n = 0; n <= t.limit(); ++n) {
    PartitionCells c = partition_cells(t, n);
    njson row;
    row["n"] = n;
    row["p"] = t.p(n).get_str();
    row["estimate"] = opt_json(c.estimate);
    row["ratio"] = opt_json(c.ratio);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return finish(j);
}

std::string bell_table_csv(const BellSequence& t) {
  std::string out = "k,bell,log_bell,log_estimate,residual\n";
  for (std::uint64_t k = 0; k <= t.limit(); ++k) {
    BellCells c = bell_cells(t, k);
    out += std::to_string(k) + "," + t.b(k).get_str() + "," +
           double_to_string(c.log_bell) + "," + opt_cell(c.log_estimate) + "," +
           opt_cell(c.residual) + "\n";
  }
  return out;
}

std::string bell_table_json(const BellSequence& t) {
  njson j;
  j["table"] = "bell";
  j["limit"] = t.limit();
  njson rows = njson::array();
  for (std::uint64_t k = 0; k <= t.limit(); ++k) {
    BellCells c = bell_cells(t, k);
    njson row;
    row["k"] = k;
    row["bell"] = t.b(k).get_str();
    row["log_bell"] = c.log_bell;
    row["log_estimate"] = opt_json(c.log_estimate);
    row["residual"] = opt_json(c.residual);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return finish(j);
}

std::string stirling_row_csv(const StirlingRow& row) {
  std::string out = "l,stirling\n";
  for (std::uint64_t l = 1; l <= row.k; ++l)
    out += std::to_string(l) + "," + row.s(l).get_str() + "\n";
  return out;
}

std::string stirling_row_json(const StirlingRow& row) {
  njson j;
  j["table"] = "stirling";
  j["k"] = row.k;
  njson rows = njson::array();
  for (std::uint64_t l = 1; l <= row.k; ++l) {
    njson r;
    r["l"] = l;
    r["stirling"] = row.s(l).get_str();
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return finish(j);
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  njson j;
  j["format_version"] = cp.format_version;
  j["job_id"] = cp.job_id;
  j["last_completed_n"] = cp.last_completed_n;
  njson partial;
  partial["count"] = cp.partial_count;
  partial["omega_histogram"] = hist_to_json(cp.partial_histogram);
  partial["sum_f"] = cp.partial_sum_f.get_str();
  j["partial"] = std::move(partial);
  j["cache_snapshot_path"] = cp.cache_snapshot_path;

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CheckpointError("cannot open for write: " + tmp);
    out << j.dump(2) << "\n";
    out.flush();
    if (!out) throw CheckpointError("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CheckpointError("cannot move checkpoint into place: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot read checkpoint: " + path);
  njson j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  Checkpoint cp;
  try {
    cp.format_version = j.at("format_version").get<std::uint32_t>();
    if (cp.format_version != 1)
      throw CheckpointError("unsupported checkpoint format_version " +
                            std::to_string(cp.format_version));
    cp.job_id = j.at("job_id").get<std::string>();
    cp.last_completed_n = j.at("last_completed_n").get<std::uint64_t>();
    const njson& partial = j.at("partial");
    cp.partial_count = partial.at("count").get<std::uint64_t>();
    for (const auto& [key, val] : partial.at("omega_histogram").items()) {
      std::size_t pos = 0;
      unsigned long parsed = std::stoul(key, &pos);
      if (pos != key.size()) throw CheckpointError("bad histogram key: " + key);
      cp.partial_histogram[static_cast<std::uint32_t>(parsed)] =
          val.get<std::uint64_t>();
    }
    cp.partial_sum_f = BigNat(partial.at("sum_f").get<std::string>());
    cp.cache_snapshot_path = j.at("cache_snapshot_path").get<std::string>();
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("checkpoint schema violation: ") + e.what());
  }
  return cp;
}

}  // namespace factorisatio
