#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "factorisatio/bignat.hpp"
#include "factorisatio/multiplicative.hpp"
#include "factorisatio/partitions.hpp"

namespace factorisatio {

// Empirical studies of f at desk scale: the distinct-value set of f, the
// density of n with f(n) | n, short-interval averages of f, and the exact
// finite-window inequalities backing those studies.

// ---------------------------------------------------------------------------
// Value-set search
// ---------------------------------------------------------------------------

struct PruningBounds {
  std::uint32_t alpha_max = 0;  // largest a with p(a) <= x
  std::uint32_t k_max = 0;      // largest k with B_k <= x
};

// Sharp per-axis caps for the signature search below: prime-power signatures
// force f >= p(alpha) and squarefree signatures force f >= B_k, so exponents
// above alpha_max or more than k_max distinct primes push f beyond x.
// Requires x >= 1.
PruningBounds pruning_bounds(const BigNat& x);

struct ValueSetReport {
  BigNat x;
  std::uint64_t count = 0;               // distinct values of f not exceeding x
  std::vector<BigNat> values;            // ascending; filled only when retained
  double exponent_profile = 0.0;         // log(count) loglog x / (log x logloglog x)
  std::uint64_t nodes_visited = 0;       // lattice nodes whose f was evaluated
  std::uint64_t nodes_pruned = 0;        // nodes cut because f > x
  bool exact = true;                     // false when the node budget ran out
};

// Enumerates { f(n) : f(n) <= x } without touching any particular n: walks
// the lattice of exponent signatures, where each node's children append a
// new unit exponent or bump the last one.  Both child moves multiply the
// least representative by a fresh or repeated prime, so f never decreases
// along an edge (divisibility monotonicity) and any node with f > x closes
// its whole subtree.  Hitting node_budget stops the walk and flags the
// report non-exact rather than guessing.
ValueSetReport enumerate_value_set(const BigNat& x, SignatureCache& cache,
                                   bool retain_values = false,
                                   std::uint64_t node_budget = 100'000'000);

// ---------------------------------------------------------------------------
// Self-dividing counts:  n with f(n) | n
// ---------------------------------------------------------------------------

// Running aggregates, shaped for block-at-a-time accumulation so a scan can
// stop at a block boundary, persist, and resume bit-exactly.
struct SelfDividingScan {
  std::uint64_t count = 0;
  std::map<std::uint32_t, std::uint64_t> omega_histogram;  // omega(n) over members
};

// Adds [lo, hi] to the scan.  Requires 2 <= lo <= hi <= table.limit.
void scan_self_dividing(std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
                        SignatureCache& cache, unsigned workers, SelfDividingScan& scan);

struct SelfDividingReport {
  std::uint64_t x = 0;
  std::uint64_t count = 0;
  double normalized = 0.0;  // count * log x / x
  std::map<std::uint32_t, std::uint64_t> omega_histogram;
};

SelfDividingReport finalize_self_dividing(std::uint64_t x, const SelfDividingScan& scan);

// Whole-range convenience: members of [2, x].
SelfDividingReport count_self_dividing(std::uint64_t x, const SpfTable& table,
                                       SignatureCache& cache, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Short-interval averages
// ---------------------------------------------------------------------------

struct IntervalParams {
  std::uint64_t k = 0;   // floor((1/sqrt(2e)) sqrt(log y)), clamped up to 1
  std::uint64_t s = 0;   // floor(3 loglog y)
  double A = 0.0;        // k^2
  double B = 0.0;        // y^(1/(k+s+1))
  double S = 0.0;        // sum of prime reciprocals over (A, B]
  bool S_estimated = false;        // true when B was too large to sieve
  bool k_clamped = false;          // true when the floor came out 0 for small y
  bool asymptotic_regime = false;  // y > e^(e^e)
};

// Parameter bundle used by the interval study; log_y is the natural log of y
// (y itself may be far beyond floating range).  S is sieved exactly while
// B <= sieve_cap and falls back to the loglog-gap estimate beyond it.
// Requires y >= 3 so loglog y is positive.
IntervalParams interval_parameters(double log_y, std::uint64_t sieve_cap = 100'000'000);

struct IntervalScan {
  BigNat sum_f = 0;
};

// Adds exact f over [lo, hi] to the scan.  Uses table-backed bulk evaluation
// when the range fits under table.limit, otherwise a windowed factorizer that
// needs no table (so intervals near 1e8 work with a small table).  lo >= 1;
// f(1) = 1 contributes when lo = 1.
void scan_interval_f(std::uint64_t lo, std::uint64_t hi, const SpfTable* table,
                     SignatureCache& cache, unsigned workers, IntervalScan& scan);

struct IntervalReport {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  BigNat sum_f = 0;           // sum of f over [max(x,1), x+y]
  double mean = 0.0;          // sum_f / y
  IntervalParams params;
  double bound_main_term = 0.0;  // exp((4/sqrt(2e)) sqrt(log y) / loglog y)
};

// Mean of f over the closed interval [x, x+y], normalized by y (the window
// is inclusive at both ends, so the sum has y+1 terms when x >= 1; x = 0
// clamps to [1, y] and gives the plain average over the first y integers).
// Requires y >= 3 (the parameter formulas need loglog y > 0).
IntervalReport interval_average(std::uint64_t x, std::uint64_t y, const SpfTable* table,
                                SignatureCache& cache, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Finite prime-window inequalities
// ---------------------------------------------------------------------------

// Squarefree products of exactly k distinct primes from [A, B], ascending.
// Throws ResourceError past result_budget or on 64-bit overflow of a product.
std::vector<std::uint64_t> enumerate_window_products(std::uint32_t k, double A, double B,
                                                     std::uint64_t result_budget = 10'000'000);

struct WindowInequalityReport {
  std::uint32_t k = 0;
  double A = 0.0, B = 0.0;
  BigRat lhs;    // sum of 1/m over the window's k-prime squarefree products
  BigRat rhs;    // S^k / k!  -  (sum 1/p^2) S^(k-2) / (k-2)!
  bool holds = false;
};

// Exact-rational check of the window inequality.  The left side is the k-th
// elementary symmetric function of the prime reciprocals (computed by DP,
// not by enumerating M, so it stays feasible when |M| explodes).  k >= 2.
WindowInequalityReport window_inequality_check(std::uint32_t k, double A, double B);

struct MertensIdentityReport {
  double log_y = 0.0;
  std::uint64_t k = 0, s = 0;
  double A = 0.0, B = 0.0;
  double S_computed = 0.0;    // sieved reciprocal sum, or loglog-gap estimate
  double S_closed_form = 0.0; // loglog y - log k - loglog k - log 2
  double difference = 0.0;    // |S_computed - S_closed_form|
  bool used_estimate = false; // true when B exceeded the sieve cap
};

// Compares the sieved window sum against its four-term closed form.  The
// closed form absorbs log((k+s+1)/k) into its error term, so the difference
// is expected to shrink only as k grows.  Requires k >= 3.
MertensIdentityReport mertens_window_identity(double log_y, std::uint64_t k, std::uint64_t s,
                                              std::uint64_t sieve_cap = 100'000'000);

// h(k) = k log(loglog y - log k - loglog k - log 2) - k loglog k
//        + k loglog k / log k + k / log k.
// Requires k >= 3; throws DomainError when the inner log argument is not
// positive (k out of regime for this y).
double h_function(std::uint64_t k, double log_y);

struct HScanEntry {
  std::uint64_t k = 0;
  double h = 0.0;
};

struct HScanReport {
  double log_y = 0.0;
  std::vector<HScanEntry> grid;    // k = 3 upward while in regime
  std::uint64_t argmax_k = 0;
  double h_max = 0.0;
  double reference_k = 0.0;        // (1/sqrt(2e)) sqrt(log y)
};

// Evaluates h over the full in-regime grid of k and reports the maximizer.
HScanReport h_scan(double log_y);

struct StirlingPowerReport {
  std::uint32_t i = 0;
  std::uint32_t y = 0;
  std::uint64_t k_i = 0;  // argmax of S(i, .)
  BigNat lhs;             // f of the signature (y, y, ..., y) with i entries
  BigRat rhs;             // S(i, k_i)^y / (y k_i)!
  bool holds = false;
};

// Exact check that f((p1...pi)^y) >= S(i,k_i)^y / (y k_i)!.  The product
// i * y is capped (default 16) because the left side is a full factorization
// count of an i-dimensional lattice.
StirlingPowerReport stirling_power_bound_check(std::uint32_t i, std::uint32_t y,
                                               std::uint32_t iy_budget = 16);

// ---------------------------------------------------------------------------
// omega statistics
// ---------------------------------------------------------------------------

struct OmegaDistribution {
  std::uint64_t x = 0;
  std::map<std::uint32_t, std::uint64_t> omega_histogram;     // distinct primes
  std::map<std::uint32_t, std::uint64_t> bigomega_histogram;  // with multiplicity
  double bigomega_threshold = 0.0;      // 10 loglog x
  double small_omega_threshold = 0.0;   // loglog x / logloglog x; NaN if undefined
  std::uint64_t count_bigomega_above = 0;   // n with Omega(n) > 10 loglog x
  std::uint64_t count_omega_below = 0;      // n with omega(n) < the small threshold
};

// Joint omega/Omega histogram over [2, x] plus exceedance counts at the two
// sparse-set thresholds used in the density argument.  Requires x >= 2.
OmegaDistribution omega_distribution(std::uint64_t x, const SpfTable& table);

}  // namespace factorisatio
