#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "factorisatio/bignat.hpp"

namespace factorisatio {

// ---------------------------------------------------------------------------
// Core integer types
// ---------------------------------------------------------------------------

// Smallest-prime-factor table for [2, limit].  spf[n] is the least prime
// dividing n; spf[0] and spf[1] are 0.  Immutable after construction and
// safe to share across threads.
struct SpfTable {
  std::uint64_t limit = 0;
  std::vector<std::uint32_t> spf;
};

// Prime factorization with strictly increasing primes and exponents >= 1.
// The empty factorization represents n = 1.
struct Factorization {
  struct Term {
    std::uint64_t prime;
    std::uint32_t exponent;
  };
  std::vector<Term> terms;

  std::uint64_t value() const;                 // product, assumed to fit u64
  std::uint32_t omega_distinct() const;        // number of distinct primes
  std::uint32_t omega_total() const;           // sum of exponents
};

// Exponent multiset of a factorization, sorted non-increasing.  Two integers
// share a signature exactly when one turns into the other by relabeling
// primes; every f-value in this project depends on n only through this.
// The empty signature belongs to n = 1.
struct PrimeSignature {
  std::vector<std::uint32_t> exponents;

  bool operator==(const PrimeSignature&) const = default;
  bool well_formed() const;                    // non-increasing, all >= 1
  std::uint32_t omega_distinct() const { return static_cast<std::uint32_t>(exponents.size()); }
  std::uint32_t omega_total() const;
};

struct PrimeSignatureHash {
  std::size_t operator()(const PrimeSignature& s) const;
};

// ---------------------------------------------------------------------------
// Sieves and factorization
// ---------------------------------------------------------------------------

// Default ceiling on sieve allocations (entries, 4 bytes each).  Chosen so a
// misconfigured run fails fast instead of swapping the machine to death.
inline constexpr std::uint64_t kDefaultSpfBudgetEntries = 1'000'000'000;

// Builds the SPF table for [2, limit].  Throws ResourceError when limit
// exceeds budget_entries, DomainError when limit < 2.
SpfTable build_spf(std::uint64_t limit,
                   std::uint64_t budget_entries = kDefaultSpfBudgetEntries);

// Table-assisted factorization; requires 1 <= n <= table.limit.
Factorization factorize(std::uint64_t n, const SpfTable& table);

// Stand-alone factorization: trial division by small primes, then
// Miller-Rabin plus Pollard-Brent for any 64-bit leftovers.  n = 0 is a
// domain error; n = 1 yields the empty factorization.
Factorization factorize(std::uint64_t n);

PrimeSignature signature(const Factorization& f);
PrimeSignature signature_of(std::uint64_t n);
PrimeSignature signature_of(std::uint64_t n, const SpfTable& table);

// Least integer carrying the given signature: exponents attach to the primes
// 2, 3, 5, ... in order.  Returned as BigNat because nothing caps signature
// size.  canonical_n0({}) = 1.
BigNat canonical_n0(const PrimeSignature& sig);

// (omega, Omega) = (distinct primes, primes with multiplicity); (0, 0) for 1.
std::pair<std::uint32_t, std::uint32_t> omega_counts(std::uint64_t n);

// ---------------------------------------------------------------------------
// Prime ranges and reciprocal sums
// ---------------------------------------------------------------------------

// Deterministic 64-bit Miller-Rabin.
bool is_prime_u64(std::uint64_t n);

// All primes <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// The first k primes, ascending.
std::vector<std::uint64_t> first_primes(std::size_t k);

// Streams primes p with A <= p <= B (endpoints taken as ceil(A), floor(B))
// in ascending order through fn.  Segmented, so B can exceed comfortable
// whole-range sieve sizes.  A below 2 clamps to 2; A > B yields nothing.
void for_each_prime_in_range(double A, double B,
                             const std::function<void(std::uint64_t)>& fn);

// Materialized variant; result_budget guards against accidentally huge
// ranges (ResourceError).
std::vector<std::uint64_t> primes_in_range(double A, double B,
                                           std::uint64_t result_budget = 50'000'000);

// Sum of 1/p over primes in [A, B], compensated (Kahan) summation.
double prime_reciprocal_sum(double A, double B);

// Mertens-style estimate loglog B - loglog A for the sum above.  Requires
// e < A <= B so both iterated logs are positive.
double mertens_gap_estimate(double A, double B);

// ---------------------------------------------------------------------------
// Bulk factorization of a window
// ---------------------------------------------------------------------------

// Factors every n in [lo, hi] in ascending order without a full SPF table:
// one pass per sieved prime <= sqrt(hi) over the window, then whatever
// remains above 1 is a single prime.  Suited to windows far beyond any
// affordable table limit (e.g. near 1e8).
void factorize_window(std::uint64_t lo, std::uint64_t hi,
                      const std::function<void(std::uint64_t, const Factorization&)>& fn);

}  // namespace factorisatio
