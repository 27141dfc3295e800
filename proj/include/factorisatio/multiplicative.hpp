#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "factorisatio/arith.hpp"
#include "factorisatio/bignat.hpp"

namespace factorisatio {

// f(n): the number of ways to write n as an unordered product of integer
// factors >= 2.  f(1) = 1 (the empty product), f(p) = 1, f(28) = 4.
// Everything here returns exact values.

// One factorization as its factor multiset, stored non-increasing, all >= 2.
using FactorMultiset = std::vector<std::uint64_t>;

// ---------------------------------------------------------------------------
// Signature-keyed result cache
// ---------------------------------------------------------------------------

// f depends on n only through its prime signature, so results are shared
// across every n with matching exponents.  Intermediate recursion states are
// NOT signature-invariant (they depend on concrete divisor magnitudes) and
// deliberately never land in here.
//
// Thread contract: concurrent lookups are cheap shared-lock reads; writers
// serialize.  Stored values are immutable once inserted, and node addresses
// are stable, so lookup_ptr results stay valid for the cache's lifetime.
class SignatureCache {
 public:
  const BigNat* lookup_ptr(const PrimeSignature& sig) const;
  std::optional<BigNat> lookup(const PrimeSignature& sig) const;

  // Inserts and returns the canonical stored value.  Re-inserting an existing
  // signature is legal only with an identical value (DomainError otherwise);
  // that check is what catches cross-worker disagreement bugs.
  const BigNat& store(const PrimeSignature& sig, BigNat value);

  void merge(const std::vector<std::pair<PrimeSignature, BigNat>>& entries);

  std::uint64_t hit_count() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t miss_count() const { return misses_.load(std::memory_order_relaxed); }
  std::size_t size() const;

  // Text persistence, one entry per line:
  //   sig=a1,a2,...,ak f=<decimal>
  // sorted lexicographically by exponent sequence.  load() rejects malformed
  // or invariant-breaking lines, reporting the 1-based line number.
  void save(std::ostream& out) const;
  void load(std::istream& in);
  void save_file(const std::string& path) const;
  void load_file(const std::string& path);

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<PrimeSignature, BigNat, PrimeSignatureHash> map_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

// ---------------------------------------------------------------------------
// Counting and enumeration
// ---------------------------------------------------------------------------

// Exact f(n) by recursion over divisor chains: a factorization is a
// non-increasing chain of divisors, so count(v, bound) sums count(v/d, d)
// over divisors d of v with 2 <= d <= bound.  Memoization is per call and
// keyed on (remaining value, usable-divisor prefix), never on signatures.
BigNat count_factorizations(std::uint64_t n);

// Same recursion run on an explicit factorization (used internally when the
// factorization is already known).
BigNat count_factorizations(const Factorization& fac);

// Brute-force oracle: materializes every factor multiset of n, largest-first,
// each exactly once, in lexicographically decreasing order of the multiset.
// Throws ResourceError when n exceeds oracle_limit -- building all multisets
// of a large n is the one thing this function must never silently attempt.
std::vector<FactorMultiset> enumerate_factorizations(std::uint64_t n,
                                                     std::uint64_t oracle_limit = 1'000'000);

// f for a whole signature class, via the cache.  Evaluates on the canonical
// least representative; falls back to an exponent-vector form of the divisor
// recursion when that representative exceeds 64 bits (the two forms agree
// bit-for-bit where both apply).
BigNat f_of_signature(const PrimeSignature& sig, SignatureCache& cache);

// (f(2^a), p(a)) -- the prime-power column against the partition function.
// The two sides are computed through fully disjoint code paths.
std::pair<BigNat, BigNat> f_prime_power_identity(std::uint32_t a);

// Independent second algorithm: counts partitions of the exponent multiset
// directly, as a coin-change style DP over sub-vectors in mixed-radix code
// order.  Shares no code with the divisor recursion; exists to cross-check
// it.  work_budget caps DP state count (ResourceError beyond).
BigNat multiset_partition_count(const PrimeSignature& sig,
                                std::uint64_t work_budget = 50'000'000);

// Largest exponent in n's factorization; n >= 2.
std::uint32_t max_exponent(std::uint64_t n);

// ---------------------------------------------------------------------------
// Bulk evaluation
// ---------------------------------------------------------------------------

// Streams (n, signature(n), f(n)) for every n in [lo, hi] in ascending order,
// regardless of worker count.  Workers factor disjoint chunks and fill the
// shared cache; emission happens on the calling thread, strictly in order.
// Requires 2 <= lo <= hi <= table.limit.
void bulk_f_range(std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
                  SignatureCache& cache, unsigned workers,
                  const std::function<void(std::uint64_t, const PrimeSignature&, const BigNat&)>& emit);

}  // namespace factorisatio
