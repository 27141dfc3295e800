#pragma once

#include <cstdint>
#include <vector>

#include "factorisatio/bignat.hpp"

namespace factorisatio {

// Exact combinatorial sequences used as building blocks everywhere else:
// integer partitions p(n), Bell numbers B_k, and Stirling set numbers S(k,l),
// plus the closed-form estimates they are compared against.

// p(0..limit); p(0) = 1.  Strictly increasing from index 1 on.
struct PartitionTable {
  std::vector<BigNat> values;
  const BigNat& p(std::uint64_t n) const { return values.at(n); }
  std::uint64_t limit() const { return values.size() - 1; }
};

// B_0..B_limit; B_0 = B_1 = 1.  Strictly increasing from index 1 on.
struct BellSequence {
  std::vector<BigNat> values;
  const BigNat& b(std::uint64_t k) const { return values.at(k); }
  std::uint64_t limit() const { return values.size() - 1; }
};

// Row k of the Stirling set triangle: entries[l] = S(k, l) for 1 <= l <= k,
// entries[0] unused (zero).  Rows are unimodal in l.
struct StirlingRow {
  std::uint64_t k = 0;
  std::vector<BigNat> entries;
  const BigNat& s(std::uint64_t l) const { return entries.at(l); }
};

// Euler's pentagonal-number recurrence, O(limit^1.5) exact.
PartitionTable partition_table(std::uint64_t limit);

// (1 / (4 n sqrt(3))) * exp(pi * sqrt(2 n / 3)); requires n >= 1.
double hardy_ramanujan_estimate(std::uint64_t n);

// Bell triangle (Aitken array), O(limit^2) exact.
BellSequence bell_sequence(std::uint64_t limit);

// Iterated row recurrence S(k,l) = l*S(k-1,l) + S(k-1,l-1); requires k >= 1.
StirlingRow stirling_row(std::uint64_t k);

// Five-term expansion of log B_k:
//   k * (log k - loglog k - 1 + loglog k / log k + 1 / log k).
// Requires k >= 3 so loglog k is positive.
double debruijn_log_bell(std::uint64_t k);

// Smallest l maximizing S(t, l) (ties resolve to the smaller l).
std::uint64_t argmax_stirling(std::uint64_t t);

// ceil(B_t / t), a floor for the row maximum max_l S(t, l) since the row sums
// to B_t across t entries.
BigNat max_stirling_lower_bound(std::uint64_t t);

}  // namespace factorisatio
