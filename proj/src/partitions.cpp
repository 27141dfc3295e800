#include "factorisatio/partitions.hpp"

#include <cmath>

#include "factorisatio/errors.hpp"

namespace factorisatio {

PartitionTable partition_table(std::uint64_t limit) {
  PartitionTable t;
  t.values.assign(limit + 1, BigNat(0));
  t.values[0] = 1;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    BigNat acc = 0;
    // Generalized pentagonal numbers g = j(3j -+ 1)/2 with alternating signs
    // ++--++--...
    for (std::uint64_t j = 1;; ++j) {
      std::uint64_t g1 = j * (3 * j - 1) / 2;
      std::uint64_t g2 = j * (3 * j + 1) / 2;
      if (g1 > n) break;
      bool plus = (j & 1) != 0;
      if (plus)
        acc += t.values[n - g1];
      else
        acc -= t.values[n - g1];
      if (g2 <= n) {
        if (plus)
          acc += t.values[n - g2];
        else
          acc -= t.values[n - g2];
      }
    }
    t.values[n] = acc;
  }
  return t;
}

double hardy_ramanujan_estimate(std::uint64_t n) {
  if (n == 0) throw DomainError("hardy_ramanujan_estimate: n must be positive");
  double nd = static_cast<double>(n);
  double exponent = M_PI * std::sqrt(2.0 * nd / 3.0);
  // exp() overflows double near n ~ 2.6e5; report infinity rather than lie.
  return std::exp(exponent) / (4.0 * nd * std::sqrt(3.0));
}

BellSequence bell_sequence(std::uint64_t limit) {
  BellSequence s;
  s.values.reserve(limit + 1);
  s.values.push_back(1);  // B_0
  std::vector<BigNat> row{1}, next;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    next.clear();
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const BigNat& v : row) next.push_back(next.back() + v);
    row.swap(next);
    s.values.push_back(row.front());
  }
  return s;
}

StirlingRow stirling_row(std::uint64_t k) {
  if (k == 0) throw DomainError("stirling_row: k must be positive");
  StirlingRow r;
  r.k = k;
  std::vector<BigNat> row(2, BigNat(0));
  row[1] = 1;  // S(1,1)
  for (std::uint64_t i = 2; i <= k; ++i) {
    std::vector<BigNat> next(i + 1, BigNat(0));
    for (std::uint64_t l = 1; l <= i; ++l) {
      next[l] = BigNat(static_cast<unsigned long>(l)) * (l < row.size() ? row[l] : BigNat(0));
      if (l >= 1 && l - 1 < row.size()) next[l] += row[l - 1];
    }
    row.swap(next);
  }
  r.entries = std::move(row);
  return r;
}

double debruijn_log_bell(std::uint64_t k) {
  if (k < 3) throw DomainError("debruijn_log_bell: k must be at least 3");
  double kd = static_cast<double>(k);
  double lk = std::log(kd);
  double llk = std::log(lk);
  return kd * (lk - llk - 1.0 + llk / lk + 1.0 / lk);
}

std::uint64_t argmax_stirling(std::uint64_t t) {
  StirlingRow row = stirling_row(t);
  std::uint64_t best = 1;
  for (std::uint64_t l = 2; l <= t; ++l)
    if (row.entries[l] > row.entries[best]) best = l;  // strict: ties keep smaller l
  return best;
}

BigNat max_stirling_lower_bound(std::uint64_t t) {
  if (t == 0) throw DomainError("max_stirling_lower_bound: t must be positive");
  BellSequence s = bell_sequence(t);
  BigNat q;
  mpz_cdiv_q_ui(q.get_mpz_t(), s.values[t].get_mpz_t(), static_cast<unsigned long>(t));
  return q;
}

}  // namespace factorisatio
