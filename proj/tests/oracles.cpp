#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

namespace oracle {

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

std::vector<std::uint64_t> trial_factor(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

BigNat partition_count(std::uint64_t n) {
  // P(m, k): partitions of m into parts <= k.  Row-by-row table in k.
  std::vector<BigNat> row(n + 1, BigNat(0));
  row[0] = 1;
  for (std::uint64_t k = 1; k <= n; ++k)
    for (std::uint64_t m = k; m <= n; ++m) row[m] += row[m - k];
  return row[n];
}

namespace {

// A set partition of {1..k} is a restricted growth string a_1..a_k: a_1 = 0
// and a_{i+1} <= 1 + max so far.  Walk them all and count.
std::uint64_t rgs_count(std::uint32_t remaining, std::uint32_t max_so_far) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (std::uint32_t v = 0; v <= max_so_far + 1; ++v)
    total += rgs_count(remaining - 1, std::max(max_so_far, v));
  return total;
}

}  // namespace

BigNat bell_by_enumeration(std::uint32_t k) {
  if (k == 0) return 1;
  return BigNat(static_cast<unsigned long>(rgs_count(k - 1, 0)));
}

BigNat stirling_by_formula(std::uint32_t k, std::uint32_t l) {
  if (l == 0 || l > k) return 0;
  // l! S(k,l) = sum_{j=0}^{l} (-1)^j C(l,j) (l-j)^k; the sum is divisible by
  // l! exactly, so divexact is safe.
  BigNat acc = 0;
  BigNat binom = 1;  // C(l, 0)
  for (std::uint32_t j = 0; j <= l; ++j) {
    BigNat term = factorisatio::bignat_pow(BigNat(static_cast<unsigned long>(l - j)),
                                           static_cast<unsigned long>(k));
    term *= binom;
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
    // C(l, j+1) = C(l, j) * (l-j) / (j+1)
    binom *= static_cast<unsigned long>(l - j);
    binom /= static_cast<unsigned long>(j + 1);
  }
  BigNat result;
  mpz_divexact(result.get_mpz_t(), acc.get_mpz_t(),
               factorisatio::bignat_factorial(l).get_mpz_t());
  return result;
}

namespace {

BigNat count_with_largest_at_most(std::uint64_t n, std::uint64_t m,
                                  std::map<std::pair<std::uint64_t, std::uint64_t>, BigNat>& memo) {
  if (n == 1) return 1;
  auto key = std::make_pair(n, m);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  BigNat total = 0;
  for (std::uint64_t d : divisors(n))
    if (d >= 2 && d <= m) total += count_with_largest_at_most(n / d, d, memo);
  return memo.emplace(key, std::move(total)).first->second;
}

}  // namespace

BigNat factorization_count(std::uint64_t n) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, BigNat> memo;
  return count_with_largest_at_most(n, n, memo);
}

namespace {

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace

long double recip_prime_sum(std::uint64_t lo, std::uint64_t hi) {
  long double s = 0.0L;
  for (std::uint64_t n = lo; n <= hi; ++n)
    if (is_prime_trial(n)) s += 1.0L / static_cast<long double>(n);
  return s;
}

long double recip_prime_square_sum(std::uint64_t lo, std::uint64_t hi) {
  long double s = 0.0L;
  for (std::uint64_t n = lo; n <= hi; ++n)
    if (is_prime_trial(n)) s += 1.0L / (static_cast<long double>(n) * static_cast<long double>(n));
  return s;
}

}  // namespace oracle
