#include "factorisatio/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "factorisatio/errors.hpp"

namespace factorisatio {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr double kEulerE = 2.718281828459045235;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Small-prime list shared by the stand-alone factorizer and canonical_n0.
// Grown lazily; guarded because library entry points may race.
std::vector<u64>& small_primes() {
  static std::vector<u64> primes = primes_up_to(1u << 16);
  return primes;
}
std::once_flag small_primes_once;
const std::vector<u64>& small_primes_init() {
  std::call_once(small_primes_once, [] { (void)small_primes(); });
  return small_primes();
}

u64 pollard_brent(u64 n) {
  // Brent's cycle variant; n must be odd, composite, and free of factors
  // found by the trial stage.  Returns a nontrivial factor.
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1, q = 1, ys = y;
    const u64 m = 128;
    auto step = [&](u64 v) { return (static_cast<u64>(u128(v) * v % n) + c) % n; };
    for (u64 r = 1; d == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && d == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        d = std::gcd(q, n);
      }
    }
    if (d == n) {
      // Backtrack one step at a time to recover the factor.
      do {
        ys = step(ys);
        d = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (d == 1);
    }
    if (d != n) return d;
    // Extremely unlikely with varying c, but try the next increment.
  }
}

void factor_recursive(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_recursive(d, out);
  factor_recursive(n / d, out);
}

struct Kahan {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Factorization / PrimeSignature members
// ---------------------------------------------------------------------------

std::uint64_t Factorization::value() const {
  u64 v = 1;
  for (const Term& t : terms)
    for (std::uint32_t i = 0; i < t.exponent; ++i) v *= t.prime;
  return v;
}

std::uint32_t Factorization::omega_distinct() const {
  return static_cast<std::uint32_t>(terms.size());
}

std::uint32_t Factorization::omega_total() const {
  std::uint32_t s = 0;
  for (const Term& t : terms) s += t.exponent;
  return s;
}

bool PrimeSignature::well_formed() const {
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) return false;
    if (i > 0 && exponents[i] > exponents[i - 1]) return false;
  }
  return true;
}

std::uint32_t PrimeSignature::omega_total() const {
  std::uint32_t s = 0;
  for (std::uint32_t e : exponents) s += e;
  return s;
}

std::size_t PrimeSignatureHash::operator()(const PrimeSignature& s) const {
  // FNV-1a over the exponent words; signatures are short, so this is cheap.
  std::size_t h = 1469598103934665603ull;
  for (std::uint32_t e : s.exponents) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Sieves
// ---------------------------------------------------------------------------

SpfTable build_spf(std::uint64_t limit, std::uint64_t budget_entries) {
  if (limit < 2) throw DomainError("build_spf: limit must be at least 2");
  if (limit > 0xffffffffull)
    throw ResourceError("build_spf: limit above 32-bit entry range");
  if (limit + 1 > budget_entries)
    throw ResourceError("build_spf: limit " + std::to_string(limit) +
                        " exceeds memory budget of " + std::to_string(budget_entries) +
                        " entries");
  SpfTable t;
  t.limit = limit;
  t.spf.assign(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (t.spf[i] == 0) {
      t.spf[i] = static_cast<std::uint32_t>(i);
      if (i * i <= limit)
        for (u64 j = i * i; j <= limit; j += i)
          if (t.spf[j] == 0) t.spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return t;
}

Factorization factorize(std::uint64_t n, const SpfTable& table) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > table.limit)
    throw DomainError("factorize: n exceeds SPF table limit " + std::to_string(table.limit));
  Factorization f;
  while (n > 1) {
    u64 p = table.spf[n];
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.terms.push_back({p, e});
  }
  return f;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  Factorization f;
  const auto& primes = small_primes_init();
  for (u64 p : primes) {
    if (p * p > n) break;
    if (n % p == 0) {
      std::uint32_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.terms.push_back({p, e});
    }
  }
  if (n > 1) {
    if (is_prime_u64(n)) {
      f.terms.push_back({n, 1});
    } else {
      // Leftover is an odd composite with all prime factors > 2^16.
      std::vector<u64> rest;
      factor_recursive(n, rest);
      std::sort(rest.begin(), rest.end());
      for (std::size_t i = 0; i < rest.size();) {
        std::size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        f.terms.push_back({rest[i], static_cast<std::uint32_t>(j - i)});
        i = j;
      }
    }
  }
  return f;
}

PrimeSignature signature(const Factorization& f) {
  PrimeSignature s;
  s.exponents.reserve(f.terms.size());
  for (const auto& t : f.terms) s.exponents.push_back(t.exponent);
  std::sort(s.exponents.begin(), s.exponents.end(), std::greater<>());
  return s;
}

PrimeSignature signature_of(std::uint64_t n) { return signature(factorize(n)); }

PrimeSignature signature_of(std::uint64_t n, const SpfTable& table) {
  return signature(factorize(n, table));
}

std::vector<std::uint64_t> first_primes(std::size_t k) {
  // Over-sieve by the usual p_k < k (ln k + ln ln k) bound, doubling on the
  // rare miss.
  std::uint64_t limit = 64;
  if (k > 6) {
    double kd = static_cast<double>(k);
    limit = static_cast<std::uint64_t>(kd * (std::log(kd) + std::log(std::log(kd))) * 1.2) + 64;
  }
  std::vector<u64> primes = primes_up_to(limit);
  while (primes.size() < k) {
    limit *= 2;
    primes = primes_up_to(limit);
  }
  primes.resize(k);
  return primes;
}

BigNat canonical_n0(const PrimeSignature& sig) {
  if (!sig.well_formed())
    throw DomainError("canonical_n0: signature must be non-increasing with positive entries");
  std::vector<u64> primes = first_primes(sig.exponents.size());
  BigNat n0 = 1;
  for (std::size_t i = 0; i < sig.exponents.size(); ++i) {
    BigNat pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(primes[i]), sig.exponents[i]);
    n0 *= pe;
  }
  return n0;
}

std::pair<std::uint32_t, std::uint32_t> omega_counts(std::uint64_t n) {
  Factorization f = factorize(n);
  return {f.omega_distinct(), f.omega_total()};
}

// ---------------------------------------------------------------------------
// Primality and prime ranges
// ---------------------------------------------------------------------------

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This base set is deterministic for all 64-bit inputs.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      if (i * i <= limit)
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  return primes;
}

void for_each_prime_in_range(double A, double B,
                             const std::function<void(std::uint64_t)>& fn) {
  if (std::isnan(A) || std::isnan(B))
    throw DomainError("prime range: endpoints must not be NaN");
  if (A > B || B < 2.0) return;  // empty window
  u64 lo = A <= 2.0 ? 2 : static_cast<u64>(std::ceil(A));
  u64 hi = static_cast<u64>(std::floor(B));
  if (lo > hi) return;

  constexpr u64 kSegment = 1u << 20;
  if (hi <= kSegment) {
    // Small enough for one flat sieve.
    auto primes = primes_up_to(hi);
    for (u64 p : primes)
      if (p >= lo) fn(p);
    return;
  }

  auto base = primes_up_to(static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 1);
  std::vector<bool> seg;
  for (u64 start = lo; start <= hi; start += kSegment) {
    u64 end = std::min(hi, start + kSegment - 1);
    seg.assign(end - start + 1, true);
    for (u64 p : base) {
      if (p * p > end) break;
      u64 first = std::max(p * p, (start + p - 1) / p * p);
      for (u64 m = first; m <= end; m += p) seg[m - start] = false;
    }
    for (u64 i = 0; i < seg.size(); ++i)
      if (seg[i] && start + i >= 2) fn(start + i);
  }
}

std::vector<std::uint64_t> primes_in_range(double A, double B, std::uint64_t result_budget) {
  std::vector<u64> out;
  for_each_prime_in_range(A, B, [&](u64 p) {
    if (out.size() >= result_budget)
      throw ResourceError("primes_in_range: result exceeds budget of " +
                          std::to_string(result_budget));
    out.push_back(p);
  });
  return out;
}

double prime_reciprocal_sum(double A, double B) {
  Kahan acc;
  for_each_prime_in_range(A, B, [&](u64 p) { acc.add(1.0 / static_cast<double>(p)); });
  return acc.sum;
}

double mertens_gap_estimate(double A, double B) {
  if (A <= kEulerE)
    throw DomainError("mertens_gap_estimate: A must exceed e for loglog to be positive");
  if (!(A <= B)) throw DomainError("mertens_gap_estimate: A must not exceed B");
  return std::log(std::log(B)) - std::log(std::log(A));
}

// ---------------------------------------------------------------------------
// Window factorization
// ---------------------------------------------------------------------------

void factorize_window(std::uint64_t lo, std::uint64_t hi,
                      const std::function<void(std::uint64_t, const Factorization&)>& fn) {
  if (lo < 1 || lo > hi) throw DomainError("factorize_window: need 1 <= lo <= hi");
  constexpr u64 kSegment = 1u << 17;
  auto base = primes_up_to(static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 1);

  std::vector<u64> remaining(kSegment);
  std::vector<Factorization> facs(kSegment);
  for (u64 start = lo; start <= hi; start += kSegment) {
    u64 end = std::min(hi, start + kSegment - 1);
    u64 len = end - start + 1;
    for (u64 i = 0; i < len; ++i) {
      remaining[i] = start + i;
      facs[i].terms.clear();
    }
    for (u64 p : base) {
      if (p > end) break;
      u64 first = std::max(p, (start + p - 1) / p * p);
      for (u64 m = first; m <= end; m += p) {
        u64 i = m - start;
        std::uint32_t e = 0;
        while (remaining[i] % p == 0) {
          remaining[i] /= p;
          ++e;
        }
        facs[i].terms.push_back({p, e});
      }
    }
    for (u64 i = 0; i < len; ++i) {
      if (remaining[i] > 1) facs[i].terms.push_back({remaining[i], 1});
      fn(start + i, facs[i]);
    }
  }
}

}  // namespace factorisatio
