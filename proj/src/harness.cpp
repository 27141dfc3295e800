#include "factorisatio/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <utility>

#include "factorisatio/arith.hpp"
#include "factorisatio/errors.hpp"

namespace factorisatio {

namespace {

constexpr double kEulerE = 2.7182818284590452354;

// 4 / sqrt(2e): constant in the exponent of the interval bound.
const double kFourOverSqrt2e = 4.0 / std::sqrt(2.0 * kEulerE);

}  // namespace

// ---------------------------------------------------------------------------
// Value-set search
// ---------------------------------------------------------------------------

PruningBounds pruning_bounds(const BigNat& x) {
  if (x < 1) throw DomainError("pruning_bounds: x must be >= 1");
  PruningBounds b;
  // p and B both blow past any sane x within a few dozen indices, so growing
  // the tables geometrically and rescanning is cheaper than being clever.
  for (std::uint64_t cap = 64;; cap *= 2) {
    PartitionTable t = partition_table(cap);
    std::uint64_t a = 0;
    while (a + 1 <= t.limit() && t.p(a + 1) <= x) ++a;
    if (a < t.limit()) {
      b.alpha_max = static_cast<std::uint32_t>(a);
      break;
    }
  }
  for (std::uint64_t cap = 64;; cap *= 2) {
    BellSequence t = bell_sequence(cap);
    std::uint64_t k = 0;
    while (k + 1 <= t.limit() && t.b(k + 1) <= x) ++k;
    if (k < t.limit()) {
      b.k_max = static_cast<std::uint32_t>(k);
      break;
    }
  }
  return b;
}

ValueSetReport enumerate_value_set(const BigNat& x, SignatureCache& cache,
                                   bool retain_values, std::uint64_t node_budget) {
  if (x < 1) throw DomainError("enumerate_value_set: x must be >= 1");
  PruningBounds pb = pruning_bounds(x);
  ValueSetReport rep;
  rep.x = x;

  std::set<BigNat> values;
  std::vector<PrimeSignature> stack;
  stack.push_back(PrimeSignature{});
  while (!stack.empty()) {
    if (rep.nodes_visited >= node_budget) {
      rep.exact = false;
      break;
    }
    PrimeSignature sig = std::move(stack.back());
    stack.pop_back();
    ++rep.nodes_visited;
    BigNat f = f_of_signature(sig, cache);
    if (f > x) {
      ++rep.nodes_pruned;
      continue;  // every descendant's f is at least this one's
    }
    values.insert(std::move(f));
    const auto& e = sig.exponents;
    if (!e.empty() && e.back() + 1 <= pb.alpha_max &&
        (e.size() == 1 || e[e.size() - 2] > e.back())) {
      PrimeSignature child = sig;
      ++child.exponents.back();
      stack.push_back(std::move(child));
    }
    if (e.size() < pb.k_max) {
      PrimeSignature child = std::move(sig);
      child.exponents.push_back(1);
      stack.push_back(std::move(child));
    }
  }

  rep.count = values.size();
  double lx = log_bignat(rep.x);
  if (rep.count > 0 && lx > 0.0) {
    double llx = std::log(lx);
    double lllx = llx > 0.0 ? std::log(llx) : 0.0;
    if (lllx > 0.0) {
      // Only meaningful once the triple log is positive (x above ~15.2);
      // left at 0 below that.
      rep.exponent_profile =
          std::log(static_cast<double>(rep.count)) * llx / (lx * lllx);
    }
  }
  if (retain_values) rep.values.assign(values.begin(), values.end());
  return rep;
}

// ---------------------------------------------------------------------------
// Self-dividing counts
// ---------------------------------------------------------------------------

void scan_self_dividing(std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
                        SignatureCache& cache, unsigned workers, SelfDividingScan& scan) {
  bulk_f_range(lo, hi, table, cache, workers,
               [&scan](std::uint64_t n, const PrimeSignature& sig, const BigNat& f) {
                 if (!fits_u64(f)) return;  // then f > n, so it cannot divide n
                 if (n % to_u64(f) == 0) {
                   ++scan.count;
                   ++scan.omega_histogram[sig.omega_distinct()];
                 }
               });
}

SelfDividingReport finalize_self_dividing(std::uint64_t x, const SelfDividingScan& scan) {
  if (x < 2) throw DomainError("finalize_self_dividing: x must be >= 2");
  SelfDividingReport rep;
  rep.x = x;
  rep.count = scan.count;
  rep.normalized = static_cast<double>(scan.count) *
                   std::log(static_cast<double>(x)) / static_cast<double>(x);
  rep.omega_histogram = scan.omega_histogram;
  return rep;
}

SelfDividingReport count_self_dividing(std::uint64_t x, const SpfTable& table,
                                       SignatureCache& cache, unsigned workers) {
  if (x < 2) throw DomainError("count_self_dividing: x must be >= 2");
  if (x > table.limit)
    throw DomainError("count_self_dividing: x exceeds the factor table");
  SelfDividingScan scan;
  scan_self_dividing(2, x, table, cache, workers, scan);
  return finalize_self_dividing(x, scan);
}

// ---------------------------------------------------------------------------
// Short-interval averages
// ---------------------------------------------------------------------------

IntervalParams interval_parameters(double log_y, std::uint64_t sieve_cap) {
  // loglog y must be positive so s is a nonnegative floor.
  if (!(log_y >= std::log(3.0)))
    throw DomainError("interval_parameters: y must be >= 3");
  IntervalParams p;
  double raw_k = std::floor(std::sqrt(log_y / (2.0 * kEulerE)));
  if (raw_k < 1.0) {
    p.k = 1;  // the floor is 0 for y below e^(2e) ~ 230; keep k usable
    p.k_clamped = true;
  } else {
    p.k = static_cast<std::uint64_t>(raw_k);
  }
  double loglog_y = std::log(log_y);
  p.s = static_cast<std::uint64_t>(std::floor(3.0 * loglog_y));
  p.A = static_cast<double>(p.k) * static_cast<double>(p.k);
  double log_B = log_y / static_cast<double>(p.k + p.s + 1);
  p.B = std::exp(log_B);
  p.asymptotic_regime = log_y > std::exp(kEulerE);
  if (p.B <= static_cast<double>(sieve_cap)) {
    p.S = prime_reciprocal_sum(std::max(p.A, 2.0), p.B);
  } else {
    // Too large to sieve; fall back to the loglog gap.  Worked entirely in
    // log space so B itself never has to be representable.
    if (!(p.A > kEulerE))
      throw DomainError("interval_parameters: estimate needs A > e");
    p.S = std::log(log_B) - std::log(std::log(p.A));
    p.S_estimated = true;
  }
  return p;
}

void scan_interval_f(std::uint64_t lo, std::uint64_t hi, const SpfTable* table,
                     SignatureCache& cache, unsigned workers, IntervalScan& scan) {
  if (lo < 1 || lo > hi) throw DomainError("scan_interval_f: need 1 <= lo <= hi");
  std::uint64_t start = lo;
  if (start == 1) {
    scan.sum_f += 1;  // f(1) = 1, the empty product
    if (++start > hi) return;
  }
  if (table != nullptr && hi <= table->limit) {
    bulk_f_range(start, hi, *table, cache, workers,
                 [&scan](std::uint64_t, const PrimeSignature&, const BigNat& f) {
                   scan.sum_f += f;
                 });
    return;
  }
  // No table covers the window; factor it directly.  Signature-level caching
  // still collapses nearly all f evaluations.
  factorize_window(start, hi, [&](std::uint64_t, const Factorization& fac) {
    scan.sum_f += f_of_signature(signature(fac), cache);
  });
}

IntervalReport interval_average(std::uint64_t x, std::uint64_t y, const SpfTable* table,
                                SignatureCache& cache, unsigned workers) {
  if (y < 3) throw DomainError("interval_average: y must be >= 3");
  if (x > std::numeric_limits<std::uint64_t>::max() - y)
    throw DomainError("interval_average: x + y overflows 64 bits");
  IntervalReport rep;
  rep.x = x;
  rep.y = y;
  IntervalScan scan;
  scan_interval_f(std::max<std::uint64_t>(x, 1), x + y, table, cache, workers, scan);
  rep.sum_f = scan.sum_f;
  // Plain double division: the sum is exact in double at any reachable scale,
  // and mpq's get_d truncates where this rounds correctly.
  rep.mean = rep.sum_f.get_d() / static_cast<double>(y);
  double log_y = std::log(static_cast<double>(y));
  rep.params = interval_parameters(log_y);
  rep.bound_main_term =
      std::exp(kFourOverSqrt2e * std::sqrt(log_y) / std::log(log_y));
  return rep;
}

// ---------------------------------------------------------------------------
// Finite prime-window inequalities
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> enumerate_window_products(std::uint32_t k, double A, double B,
                                                     std::uint64_t result_budget) {
  if (k == 0) throw DomainError("enumerate_window_products: k must be >= 1");
  std::vector<std::uint64_t> primes = primes_in_range(A, B);
  std::vector<std::uint64_t> out;
  constexpr auto kMax64 = std::numeric_limits<std::uint64_t>::max();

  // Ascending index combinations; primes ascend, so once a prefix product
  // overflows, every completion of it would too.
  std::function<void(std::size_t, std::uint32_t, std::uint64_t)> descend =
      [&](std::size_t next, std::uint32_t left, std::uint64_t prod) {
        if (left == 0) {
          if (out.size() >= result_budget)
            throw ResourceError("enumerate_window_products: result budget exceeded");
          out.push_back(prod);
          return;
        }
        for (std::size_t i = next; i + left <= primes.size(); ++i) {
          if (prod > kMax64 / primes[i])
            throw ResourceError("enumerate_window_products: product exceeds 64 bits");
          descend(i + 1, left - 1, prod * primes[i]);
        }
      };
  descend(0, k, 1);
  std::sort(out.begin(), out.end());
  return out;
}

WindowInequalityReport window_inequality_check(std::uint32_t k, double A, double B) {
  if (k < 2) throw DomainError("window_inequality_check: k must be >= 2");
  WindowInequalityReport rep;
  rep.k = k;
  rep.A = A;
  rep.B = B;

  // E[j] accumulates the j-th elementary symmetric function of the prime
  // reciprocals; folding one prime in is a reverse sweep.  E[k] equals the
  // sum of 1/m over the k-prime products without ever listing them.
  std::vector<BigRat> E(k + 1, BigRat(0));
  E[0] = 1;
  BigRat p2_sum(0);
  for_each_prime_in_range(A, B, [&](std::uint64_t p) {
    BigRat r(1, static_cast<unsigned long>(p));
    for (std::uint32_t j = k; j >= 1; --j) E[j] += E[j - 1] * r;
    p2_sum += r * r;
  });

  const BigRat& S = E[1];
  BigRat S_pow_km2(1);
  for (std::uint32_t i = 0; i < k - 2; ++i) S_pow_km2 *= S;
  BigRat rhs = S_pow_km2 * S * S / BigRat(bignat_factorial(k)) -
               p2_sum * S_pow_km2 / BigRat(bignat_factorial(k - 2));
  rep.lhs = E[k];
  rep.rhs = rhs;
  rep.holds = rep.lhs >= rep.rhs;
  return rep;
}

MertensIdentityReport mertens_window_identity(double log_y, std::uint64_t k, std::uint64_t s,
                                              std::uint64_t sieve_cap) {
  if (k < 3) throw DomainError("mertens_window_identity: k must be >= 3");
  if (!(log_y > 1.0)) throw DomainError("mertens_window_identity: log_y must exceed 1");
  MertensIdentityReport rep;
  rep.log_y = log_y;
  rep.k = k;
  rep.s = s;
  rep.A = static_cast<double>(k) * static_cast<double>(k);
  double log_B = log_y / static_cast<double>(k + s + 1);
  rep.B = std::exp(log_B);
  if (rep.B <= static_cast<double>(sieve_cap)) {
    rep.S_computed = prime_reciprocal_sum(std::max(rep.A, 2.0), rep.B);
  } else {
    rep.S_computed = std::log(log_B) - std::log(std::log(rep.A));  // A = k^2 >= 9 > e
    rep.used_estimate = true;
  }
  double lk = std::log(static_cast<double>(k));
  rep.S_closed_form = std::log(log_y) - lk - std::log(lk) - std::log(2.0);
  rep.difference = std::abs(rep.S_computed - rep.S_closed_form);
  return rep;
}

double h_function(std::uint64_t k, double log_y) {
  if (k < 3) throw DomainError("h_function: k must be >= 3");
  double kd = static_cast<double>(k);
  double lk = std::log(kd);
  double llk = std::log(lk);
  double inner = std::log(log_y) - lk - llk - std::log(2.0);
  if (!(inner > 0.0))
    throw DomainError("h_function: k out of regime for this y (inner log <= 0)");
  return kd * std::log(inner) - kd * llk + kd * llk / lk + kd / lk;
}

HScanReport h_scan(double log_y) {
  if (!(log_y > 1.0)) throw DomainError("h_scan: log_y must exceed 1");
  HScanReport rep;
  rep.log_y = log_y;
  rep.reference_k = std::sqrt(log_y / (2.0 * kEulerE));
  double llog_y = std::log(log_y);
  for (std::uint64_t k = 3;; ++k) {
    double lk = std::log(static_cast<double>(k));
    double inner = llog_y - lk - std::log(lk) - std::log(2.0);
    if (!(inner > 0.0)) break;  // inner decreases in k: the grid has ended
    double h = h_function(k, log_y);
    rep.grid.push_back({k, h});
    if (rep.argmax_k == 0 || h > rep.h_max) {
      rep.argmax_k = k;
      rep.h_max = h;
    }
  }
  return rep;
}

StirlingPowerReport stirling_power_bound_check(std::uint32_t i, std::uint32_t y,
                                               std::uint32_t iy_budget) {
  if (i == 0 || y == 0)
    throw DomainError("stirling_power_bound_check: i and y must be >= 1");
  if (i > iy_budget / y)
    throw ResourceError("stirling_power_bound_check: i * y exceeds the budget");
  StirlingPowerReport rep;
  rep.i = i;
  rep.y = y;
  rep.k_i = argmax_stirling(i);

  PrimeSignature sig;
  sig.exponents.assign(i, y);
  SignatureCache local;
  rep.lhs = f_of_signature(sig, local);

  StirlingRow row = stirling_row(i);
  BigNat num = bignat_pow(row.s(rep.k_i), y);
  BigNat den = bignat_factorial(static_cast<std::uint64_t>(y) * rep.k_i);
  rep.rhs = BigRat(num) / BigRat(den);
  rep.holds = BigRat(rep.lhs) >= rep.rhs;
  return rep;
}

// ---------------------------------------------------------------------------
// omega statistics
// ---------------------------------------------------------------------------

OmegaDistribution omega_distribution(std::uint64_t x, const SpfTable& table) {
  if (x < 2) throw DomainError("omega_distribution: x must be >= 2");
  if (x > table.limit)
    throw DomainError("omega_distribution: x exceeds the factor table");
  OmegaDistribution dist;
  dist.x = x;

  double lx = std::log(static_cast<double>(x));
  double llx = std::log(lx);  // may be <= 0 only for x = 2
  dist.bigomega_threshold = 10.0 * llx;
  if (llx > 1.0) {
    dist.small_omega_threshold = llx / std::log(llx);
  } else {
    // The triple log is not positive yet, so the sparse-omega threshold is
    // undefined at this x.
    dist.small_omega_threshold = std::numeric_limits<double>::quiet_NaN();
  }

  for (std::uint64_t n = 2; n <= x; ++n) {
    std::uint32_t omega = 0, bigomega = 0;
    std::uint64_t m = n;
    while (m > 1) {
      std::uint32_t p = table.spf[m];
      ++omega;
      while (m % p == 0) {
        m /= p;
        ++bigomega;
      }
    }
    ++dist.omega_histogram[omega];
    ++dist.bigomega_histogram[bigomega];
    if (static_cast<double>(bigomega) > dist.bigomega_threshold)
      ++dist.count_bigomega_above;
    if (!std::isnan(dist.small_omega_threshold) &&
        static_cast<double>(omega) < dist.small_omega_threshold)
      ++dist.count_omega_below;
  }
  return dist;
}

}  // namespace factorisatio
