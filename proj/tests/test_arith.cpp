#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "factorisatio/arith.hpp"
#include "factorisatio/errors.hpp"
#include "oracles.hpp"

using namespace factorisatio;

TEST_CASE("spf table agrees with trial division") {
  SpfTable table = build_spf(10000);
  CHECK(table.limit == 10000);
  CHECK(table.spf[0] == 0);
  CHECK(table.spf[1] == 0);
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    auto fs = oracle::trial_factor(n);
    CHECK(table.spf[n] == fs.front());
  }
}

TEST_CASE("spf construction rejects bad limits") {
  CHECK_THROWS_AS(build_spf(1), DomainError);
  CHECK_THROWS_AS(build_spf(kDefaultSpfBudgetEntries + 1), ResourceError);
  CHECK_THROWS_AS(build_spf(100, 50), ResourceError);
}

TEST_CASE("factorize matches trial division, with and without a table") {
  SpfTable table = build_spf(100000);
  std::mt19937_64 rng(0x5eed0001);
  std::uniform_int_distribution<std::uint64_t> dist(2, 100000);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t n = dist(rng);
    auto expect = oracle::trial_factor(n);

    Factorization via_table = factorize(n, table);
    Factorization standalone = factorize(n);
    CHECK(via_table.value() == n);
    CHECK(standalone.value() == n);

    // flatten back to a multiplicity list
    std::vector<std::uint64_t> flat;
    for (const auto& t : via_table.terms)
      for (std::uint32_t e = 0; e < t.exponent; ++e) flat.push_back(t.prime);
    CHECK(flat == expect);

    REQUIRE(via_table.terms.size() == standalone.terms.size());
    for (std::size_t j = 0; j < via_table.terms.size(); ++j) {
      CHECK(via_table.terms[j].prime == standalone.terms[j].prime);
      CHECK(via_table.terms[j].exponent == standalone.terms[j].exponent);
    }
  }
}

TEST_CASE("standalone factorize handles hard 64-bit composites") {
  // semiprime of two ~1e9 primes: beyond any small trial bound, so this
  // exercises the Miller-Rabin + Pollard path
  std::uint64_t p = 1000000007, q = 1000000009;
  Factorization f = factorize(p * q);
  REQUIRE(f.terms.size() == 2);
  CHECK(f.terms[0].prime == p);
  CHECK(f.terms[1].prime == q);

  Factorization big_prime = factorize((std::uint64_t(1) << 61) - 1);  // Mersenne prime
  REQUIRE(big_prime.terms.size() == 1);
  CHECK(big_prime.terms[0].exponent == 1);

  CHECK(factorize(1).terms.empty());
  CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("is_prime_u64 vs trial division and classic pseudoprimes") {
  for (std::uint64_t n = 0; n <= 2000; ++n) {
    bool expect = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && expect; ++d)
      if (n % d == 0) expect = false;
    CHECK(is_prime_u64(n) == expect);
  }
  // Carmichael numbers and a classic strong-pseudoprime stress value
  CHECK_FALSE(is_prime_u64(561));
  CHECK_FALSE(is_prime_u64(1105));
  CHECK_FALSE(is_prime_u64(3215031751ULL));  // = 151 * 751 * 28351
  CHECK(is_prime_u64((std::uint64_t(1) << 61) - 1));
}

TEST_CASE("prime listing") {
  auto ps = primes_up_to(100);
  std::vector<std::uint64_t> expect{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  CHECK(ps == expect);
  CHECK(primes_up_to(1000000).size() == 78498);
  CHECK(primes_up_to(1).empty());

  auto first = first_primes(6);
  CHECK(first == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("signatures and canonical representatives") {
  CHECK(signature_of(12).exponents == std::vector<std::uint32_t>{2, 1});
  CHECK(signature_of(360).exponents == std::vector<std::uint32_t>{3, 2, 1});
  CHECK(signature_of(17).exponents == std::vector<std::uint32_t>{1});
  CHECK(signature_of(1).exponents.empty());

  CHECK(canonical_n0(PrimeSignature{}) == 1);
  CHECK(canonical_n0(signature_of(12)) == 12);
  CHECK(canonical_n0(signature_of(50)) == 12);   // 50 = 2 * 5^2 -> (2,1) -> 2^2 * 3
  CHECK(canonical_n0(signature_of(17)) == 2);

  SpfTable table = build_spf(5000);
  for (std::uint64_t n = 2; n <= 5000; ++n) {
    PrimeSignature sig = signature_of(n, table);
    CHECK(sig.well_formed());
    CHECK(sig == signature_of(n));
    BigNat n0 = canonical_n0(sig);
    CHECK(n0 <= n);
    REQUIRE(fits_u64(n0));
    CHECK(signature_of(to_u64(n0)) == sig);
  }

  auto [omega, bigomega] = omega_counts(360);
  CHECK(omega == 3);
  CHECK(bigomega == 6);
  CHECK(omega_counts(1) == std::pair<std::uint32_t, std::uint32_t>(0, 0));
}

TEST_CASE("prime window streaming") {
  auto collect = [](double A, double B) {
    std::vector<std::uint64_t> out;
    for_each_prime_in_range(A, B, [&](std::uint64_t p) { out.push_back(p); });
    return out;
  };

  CHECK(collect(10, 30) == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  CHECK(collect(10.5, 29.5) == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  CHECK(collect(11, 11) == std::vector<std::uint64_t>{11});
  CHECK(collect(-5, 3) == std::vector<std::uint64_t>{2, 3});  // low end clamps to 2
  CHECK(collect(30, 10).empty());                             // inverted window
  CHECK(collect(0, 1.5).empty());                             // entirely below 2
  CHECK_THROWS_AS(collect(std::nan(""), 10), DomainError);
  CHECK_THROWS_AS(collect(2, std::nan("")), DomainError);

  // cross a segment boundary: same answer as one whole-range sieve
  auto windowed = collect(999900, 1000100);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t n = 999900; n <= 1000100; ++n)
    if (is_prime_u64(n)) expect.push_back(n);
  CHECK(windowed == expect);

  CHECK_THROWS_AS(primes_in_range(2, 1000000, 100), ResourceError);
  CHECK(primes_in_range(10, 30) == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
}

TEST_CASE("prime reciprocal sums match a long-double oracle") {
  long double expect = oracle::recip_prime_sum(2, 100000);
  double got = prime_reciprocal_sum(2, 100000);
  CHECK(std::fabs(got - static_cast<double>(expect)) < 1e-12);

  CHECK(prime_reciprocal_sum(24, 28) == 0.0);  // no primes inside
  // 1/2 + 1/3 + 1/5 + 1/7 = 247/210
  CHECK(std::fabs(prime_reciprocal_sum(2, 7) - 247.0 / 210.0) < 1e-15);
}

TEST_CASE("mertens gap estimate sits near the sieved sum on big windows") {
  double sieved = prime_reciprocal_sum(100, 1000000);
  double estimate = mertens_gap_estimate(100, 1000000);
  // loglog b - loglog a carries an O(1/log a) error; 100..1e6 lands well
  // inside a 0.05 band empirically
  CHECK(std::fabs(sieved - estimate) < 0.05);
  CHECK_THROWS_AS(mertens_gap_estimate(2, 100), DomainError);  // loglog 2 < 0
}

TEST_CASE("window factorization agrees with per-n factorize") {
  auto check_window = [](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t expect_n = lo;
    factorize_window(lo, hi, [&](std::uint64_t n, const Factorization& f) {
      CHECK(n == expect_n);  // ascending, no gaps
      ++expect_n;
      CHECK(f.value() == n);
      Factorization direct = factorize(n);
      REQUIRE(f.terms.size() == direct.terms.size());
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        CHECK(f.terms[i].prime == direct.terms[i].prime);
        CHECK(f.terms[i].exponent == direct.terms[i].exponent);
      }
    });
    CHECK(expect_n == hi + 1);
  };
  check_window(2, 200);
  check_window(999950, 1000050);   // crosses 1e6 without any table
  check_window(100000000, 100000100);
}
