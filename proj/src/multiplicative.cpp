#include "factorisatio/multiplicative.hpp"

#include <algorithm>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "factorisatio/errors.hpp"
#include "factorisatio/partitions.hpp"

namespace factorisatio {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Internal ceiling on divisor-recursion work (row-construction scans).  Sized
// so the widest signatures the value-set walk can reach at x = 1e8 still fit
// (their row scans cost ~1e9 cheap divisibility tests); a single f()
// evaluation blowing through this means the input is far outside desk scale.
constexpr u64 kDivisorDpWorkBudget = 4'000'000'000;

// Separate ceiling for the big-integer divisor lattice (one BigNat per code
// held in memory at once).
constexpr u64 kVectorLatticeBudget = 5'000'000;

std::vector<u64> divisors_of(const Factorization& fac) {
  std::vector<u64> divs{1};
  for (const auto& t : fac.terms) {
    std::size_t base = divs.size();
    u64 pe = 1;
    for (u32 e = 1; e <= t.exponent; ++e) {
      pe *= t.prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// ---------------------------------------------------------------------------
// Divisor-chain recursion, machine-word values
// ---------------------------------------------------------------------------
//
// Every factorization of v is a non-increasing chain of divisors, so
//
//   count(v, bound) = sum over divisors d of v, 2 <= d <= bound,
//                     of count(v / d, d)
//
// Rather than memoize on raw (v, bound) pairs, each remaining value v keeps
// its usable parts (divisors >= 2, ascending) plus running prefix sums
// pref[c] = count(v, parts[c-1]); a bound collapses to "how many of v's
// parts it admits".  The prefix form makes each state O(1) to extend.

struct DivisorChainCounter {
  std::vector<u64> all_divisors;

  struct Row {
    std::vector<u64> parts;
    std::vector<BigNat> pref;  // pref[c] = factorizations of v into parts[0..c)
  };
  std::unordered_map<u64, Row> rows;
  u64 work = 0;

  explicit DivisorChainCounter(const Factorization& fac) : all_divisors(divisors_of(fac)) {}

  Row& row(u64 v) {
    auto [it, fresh] = rows.try_emplace(v);
    Row& r = it->second;
    if (fresh) {
      work += all_divisors.size();
      for (u64 d : all_divisors) {
        if (d > v) break;
        if (d >= 2 && v % d == 0) r.parts.push_back(d);
      }
      r.pref.emplace_back(0);  // zero usable parts, v >= 2: no factorization
      if (work > kDivisorDpWorkBudget)
        throw ResourceError("count_factorizations: divisor recursion exceeded work budget");
    }
    return r;
  }

  std::size_t admitted(u64 v, u64 bound) {
    const auto& parts = row(v).parts;
    return static_cast<std::size_t>(
        std::upper_bound(parts.begin(), parts.end(), bound) - parts.begin());
  }

  const BigNat& count(u64 v, std::size_t c) {
    static const BigNat kOne(1);
    if (v == 1) return kOne;
    Row& r = row(v);
    while (r.pref.size() <= c) {
      std::size_t i = r.pref.size() - 1;
      u64 d = r.parts[i];
      u64 child = v / d;
      ++work;
      const BigNat& term = (child == 1) ? kOne : count(child, admitted(child, d));
      // Note: r stays valid across the recursion; unordered_map never moves
      // mapped values on rehash.
      r.pref.push_back(r.pref[i] + term);
    }
    return r.pref[c];
  }
};

// ---------------------------------------------------------------------------
// Divisor-chain recursion, exponent-vector values
// ---------------------------------------------------------------------------
//
// The same chain recursion for signatures whose least representative does not
// fit a machine word.  Divisors become exponent vectors under a mixed-radix
// code; magnitudes (which drive the "non-increasing chain" ordering) are
// exact BigNats computed once per divisor and compared via a precomputed
// rank, so the hot path never touches big-integer comparisons.

struct VectorChainCounter {
  std::size_t dims;
  std::vector<u32> radix;    // exponent_i + 1
  std::vector<u64> stride;   // code = sum exponent_i * stride_i
  u64 total;                 // number of divisor vectors
  std::vector<u32> rank_of_code;
  std::vector<u64> code_of_rank;

  struct Row {
    std::vector<u32> parts;  // ranks of divisors of v with value >= 2, ascending rank
    std::vector<BigNat> pref;
  };
  std::unordered_map<u64, Row> rows;
  u64 work = 0;

  explicit VectorChainCounter(const PrimeSignature& sig) {
    dims = sig.exponents.size();
    radix.resize(dims);
    stride.resize(dims);
    total = 1;
    for (std::size_t i = 0; i < dims; ++i) {
      radix[i] = sig.exponents[i] + 1;
      stride[i] = total;
      // Lattice size is a memory bound (one big-int value per divisor), so it
      // gets a much tighter cap than the scan-work budget.
      if (total > kVectorLatticeBudget / radix[i])
        throw ResourceError("f_of_signature: divisor lattice too large");
      total *= radix[i];
    }
    // Divisor values by code, built incrementally along the lowest digit.
    auto primes = first_primes(dims);
    std::vector<BigNat> value(total);
    value[0] = 1;
    for (u64 code = 1; code < total; ++code) {
      for (std::size_t i = 0; i < dims; ++i) {
        u64 digit = code / stride[i] % radix[i];
        if (digit > 0) {
          value[code] = value[code - stride[i]] * BigNat(static_cast<unsigned long>(primes[i]));
          break;
        }
      }
    }
    std::vector<u32> order(total);
    for (u64 i = 0; i < total; ++i) order[i] = static_cast<u32>(i);
    std::sort(order.begin(), order.end(),
              [&](u32 a, u32 b) { return value[a] < value[b]; });
    rank_of_code.resize(total);
    code_of_rank.resize(total);
    for (u64 r = 0; r < total; ++r) {
      rank_of_code[order[r]] = static_cast<u32>(r);
      code_of_rank[r] = order[r];
    }
  }

  // Enumerates codes of all divisors of v (componentwise <=) via an odometer;
  // collected as ranks and sorted so parts are ascending by magnitude.
  Row& row(u64 vcode) {
    auto [it, fresh] = rows.try_emplace(vcode);
    Row& r = it->second;
    if (fresh) {
      std::vector<u32> digits(dims), limit(dims);
      for (std::size_t i = 0; i < dims; ++i)
        limit[i] = static_cast<u32>(vcode / stride[i] % radix[i]);
      u64 code = 0;
      while (true) {
        if (code != 0) r.parts.push_back(rank_of_code[code]);
        std::size_t i = 0;
        while (i < dims && digits[i] == limit[i]) {
          code -= stride[i] * digits[i];
          digits[i] = 0;
          ++i;
        }
        if (i == dims) break;
        ++digits[i];
        code += stride[i];
      }
      std::sort(r.parts.begin(), r.parts.end());
      work += r.parts.size() + 1;
      r.pref.emplace_back(0);
      if (work > kDivisorDpWorkBudget)
        throw ResourceError("f_of_signature: vector recursion exceeded work budget");
    }
    return r;
  }

  std::size_t admitted(u64 vcode, u32 bound_rank) {
    const auto& parts = row(vcode).parts;
    return static_cast<std::size_t>(
        std::upper_bound(parts.begin(), parts.end(), bound_rank) - parts.begin());
  }

  const BigNat& count(u64 vcode, std::size_t c) {
    static const BigNat kOne(1);
    if (vcode == 0) return kOne;
    Row& r = row(vcode);
    while (r.pref.size() <= c) {
      std::size_t i = r.pref.size() - 1;
      u32 drank = r.parts[i];
      u64 child = vcode - code_of_rank[drank];
      ++work;
      const BigNat& term = (child == 0) ? kOne : count(child, admitted(child, drank));
      r.pref.push_back(r.pref[i] + term);
    }
    return r.pref[c];
  }

  BigNat run() {
    u64 top = total - 1;  // code of the full exponent vector
    if (top == 0) return BigNat(1);
    Row& r = row(top);
    std::size_t c = r.parts.size();
    return count(top, c);
  }
};

BigNat compute_f_of_signature(const PrimeSignature& sig) {
  if (!sig.well_formed())
    throw DomainError("f_of_signature: malformed signature");
  if (sig.exponents.empty()) return BigNat(1);
  BigNat n0 = canonical_n0(sig);
  if (fits_u64(n0)) {
    // Build the factorization of the least representative directly.
    Factorization fac;
    auto primes = first_primes(sig.exponents.size());
    for (std::size_t i = 0; i < sig.exponents.size(); ++i)
      fac.terms.push_back({primes[i], sig.exponents[i]});
    return count_factorizations(fac);
  }
  VectorChainCounter ctx(sig);
  return ctx.run();
}

}  // namespace

// ---------------------------------------------------------------------------
// SignatureCache
// ---------------------------------------------------------------------------

const BigNat* SignatureCache::lookup_ptr(const PrimeSignature& sig) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(sig);
  if (it == map_.end()) {
    misses_.fetch_add(1, std::memory_order_relaxed);
    return nullptr;
  }
  hits_.fetch_add(1, std::memory_order_relaxed);
  return &it->second;
}

std::optional<BigNat> SignatureCache::lookup(const PrimeSignature& sig) const {
  const BigNat* p = lookup_ptr(sig);
  if (!p) return std::nullopt;
  return *p;
}

const BigNat& SignatureCache::store(const PrimeSignature& sig, BigNat value) {
  if (!sig.well_formed()) throw DomainError("SignatureCache: malformed signature");
  std::unique_lock lock(mu_);
  // try_emplace leaves `value` untouched when the key already exists, so the
  // conflict check below still sees the caller's value.
  auto [it, fresh] = map_.try_emplace(sig, std::move(value));
  if (!fresh && it->second != value)
    throw DomainError("SignatureCache: conflicting value for existing signature");
  return it->second;
}

void SignatureCache::merge(const std::vector<std::pair<PrimeSignature, BigNat>>& entries) {
  std::unique_lock lock(mu_);
  for (const auto& [sig, value] : entries) {
    auto [it, fresh] = map_.try_emplace(sig, value);
    if (!fresh && it->second != value)
      throw DomainError("SignatureCache: merge conflict with differing values");
  }
}

std::size_t SignatureCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

void SignatureCache::save(std::ostream& out) const {
  std::shared_lock lock(mu_);
  std::vector<const std::pair<const PrimeSignature, BigNat>*> entries;
  entries.reserve(map_.size());
  for (const auto& kv : map_) entries.push_back(&kv);
  std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
    return a->first.exponents < b->first.exponents;
  });
  for (const auto* kv : entries) {
    out << "sig=";
    for (std::size_t i = 0; i < kv->first.exponents.size(); ++i) {
      if (i) out << ',';
      out << kv->first.exponents[i];
    }
    out << " f=" << kv->second.get_str() << '\n';
  }
}

void SignatureCache::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw DomainError("cache line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) fail("empty line");
    if (line.rfind("sig=", 0) != 0) fail("expected 'sig=' prefix");
    std::size_t sp = line.find(' ');
    if (sp == std::string::npos) fail("missing ' f=' separator");
    std::string sigpart = line.substr(4, sp - 4);
    if (line.compare(sp, 3, " f=") != 0) fail("missing ' f=' separator");
    std::string fpart = line.substr(sp + 3);

    PrimeSignature sig;
    if (!sigpart.empty()) {
      std::size_t pos = 0;
      while (pos <= sigpart.size()) {
        std::size_t comma = sigpart.find(',', pos);
        std::string tok = sigpart.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
          fail("bad exponent token '" + tok + "'");
        unsigned long e = std::stoul(tok);
        if (e == 0 || e > 0xfffffffful) fail("exponent out of range");
        sig.exponents.push_back(static_cast<u32>(e));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    if (!sig.well_formed()) fail("exponents not non-increasing");
    if (fpart.empty() || fpart.find_first_not_of("0123456789") != std::string::npos)
      fail("bad f value");
    BigNat value(fpart);
    if (value < 1) fail("f value must be positive");

    std::unique_lock lock(mu_);
    auto [it, fresh] = map_.try_emplace(sig, std::move(value));
    if (!fresh && it->second != value) fail("duplicate signature with differing value");
  }
}

void SignatureCache::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CheckpointError("cannot open cache file for writing: " + path);
  save(out);
  if (!out.good()) throw CheckpointError("write failure on cache file: " + path);
}

void SignatureCache::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open cache file: " + path);
  load(in);
}

// ---------------------------------------------------------------------------
// Counting, enumeration, identities
// ---------------------------------------------------------------------------

BigNat count_factorizations(const Factorization& fac) {
  if (fac.terms.empty()) return BigNat(1);
  DivisorChainCounter ctx(fac);
  u64 n = fac.value();
  std::size_t c = ctx.row(n).parts.size();
  return ctx.count(n, c);
}

BigNat count_factorizations(std::uint64_t n) {
  if (n == 0) throw DomainError("count_factorizations: n must be positive");
  return count_factorizations(factorize(n));
}

std::vector<FactorMultiset> enumerate_factorizations(std::uint64_t n, std::uint64_t oracle_limit) {
  if (n == 0) throw DomainError("enumerate_factorizations: n must be positive");
  if (n > oracle_limit)
    throw ResourceError("enumerate_factorizations: n exceeds oracle limit " +
                        std::to_string(oracle_limit));
  std::vector<FactorMultiset> out;
  if (n == 1) {
    out.emplace_back();  // the empty product
    return out;
  }
  std::vector<u64> divs = divisors_of(factorize(n));
  FactorMultiset cur;
  // Largest factor first; descending recursion yields each multiset once.
  auto rec = [&](auto&& self, u64 v, u64 maxpart) -> void {
    for (std::size_t i = divs.size(); i-- > 0;) {
      u64 d = divs[i];
      if (d > maxpart || d > v) continue;
      if (d < 2) break;
      if (v % d != 0) continue;
      cur.push_back(d);
      if (v == d)
        out.push_back(cur);
      else
        self(self, v / d, d);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

BigNat f_of_signature(const PrimeSignature& sig, SignatureCache& cache) {
  if (const BigNat* hit = cache.lookup_ptr(sig)) return *hit;
  BigNat value = compute_f_of_signature(sig);
  return cache.store(sig, std::move(value));
}

std::pair<BigNat, BigNat> f_prime_power_identity(std::uint32_t a) {
  PrimeSignature sig;
  if (a > 0) sig.exponents.push_back(a);
  BigNat f = compute_f_of_signature(sig);
  // Partition side computed through the pentagonal recurrence, nothing shared
  // with the divisor recursion above.
  PartitionTable table = partition_table(a);
  return {f, table.values[a]};
}

std::uint32_t max_exponent(std::uint64_t n) {
  if (n < 2) throw DomainError("max_exponent: n must be at least 2");
  Factorization fac = factorize(n);
  u32 m = 0;
  for (const auto& t : fac.terms) m = std::max(m, t.exponent);
  return m;
}

// ---------------------------------------------------------------------------
// Multiset-partition DP (independent cross-check)
// ---------------------------------------------------------------------------
//
// Counts partitions of the exponent multiset directly.  Parts are the
// nonzero sub-vectors of the remaining vector, ordered by mixed-radix code
// (NOT by magnitude -- the point is to take a genuinely different route than
// the divisor recursion).  Standard unordered-combination DP:
//
//   ways(rem, c) = ways(rem, c-1) + ways(rem - part_c, c)
//
// kept in prefix form per remaining vector, parts listed per remainder.

BigNat multiset_partition_count(const PrimeSignature& sig, std::uint64_t work_budget) {
  if (!sig.well_formed())
    throw DomainError("multiset_partition_count: malformed signature");
  if (sig.exponents.empty()) return BigNat(1);
  if (sig.omega_total() > 64)
    throw ResourceError("multiset_partition_count: exponent sum above limit");

  const std::size_t dims = sig.exponents.size();
  std::vector<u32> radix(dims);
  std::vector<u64> stride(dims);
  u64 total = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    radix[i] = sig.exponents[i] + 1;
    stride[i] = total;
    if (total > work_budget / radix[i])
      throw ResourceError("multiset_partition_count: sub-multiset lattice exceeds budget");
    total *= radix[i];
  }

  struct Row {
    std::vector<u64> parts;  // nonzero sub-vector codes of rem, ascending code
    std::vector<BigNat> pref;
  };
  std::unordered_map<u64, Row> rows;
  u64 work = 0;

  auto row = [&](u64 rem) -> Row& {
    auto [it, fresh] = rows.try_emplace(rem);
    Row& r = it->second;
    if (fresh) {
      std::vector<u32> digits(dims), limit(dims);
      for (std::size_t i = 0; i < dims; ++i)
        limit[i] = static_cast<u32>(rem / stride[i] % radix[i]);
      u64 code = 0;
      while (true) {
        if (code != 0) r.parts.push_back(code);
        std::size_t i = 0;
        while (i < dims && digits[i] == limit[i]) {
          code -= stride[i] * digits[i];
          digits[i] = 0;
          ++i;
        }
        if (i == dims) break;
        ++digits[i];
        code += stride[i];
      }
      // Odometer order is not code order in general; parts must ascend by code.
      std::sort(r.parts.begin(), r.parts.end());
      r.pref.emplace_back(0);
      work += r.parts.size() + 1;
      if (work > work_budget)
        throw ResourceError("multiset_partition_count: DP exceeded work budget");
    }
    return r;
  };

  auto admitted = [&](u64 rem, u64 bound_code) -> std::size_t {
    const auto& parts = row(rem).parts;
    return static_cast<std::size_t>(
        std::upper_bound(parts.begin(), parts.end(), bound_code) - parts.begin());
  };

  auto count = [&](auto&& self, u64 rem, std::size_t c) -> const BigNat& {
    static const BigNat kOne(1);
    if (rem == 0) return kOne;
    Row& r = row(rem);
    while (r.pref.size() <= c) {
      std::size_t i = r.pref.size() - 1;
      u64 part = r.parts[i];
      u64 child = rem - part;
      ++work;
      // Repetition allowed: the child may reuse the same part, hence the
      // bound is the part itself, not its predecessor.
      const BigNat& term = (child == 0) ? kOne : self(self, child, admitted(child, part));
      r.pref.push_back(r.pref[i] + term);
    }
    return r.pref[c];
  };

  u64 top = total - 1;
  Row& r = row(top);
  return count(count, top, r.parts.size());
}

// ---------------------------------------------------------------------------
// Bulk evaluation
// ---------------------------------------------------------------------------

namespace {

struct ChunkOut {
  u64 start = 0;
  u64 len = 0;
  std::vector<PrimeSignature> sigs;
  std::vector<const BigNat*> fvals;
};

}  // namespace

void bulk_f_range(std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
                  SignatureCache& cache, unsigned workers,
                  const std::function<void(std::uint64_t, const PrimeSignature&, const BigNat&)>& emit) {
  if (lo < 2 || lo > hi) throw DomainError("bulk_f_range: need 2 <= lo <= hi");
  if (hi > table.limit)
    throw DomainError("bulk_f_range: range exceeds SPF table limit " +
                      std::to_string(table.limit));
  if (workers == 0) workers = 1;

  constexpr u64 kChunk = 1u << 16;
  const u64 nchunks = (hi - lo) / kChunk + 1;
  const u64 window = static_cast<u64>(workers) * 2 + 2;

  std::mutex mu;
  std::condition_variable cv_done, cv_space;
  std::map<u64, ChunkOut> done;
  u64 next_emit = 0;
  std::atomic<u64> next_claim{0};
  std::exception_ptr failure;
  bool aborted = false;

  auto worker_fn = [&]() {
    try {
      while (true) {
        u64 c = next_claim.fetch_add(1, std::memory_order_relaxed);
        if (c >= nchunks) return;
        {
          // Keep claimed chunks within a bounded window of the emitter so
          // reorder-buffer memory stays flat.
          std::unique_lock lock(mu);
          cv_space.wait(lock, [&] { return aborted || c < next_emit + window; });
          if (aborted) return;
        }
        ChunkOut out;
        out.start = lo + c * kChunk;
        out.len = std::min(hi - out.start + 1, kChunk);
        out.sigs.resize(out.len);
        out.fvals.resize(out.len);

        std::unordered_map<PrimeSignature, const BigNat*, PrimeSignatureHash> seen;
        for (u64 i = 0; i < out.len; ++i) {
          u64 n = out.start + i;
          PrimeSignature sig;
          while (n > 1) {
            u64 p = table.spf[n];
            u32 e = 0;
            do {
              n /= p;
              ++e;
            } while (n % p == 0);
            sig.exponents.push_back(e);
          }
          std::sort(sig.exponents.begin(), sig.exponents.end(), std::greater<>());
          auto [it, fresh] = seen.try_emplace(sig, nullptr);
          if (fresh) {
            const BigNat* ptr = cache.lookup_ptr(sig);
            if (!ptr) ptr = &cache.store(sig, compute_f_of_signature(sig));
            it->second = ptr;
          }
          out.sigs[i] = it->first;
          out.fvals[i] = it->second;
        }
        {
          std::unique_lock lock(mu);
          done.emplace(c, std::move(out));
        }
        cv_done.notify_all();
      }
    } catch (...) {
      std::unique_lock lock(mu);
      if (!failure) failure = std::current_exception();
      aborted = true;
      cv_done.notify_all();
      cv_space.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_fn);

  {
    std::unique_lock lock(mu);
    while (next_emit < nchunks) {
      cv_done.wait(lock, [&] { return aborted || done.count(next_emit) > 0; });
      if (aborted) break;
      ChunkOut out = std::move(done[next_emit]);
      done.erase(next_emit);
      lock.unlock();
      for (u64 i = 0; i < out.len; ++i) emit(out.start + i, out.sigs[i], *out.fvals[i]);
      lock.lock();
      ++next_emit;
      cv_space.notify_all();
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace factorisatio
