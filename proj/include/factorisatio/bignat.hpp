#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace factorisatio {

// Exact arithmetic is delegated to GMP.  BigNat values are nonnegative by
// convention; nothing in this codebase ever stores a negative count.
using BigNat = mpz_class;
using BigRat = mpq_class;

// Natural log of a positive BigNat without overflowing double.  GMP hands us
// the mantissa in [0.5, 1) and the binary exponent separately, so values far
// beyond DBL_MAX are fine.
double log_bignat(const BigNat& v);

// v^e and n! as BigNat.  Thin wrappers over mpz primitives.
BigNat bignat_pow(const BigNat& base, unsigned long e);
BigNat bignat_factorial(unsigned long n);

// True iff v fits in an unsigned 64-bit word (used to pick fast paths).
bool fits_u64(const BigNat& v);
std::uint64_t to_u64(const BigNat& v);

// Decimal rendering of a rational as "num/den" (canonical form).
std::string rat_to_string(const BigRat& q);

}  // namespace factorisatio
