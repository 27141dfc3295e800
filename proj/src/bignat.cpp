#include "factorisatio/bignat.hpp"

#include <cmath>

#include "factorisatio/errors.hpp"

namespace factorisatio {

double log_bignat(const BigNat& v) {
  if (sgn(v) <= 0) throw DomainError("log_bignat: argument must be positive");
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

BigNat bignat_pow(const BigNat& base, unsigned long e) {
  BigNat r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

BigNat bignat_factorial(unsigned long n) {
  BigNat r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

bool fits_u64(const BigNat& v) {
  return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigNat& v) {
  std::uint64_t lo = mpz_getlimbn(v.get_mpz_t(), 0);
  return mpz_size(v.get_mpz_t()) == 0 ? 0 : lo;
}

std::string rat_to_string(const BigRat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace factorisatio
