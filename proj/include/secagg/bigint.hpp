#pragma once

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secagg {

// Arbitrary-precision signed integer, value semantics over GMP's mpz.
// Non-negativity where a contract demands it (moduli, shares, residues)
// is enforced by the callers, not the type.
class Bigint {
 public:
  Bigint() { mpz_init(z_); }
  Bigint(int v) : Bigint(static_cast<long>(v)) {}
  Bigint(long v) { mpz_init_set_si(z_, v); }
  Bigint(unsigned long v) { mpz_init_set_ui(z_, v); }
  Bigint(long long v);
  Bigint(unsigned long long v);
  explicit Bigint(std::string_view digits, int base = 10);

  Bigint(const Bigint& o) { mpz_init_set(z_, o.z_); }
  Bigint(Bigint&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  Bigint& operator=(const Bigint& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  Bigint& operator=(Bigint&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~Bigint() { mpz_clear(z_); }

  // Minimal big-endian magnitude encoding; zero encodes as the empty string.
  static Bigint from_bytes_be(std::span<const uint8_t> bytes);
  std::vector<uint8_t> to_bytes_be() const;

  static Bigint pow2(unsigned long bits) {
    Bigint r;
    mpz_setbit(r.z_, bits);
    return r;
  }

  std::string to_string(int base = 10) const;
  bool fits_u64() const;
  uint64_t to_u64() const;  // throws on negative or out-of-range

  size_t bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(z_, 2); }
  bool is_zero() const { return mpz_sgn(z_) == 0; }
  bool is_odd() const { return mpz_odd_p(z_) != 0; }
  int sign() const { return mpz_sgn(z_); }
  bool test_bit(unsigned long i) const { return mpz_tstbit(z_, i) != 0; }
  void set_bit(unsigned long i) { mpz_setbit(z_, i); }

  Bigint& operator+=(const Bigint& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  Bigint& operator-=(const Bigint& o) {
    mpz_sub(z_, z_, o.z_);
    return *this;
  }
  Bigint& operator*=(const Bigint& o) {
    mpz_mul(z_, z_, o.z_);
    return *this;
  }
  friend Bigint operator+(Bigint a, const Bigint& b) { return a += b; }
  friend Bigint operator-(Bigint a, const Bigint& b) { return a -= b; }
  friend Bigint operator*(Bigint a, const Bigint& b) { return a *= b; }
  Bigint operator-() const {
    Bigint r;
    mpz_neg(r.z_, z_);
    return r;
  }
  Bigint operator<<(unsigned long bits) const {
    Bigint r;
    mpz_mul_2exp(r.z_, z_, bits);
    return r;
  }
  Bigint operator>>(unsigned long bits) const {
    Bigint r;
    mpz_fdiv_q_2exp(r.z_, z_, bits);
    return r;
  }

  // Floored remainder: result has the divisor's sign, so for m > 0 it is the
  // canonical representative in [0, m).
  friend Bigint operator%(const Bigint& a, const Bigint& m) {
    Bigint r;
    mpz_fdiv_r(r.z_, a.z_, m.z_);
    return r;
  }

  bool divisible_by(const Bigint& d) const { return mpz_divisible_p(z_, d.z_) != 0; }
  Bigint divexact(const Bigint& d) const {
    Bigint r;
    mpz_divexact(r.z_, z_, d.z_);
    return r;
  }

  static Bigint gcd(const Bigint& a, const Bigint& b) {
    Bigint r;
    mpz_gcd(r.z_, a.z_, b.z_);
    return r;
  }

  friend bool operator==(const Bigint& a, const Bigint& b) { return mpz_cmp(a.z_, b.z_) == 0; }
  friend std::strong_ordering operator<=>(const Bigint& a, const Bigint& b) {
    int c = mpz_cmp(a.z_, b.z_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // Remainder by a machine word, |result| < d. Used by the prime sieve.
  unsigned long mod_ui(unsigned long d) const { return mpz_fdiv_ui(z_, d); }

  mpz_srcptr raw() const { return z_; }
  mpz_ptr raw() { return z_; }

 private:
  mpz_t z_;
};

// Deterministic seedable randomness source (GMP Mersenne twister). Every
// random draw in the library flows through one of these, so any protocol
// run is replayable from its seed.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  ~Rng();

  Bigint bits(unsigned long n);          // uniform in [0, 2^n)
  Bigint below(const Bigint& bound);     // uniform in [0, bound), bound >= 1
  uint64_t u64();
  uint64_t below_u64(uint64_t bound);    // uniform in [0, bound), bound >= 1
  double unit_real();                    // uniform in [0, 1)
  double normal(double mean, double stddev);

  // Stable sub-seed derivation so independent streams never alias.
  static uint64_t derive(uint64_t seed, std::string_view label, uint64_t index);

 private:
  gmp_randstate_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace secagg
