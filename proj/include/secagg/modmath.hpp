#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "secagg/bigint.hpp"

namespace secagg {

// Concrete parameter sizes behind the abstract security level.
enum class SecurityProfile { test, production };

struct ProfileSpec {
  unsigned jl_modulus_bits;   // |N|
  unsigned dh_subgroup_bits;  // |q|
  unsigned dh_modulus_bits;   // |p|
};

constexpr ProfileSpec profile_spec(SecurityProfile p) {
  return p == SecurityProfile::test ? ProfileSpec{512, 160, 512}
                                    : ProfileSpec{2048, 256, 2048};
}

SecurityProfile parse_profile(std::string_view name);  // "test" | "prod"/"production"
const char* profile_name(SecurityProfile p);

// Schnorr-style group: g generates the order-q subgroup of Z*_p, q | p-1.
struct DHGroup {
  Bigint p;
  Bigint q;
  Bigint g;

  bool is_valid() const;
  void validate() const;  // throws InvalidRange with the violated condition
};

// Miller-Rabin (>= 40 rounds by default) behind a small-prime sieve. Witnesses
// are derived deterministically from the candidate, so this is a pure function.
bool is_probable_prime(const Bigint& n, int rounds = 40);

// Probable prime of exactly `bits` bits (top bit set). bits >= 8.
Bigint gen_prime(unsigned bits, Rng& rng);

// Smallest probable prime strictly greater than `lower`.
Bigint next_prime_above(const Bigint& lower);

// q prime of q_bits, p = k*q + 1 prime near p_bits, g = h^((p-1)/q) != 1.
DHGroup gen_dh_group(unsigned q_bits, unsigned p_bits, Rng& rng);

// base^exp mod m; negative exponents go through the modular inverse and
// throw NonInvertible when gcd(base, m) != 1.
Bigint mod_exp(const Bigint& base, const Bigint& exp, const Bigint& m);

// a^-1 mod m, throws NonInvertible when gcd(a, m) != 1.
Bigint mod_inv(const Bigint& a, const Bigint& m);

// Full-domain hash into Z*_{n_squared}: counter-mode SHA-256 expansion with
// rejection of out-of-range or non-coprime candidates. Pure in (tag, modulus).
Bigint hash_to_unit_group(std::span<const uint8_t> tag, const Bigint& n_squared);

}  // namespace secagg
