#include "secagg/modmath.hpp"

#include <algorithm>
#include <vector>

#include "secagg/digest.hpp"
#include "secagg/errors.hpp"

namespace secagg {

namespace {

// Odd primes below 2^14, computed once. Used for trial division and the
// next_prime_above sieve.
const std::vector<uint32_t>& small_primes() {
  static const std::vector<uint32_t> primes = [] {
    constexpr uint32_t limit = 1 << 14;
    std::vector<bool> composite(limit, false);
    std::vector<uint32_t> out;
    for (uint32_t i = 3; i < limit; i += 2) {
      if (composite[i]) continue;
      out.push_back(i);
      for (uint64_t j = uint64_t(i) * i; j < limit; j += 2 * i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Expand SHA-256(seed || round || block) into `bytes` pseudorandom bytes.
std::vector<uint8_t> expand_digest(std::span<const uint8_t> seed, uint64_t round, size_t bytes) {
  std::vector<uint8_t> out;
  out.reserve(bytes + 32);
  std::vector<uint8_t> block(seed.begin(), seed.end());
  size_t base = block.size();
  block.resize(base + 16);
  for (uint64_t counter = 0; out.size() < bytes; ++counter) {
    for (int i = 0; i < 8; ++i) {
      block[base + i] = static_cast<uint8_t>(round >> (8 * (7 - i)));
      block[base + 8 + i] = static_cast<uint8_t>(counter >> (8 * (7 - i)));
    }
    auto d = sha256(block);
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(bytes);
  return out;
}

// Deterministic Miller-Rabin witness in [2, n-2].
Bigint derive_witness(const Bigint& n, const std::vector<uint8_t>& n_bytes, int round) {
  size_t nbytes = n_bytes.size() + 8;
  auto stream = expand_digest(n_bytes, static_cast<uint64_t>(round), nbytes);
  Bigint w = Bigint::from_bytes_be(stream);
  Bigint span = n - Bigint(4);  // witnesses live in [2, n-2]
  return (w % span) + Bigint(2);
}

bool miller_rabin(const Bigint& n, int rounds) {
  Bigint n_minus_1 = n - Bigint(1);
  unsigned long s = 0;
  Bigint d = n_minus_1;
  while (!d.is_odd()) {
    d = d >> 1;
    ++s;
  }
  auto n_bytes = n.to_bytes_be();
  Bigint one(1);
  for (int r = 0; r < rounds; ++r) {
    Bigint a = derive_witness(n, n_bytes, r);
    Bigint x = mod_exp(a, d, n);
    if (x == one || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = (x * x) % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace

SecurityProfile parse_profile(std::string_view name) {
  if (name == "test") return SecurityProfile::test;
  if (name == "prod" || name == "production") return SecurityProfile::production;
  fail(Errc::config_error, "unknown security profile '" + std::string(name) + "'");
}

const char* profile_name(SecurityProfile p) {
  return p == SecurityProfile::test ? "test" : "prod";
}

bool DHGroup::is_valid() const {
  if (p <= Bigint(3) || q <= Bigint(1)) return false;
  if (!is_probable_prime(p) || !is_probable_prime(q)) return false;
  if (!((p - Bigint(1)) % q).is_zero()) return false;
  if (g <= Bigint(1) || g >= p) return false;
  return mod_exp(g, q, p) == Bigint(1);
}

void DHGroup::validate() const {
  if (!is_valid()) fail(Errc::invalid_range, "DH group parameters violate the subgroup invariants");
}

bool is_probable_prime(const Bigint& n, int rounds) {
  if (n < Bigint(2)) return false;
  if (n == Bigint(2) || n == Bigint(3)) return true;
  if (!n.is_odd()) return false;
  for (uint32_t sp : small_primes()) {
    if (n == Bigint(static_cast<unsigned long>(sp))) return true;
    if (n.mod_ui(sp) == 0) return false;
  }
  return miller_rabin(n, rounds);
}

Bigint gen_prime(unsigned bits, Rng& rng) {
  if (bits < 8) fail(Errc::invalid_range, "gen_prime needs bits >= 8");
  for (;;) {
    Bigint c = rng.bits(bits);
    c.set_bit(bits - 1);
    c.set_bit(0);
    if (is_probable_prime(c)) return c;
  }
}

Bigint next_prime_above(const Bigint& lower) {
  Bigint n = lower + Bigint(1);
  if (n <= Bigint(2)) return Bigint(2);
  if (!n.is_odd()) n += Bigint(1);

  // Below the sieve's own prime table a linear scan is both simpler and
  // immune to small primes marking themselves.
  if (n < Bigint(1UL << 20)) {
    while (!is_probable_prime(n)) n += Bigint(2);
    return n;
  }

  // Sieve windows of odd candidates n, n+2, ..., marking multiples of the
  // small primes, and Miller-Rabin the survivors.
  constexpr size_t window = 1 << 15;
  const auto& primes = small_primes();
  std::vector<bool> composite(window);
  for (;;) {
    std::fill(composite.begin(), composite.end(), false);
    for (uint32_t sp : primes) {
      unsigned long r = n.mod_ui(sp);
      // first j with n + 2j == 0 (mod sp): j = (sp - r) * inv2 (mod sp)
      unsigned long j = ((sp - r) % sp) * ((sp + 1) / 2) % sp;
      for (; j < window; j += sp) composite[j] = true;
    }
    for (size_t j = 0; j < window; ++j) {
      if (composite[j]) continue;
      Bigint c = n + Bigint(static_cast<unsigned long>(2 * j));
      if (miller_rabin(c, 40)) return c;
    }
    n += Bigint(static_cast<unsigned long>(2 * window));
  }
}

DHGroup gen_dh_group(unsigned q_bits, unsigned p_bits, Rng& rng) {
  if (q_bits < 8) fail(Errc::invalid_range, "gen_dh_group needs q_bits >= 8");
  if (p_bits < q_bits + 8) fail(Errc::invalid_range, "gen_dh_group needs p_bits >= q_bits + 8");
  Bigint q = gen_prime(q_bits, rng);
  Bigint p, cofactor;
  for (;;) {
    cofactor = rng.bits(p_bits - q_bits);
    cofactor.set_bit(p_bits - q_bits - 1);
    if (cofactor.is_odd()) cofactor += Bigint(1);
    p = cofactor * q + Bigint(1);
    if (is_probable_prime(p)) break;
  }
  Bigint exp = (p - Bigint(1)).divexact(q);
  for (;;) {
    Bigint h = rng.below(p - Bigint(3)) + Bigint(2);
    Bigint g = mod_exp(h, exp, p);
    if (g != Bigint(1)) return DHGroup{p, q, g};
  }
}

Bigint mod_exp(const Bigint& base, const Bigint& exp, const Bigint& m) {
  if (m < Bigint(2)) fail(Errc::invalid_range, "mod_exp modulus must be >= 2");
  Bigint r;
  if (exp.sign() < 0) {
    Bigint inv = mod_inv(base, m);
    Bigint pos = -exp;
    mpz_powm(r.raw(), inv.raw(), pos.raw(), m.raw());
  } else {
    mpz_powm(r.raw(), base.raw(), exp.raw(), m.raw());
  }
  return r;
}

Bigint mod_inv(const Bigint& a, const Bigint& m) {
  Bigint r;
  if (mpz_invert(r.raw(), a.raw(), m.raw()) == 0)
    fail(Errc::non_invertible, "gcd(a, m) != 1");
  return r;
}

Bigint hash_to_unit_group(std::span<const uint8_t> tag, const Bigint& n_squared) {
  size_t bits = n_squared.bit_length();
  size_t nbytes = (bits + 7) / 8;
  std::vector<uint8_t> seed(tag.begin(), tag.end());
  for (uint64_t attempt = 0;; ++attempt) {
    auto stream = expand_digest(seed, attempt, nbytes);
    Bigint c = Bigint::from_bytes_be(stream) >> (nbytes * 8 - bits);
    if (c.is_zero() || c >= n_squared) continue;
    if (Bigint::gcd(c, n_squared) == Bigint(1)) return c;
  }
}

}  // namespace secagg
