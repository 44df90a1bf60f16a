#include <gmp.h>

#include <set>

#include "doctest.h"
#include "secagg/errors.hpp"
#include "secagg/modmath.hpp"

using namespace secagg;

namespace {

// Independent primality oracle: trial division below 10^4 plus GMP's own
// Baillie-PSW / Miller-Rabin implementation. Shares no logic with
// secagg::is_probable_prime beyond the limb arithmetic.
bool oracle_is_prime(const Bigint& n) {
  if (n < Bigint(2)) return false;
  for (unsigned long d = 2; d < 10000; ++d) {
    Bigint dd(d);
    if (dd * dd > n) return true;
    if (n.mod_ui(d) == 0) return n == dd;
  }
  return mpz_probab_prime_p(n.raw(), 40) > 0;
}

// Extended Euclid oracle for inverses, independent of mpz_invert.
Bigint oracle_inverse(const Bigint& a, const Bigint& m) {
  Bigint old_r = a % m, r = m;
  Bigint old_s(1), s(0);
  while (!r.is_zero()) {
    Bigint q;
    mpz_fdiv_q(q.raw(), old_r.raw(), r.raw());
    Bigint tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  REQUIRE(old_r == Bigint(1));
  return old_s % m;
}

}  // namespace

TEST_SUITE("modmath") {

TEST_CASE("bigint bytes roundtrip and arithmetic basics") {
  Bigint v("123456789012345678901234567890");
  CHECK(Bigint::from_bytes_be(v.to_bytes_be()) == v);
  CHECK(Bigint(0).to_bytes_be().empty());
  CHECK(Bigint(255).to_bytes_be() == std::vector<uint8_t>{0xff});
  CHECK(Bigint(-7) % Bigint(5) == Bigint(3));  // floored mod is canonical
  CHECK((Bigint(1) << 10) == Bigint(1024));
  CHECK(Bigint::pow2(16) == Bigint(65536));
  CHECK(Bigint("ff", 16) == Bigint(255));
  CHECK(Bigint(uint64_t{0xffffffffffffffffULL}).to_u64() == 0xffffffffffffffffULL);
}

TEST_CASE("gen_prime produces an 8-bit prime") {
  Rng rng(1);
  Bigint p = gen_prime(8, rng);
  CHECK(p >= Bigint(128));
  CHECK(p <= Bigint(255));
  CHECK(oracle_is_prime(p));
}

TEST_CASE("gen_prime is deterministic under a fixed seed") {
  Rng a(42), b(42);
  CHECK(gen_prime(16, a) == gen_prime(16, b));
}

TEST_CASE("gen_prime 512-bit output passes the independent oracle") {
  Rng rng(7);
  Bigint p = gen_prime(512, rng);
  CHECK(p.bit_length() == 512);
  CHECK(oracle_is_prime(p));
}

TEST_CASE("gen_prime rejects tiny bit sizes") {
  Rng rng(1);
  CHECK_THROWS_AS(gen_prime(4, rng), Error);
}

TEST_CASE("hand-checked DH group satisfies the invariants") {
  DHGroup g{Bigint(23), Bigint(11), Bigint(2)};
  CHECK(mod_exp(Bigint(2), Bigint(11), Bigint(23)) == Bigint(1));
  CHECK(g.is_valid());
}

TEST_CASE("generated DH groups satisfy the invariants for any seed") {
  for (uint64_t seed : {3u, 4u, 5u}) {
    Rng rng(seed);
    DHGroup g = gen_dh_group(32, 96, rng);
    CHECK(oracle_is_prime(g.p));
    CHECK(oracle_is_prime(g.q));
    CHECK(((g.p - Bigint(1)) % g.q).is_zero());
    CHECK(g.g != Bigint(1));
    CHECK(mod_exp(g.g, g.q, g.p) == Bigint(1));
    CHECK(g.q.bit_length() == 32);
  }
}

TEST_CASE("two seeds give two different DH groups") {
  Rng a(10), b(11);
  DHGroup ga = gen_dh_group(32, 96, a);
  DHGroup gb = gen_dh_group(32, 96, b);
  CHECK(ga.q != gb.q);
}

TEST_CASE("group validation rejects a broken subgroup") {
  DHGroup bad{Bigint(23), Bigint(7), Bigint(2)};  // 7 does not divide 22
  CHECK(!bad.is_valid());
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("mod_exp hand examples") {
  CHECK(mod_exp(Bigint(2), Bigint(15), Bigint(23)) == Bigint(16));
  Rng rng(3);
  Bigint m = gen_prime(64, rng);
  CHECK(mod_exp(rng.below(m), Bigint(0), m) == Bigint(1));
  CHECK(mod_exp(Bigint(4), Bigint(-1), Bigint(1225)) == Bigint(919));
}

TEST_CASE("mod_exp exponent additivity") {
  Rng rng(4);
  Bigint m = gen_prime(128, rng);
  Bigint g = rng.below(m - Bigint(2)) + Bigint(2);
  for (int i = 0; i < 20; ++i) {
    Bigint a = rng.bits(100), b = rng.bits(100);
    CHECK(mod_exp(g, a + b, m) == (mod_exp(g, a, m) * mod_exp(g, b, m)) % m);
  }
}

TEST_CASE("negative exponents equal the inverse of the positive result") {
  Rng rng(5);
  Bigint m = gen_prime(96, rng);
  Bigint g = rng.below(m - Bigint(2)) + Bigint(2);
  Bigint e = rng.bits(40);
  CHECK(mod_exp(g, -e, m) == mod_inv(mod_exp(g, e, m), m));
}

TEST_CASE("mod_exp with negative exponent needs an invertible base") {
  CHECK_THROWS_AS(mod_exp(Bigint(10), Bigint(-2), Bigint(35)), Error);
  try {
    mod_exp(Bigint(10), Bigint(-2), Bigint(35));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_invertible);
  }
}

TEST_CASE("mod_inv hand examples and random oracle sweep") {
  CHECK(mod_inv(Bigint(4), Bigint(1225)) == Bigint(919));
  Rng rng(6);
  Bigint m = gen_prime(200, rng);
  CHECK(mod_inv(Bigint(1), m) == Bigint(1));
  for (int i = 0; i < 30; ++i) {
    Bigint a = rng.below(m - Bigint(1)) + Bigint(1);
    Bigint inv = mod_inv(a, m);
    CHECK((a * inv) % m == Bigint(1));
    CHECK(inv == oracle_inverse(a, m));
  }
  CHECK_THROWS_AS(mod_inv(Bigint(35), Bigint(1225)), Error);
}

TEST_CASE("hash_to_unit_group is deterministic and lands in the unit group") {
  Rng rng(8);
  Bigint n = gen_prime(256, rng) * gen_prime(256, rng);
  Bigint n2 = n * n;
  std::vector<uint8_t> tag{1, 0, 0, 0, 0};
  Bigint a = hash_to_unit_group(tag, n2);
  Bigint b = hash_to_unit_group(tag, n2);
  CHECK(a == b);
  CHECK(a >= Bigint(1));
  CHECK(a < n2);
  CHECK(Bigint::gcd(a, n2) == Bigint(1));
  std::vector<uint8_t> tag2{1, 0, 0, 0, 1};
  CHECK(hash_to_unit_group(tag2, n2) != a);
}

TEST_CASE("next_prime_above small and large") {
  CHECK(next_prime_above(Bigint(1)) == Bigint(2));
  CHECK(next_prime_above(Bigint(2)) == Bigint(3));
  CHECK(next_prime_above(Bigint(10)) == Bigint(11));
  CHECK(next_prime_above(Bigint(3675)) == Bigint(3677));
  Bigint lower = Bigint::pow2(300);
  Bigint p = next_prime_above(lower);
  CHECK(p > lower);
  CHECK(oracle_is_prime(p));
  // nothing prime in between
  for (Bigint c = lower + Bigint(1); c < p; c += Bigint(1)) CHECK(!oracle_is_prime(c));
}

TEST_CASE("rng sub-stream derivation separates labels") {
  CHECK(Rng::derive(1, "a", 0) != Rng::derive(1, "b", 0));
  CHECK(Rng::derive(1, "a", 0) != Rng::derive(1, "a", 1));
  CHECK(Rng::derive(1, "a", 0) == Rng::derive(1, "a", 0));
}

}  // TEST_SUITE
