#include <vector>

#include "doctest.h"
#include "secagg/errors.hpp"
#include "secagg/shamir.hpp"

using namespace secagg;

namespace {

const FieldSpec kSmallField{Bigint(11)};
const FieldSpec kBigField{Bigint("170141183460469231731687303715884105727")};  // 2^127 - 1

std::vector<uint64_t> members_upto(uint64_t n) {
  std::vector<uint64_t> m;
  for (uint64_t u = 1; u <= n; ++u) m.push_back(u);
  return m;
}

}  // namespace

TEST_SUITE("shamir") {

TEST_CASE("threshold one degenerates to copies of the secret") {
  Rng rng(21);
  auto shares = ss_share(Bigint(5), 1, members_upto(4), kSmallField, rng);
  for (const Share& s : shares) CHECK(s.value == Bigint(5));
  CHECK(ss_recon(std::vector<Share>{shares[2]}, 1, kSmallField) == Bigint(5));
}

TEST_CASE("hand-evaluated polynomial 5 + 2x over F_11") {
  // shares of p(x) = 5 + 2x at x = 1, 2, 3
  std::vector<Share> shares{{1, Bigint(7)}, {2, Bigint(9)}, {3, Bigint(0)}};
  CHECK(ss_recon(std::span(shares).subspan(0, 2), 2, kSmallField) == Bigint(5));
  CHECK(ss_recon(std::span(shares).subspan(1, 2), 2, kSmallField) == Bigint(5));
  CHECK(ss_recon(shares, 2, kSmallField) == Bigint(5));
}

TEST_CASE("every t-subset reconstructs, all t <= n <= 6") {
  Rng rng(22);
  for (unsigned n = 1; n <= 6; ++n) {
    auto members = members_upto(n);
    for (unsigned t = 1; t <= n; ++t) {
      Bigint secret = rng.below(kBigField.prime);
      auto shares = ss_share(secret, t, members, kBigField, rng);
      // iterate subsets of size t via bitmask
      for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<unsigned>(__builtin_popcount(mask)) != t) continue;
        std::vector<Share> subset;
        for (unsigned i = 0; i < n; ++i)
          if (mask & (1u << i)) subset.push_back(shares[i]);
        CHECK(ss_recon(subset, t, kBigField) == secret);
      }
    }
  }
}

TEST_CASE("shareswise addition reconstructs the secret sum") {
  Rng rng(23);
  auto members = members_upto(3);
  auto a = ss_share(Bigint(3), 2, members, kSmallField, rng);
  auto b = ss_share(Bigint(4), 2, members, kSmallField, rng);
  CHECK(ss_recon(ss_add(a, b, kSmallField), 2, kSmallField) == Bigint(7));

  auto zero = ss_share(Bigint(0), 2, members, kSmallField, rng);
  CHECK(ss_recon(ss_add(a, zero, kSmallField), 2, kSmallField) == Bigint(3));
}

TEST_CASE("sums of many sharings match the brute-force secret sum") {
  Rng rng(24);
  auto members = members_upto(5);
  for (int trial = 0; trial < 20; ++trial) {
    unsigned t = 1 + static_cast<unsigned>(rng.below_u64(5));
    Bigint expect;
    std::vector<Share> acc;
    for (int k = 0; k < 4; ++k) {
      Bigint s = rng.below(kBigField.prime);
      expect = (expect + s) % kBigField.prime;
      auto shares = ss_share(s, t, members, kBigField, rng);
      acc = acc.empty() ? shares : ss_add(acc, shares, kBigField);
    }
    CHECK(ss_recon(acc, t, kBigField) == expect);
  }
}

TEST_CASE("coefficients are actually random") {
  Rng a(25), b(26);
  auto members = members_upto(3);
  auto sa = ss_share(Bigint(9), 2, members, kBigField, a);
  auto sb = ss_share(Bigint(9), 2, members, kBigField, b);
  CHECK(sa[0].value != sb[0].value);
}

TEST_CASE("interpolating a constant sharing returns the constant") {
  Rng rng(27);
  auto shares = ss_share(Bigint(6), 3, members_upto(5), kSmallField, rng);
  // any 3 of the 5 points lie on one degree-2 polynomial with p(0) = 6
  std::vector<Share> pick{shares[4], shares[1], shares[3]};
  CHECK(ss_recon(pick, 3, kSmallField) == Bigint(6));
}

TEST_CASE("error paths carry their codes") {
  Rng rng(28);
  auto members = members_upto(3);
  auto check_code = [](auto fn, Errc code) {
    try {
      fn();
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  check_code([&] { ss_share(Bigint(1), 0, members, kSmallField, rng); },
             Errc::invalid_threshold);
  check_code([&] { ss_share(Bigint(1), 4, members, kSmallField, rng); },
             Errc::invalid_threshold);
  std::vector<uint64_t> dup{1, 2, 2};
  check_code([&] { ss_share(Bigint(1), 2, dup, kSmallField, rng); }, Errc::duplicate_index);
  std::vector<uint64_t> zero{0, 1, 2};
  check_code([&] { ss_share(Bigint(1), 2, zero, kSmallField, rng); }, Errc::zero_index);

  auto shares = ss_share(Bigint(5), 3, members, kSmallField, rng);
  check_code([&] { ss_recon(std::span(shares).subspan(0, 2), 3, kSmallField); },
             Errc::insufficient_shares);
  std::vector<Share> dups{shares[0], shares[0], shares[1]};
  check_code([&] { ss_recon(dups, 3, kSmallField); }, Errc::duplicate_index);

  auto other = ss_share(Bigint(5), 2, members_upto(4), kSmallField, rng);
  check_code([&] { ss_add(shares, other, kSmallField); }, Errc::index_mismatch);
}

}  // TEST_SUITE
