#pragma once

#include <array>
#include <cstdint>

#include "secagg/bigint.hpp"
#include "secagg/modmath.hpp"

namespace secagg {

struct KeyPair {
  Bigint public_key;  // g^secret mod p
  Bigint secret;      // uniform in [1, q-1]
};

// Symmetric pairwise key: SHA-256 of the agreed group element, identical on
// both sides of the pair and sized for direct use as a keystream key.
struct PairwiseSecret {
  std::array<uint8_t, 32> key_bytes{};

  friend bool operator==(const PairwiseSecret&, const PairwiseSecret&) = default;
};

DHGroup ka_param(SecurityProfile profile, Rng& rng);

KeyPair ka_gen(const DHGroup& group, Rng& rng);

// (their_public)^my_secret hashed down to 32 bytes. Rejects public values
// outside the order-q subgroup (including 0 and the identity).
PairwiseSecret ka_agree(const DHGroup& group, const Bigint& my_secret, const Bigint& their_public);

}  // namespace secagg
