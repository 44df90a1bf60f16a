#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secagg/bigint.hpp"

namespace secagg {

struct FieldSpec {
  Bigint prime;  // modulus of F_p
};

// One evaluation point (index, value) of the sharing polynomial.
struct Share {
  uint64_t index = 0;  // nonzero node identifier
  Bigint value;
};

// Split `secret` (0 <= secret < p) into |members| shares with reconstruction
// threshold t: a degree-(t-1) polynomial with uniform coefficients and
// constant term `secret`, evaluated at each member index.
std::vector<Share> ss_share(const Bigint& secret, unsigned threshold,
                            std::span<const uint64_t> members, const FieldSpec& field, Rng& rng);

// Lagrange interpolation at zero over the t lowest-indexed shares.
Bigint ss_recon(std::span<const Share> shares, unsigned threshold, const FieldSpec& field);

// Shareswise sum: reconstructing the result yields the sum of the secrets mod p.
std::vector<Share> ss_add(std::span<const Share> a, std::span<const Share> b,
                          const FieldSpec& field);

}  // namespace secagg
