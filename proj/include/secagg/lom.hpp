#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "secagg/keyagreement.hpp"
#include "secagg/quantizer.hpp"

namespace secagg {

// Pairwise masking over Z_D, D = 2^M: each pair of cohort members derives a
// shared keystream for the round and adds it with opposite signs, so the
// masks vanish in the cohort-wide sum while every individual vector stays
// uniformly masked.

struct LOMParams {
  unsigned sum_bits = 32;            // M; D = 2^M
  const char* prf_id = "chacha20";   // keystream function G

  uint64_t modulus_mask() const { return (uint64_t{1} << sum_bits) - 1; }
};

struct MaskedVector {
  std::vector<uint64_t> values;  // each < 2^M
};

// d values of sum_bits bits each, cut contiguously from the pair keystream
// for round tau.
std::vector<uint64_t> mask_stream(const PairwiseSecret& secret, uint64_t tau, size_t d,
                                  unsigned sum_bits);

MaskedVector lom_protect(const LOMParams& pp,
                         const std::map<uint64_t, PairwiseSecret>& secrets, uint64_t me,
                         std::span<const uint64_t> cohort, uint64_t tau,
                         const QuantizedVector& x);

QuantizedVector lom_aggregate(const LOMParams& pp, std::span<const MaskedVector> masked,
                              size_t expected_count);

// Test/benchmark shortcut: symmetric pairwise secrets for all node pairs,
// bypassing key agreement.
std::map<uint64_t, std::map<uint64_t, PairwiseSecret>> dealer_pairwise_secrets(
    std::span<const uint64_t> nodes, Rng& rng);

}  // namespace secagg
