#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "secagg/bigint.hpp"
#include "secagg/modmath.hpp"
#include "secagg/quantizer.hpp"

namespace secagg {

// Additively homomorphic aggregation over Z_{N^2}: each node's vector is
// protected elementwise as (1 + x*N) * F(tag)^sk mod N^2, where F maps the
// (round, index) tag into Z*_{N^2}. The per-node mask exponents sum to zero
// against the aggregator key, so the product of all ciphertexts decrypts to
// the elementwise sum.

struct JLParams {
  Bigint modulus;          // N = p*q
  Bigint modulus_squared;  // cached N^2
  unsigned modulus_bits = 0;

  // Wraps an externally chosen modulus without primality structure checks;
  // meant for hand-verifiable toy moduli in tests.
  static JLParams from_modulus(const Bigint& n);
};

struct JLUserKey {
  Bigint sk;  // in [0, N^2)
};

struct JLServerKey {
  Bigint sk;  // -(sum of user keys); negative
};

enum class CipherLayout : uint8_t { naive = 0, packed = 1 };

struct JLCiphertext {
  std::vector<Bigint> residues;  // elements of Z*_{N^2}
  CipherLayout layout = CipherLayout::naive;
  unsigned slot_bits = 0;          // M, the per-element sum budget
  unsigned slots_per_residue = 0;  // packed only
  uint64_t element_count = 0;      // d
};

struct JLKeySet {
  std::vector<JLUserKey> user_keys;
  JLServerKey server_key;
  JLParams params;
};

// Pluggable realization of F. The default is hash_to_unit_group; tests may
// substitute a stub to make ciphertexts hand-checkable.
using MaskFn = std::function<Bigint(std::span<const uint8_t> tag, const Bigint& n_squared)>;

Bigint default_mask_fn(std::span<const uint8_t> tag, const Bigint& n_squared);

// Trusted-dealer key generation: n user keys uniform in [0, N^2) and the
// aggregator key summing them to zero. The distributed alternative lives in
// the protocol module.
JLKeySet jl_setup(SecurityProfile profile, unsigned n_users, Rng& rng);

// Injective 16-byte encoding of (round, element index).
std::vector<uint8_t> round_tag(uint64_t tau, uint64_t index);

JLCiphertext jl_protect(const JLParams& pp, const JLUserKey& key, uint64_t tau,
                        const QuantizedVector& x, unsigned sum_bits,
                        const MaskFn& mask = nullptr);

QuantizedVector jl_aggregate(const JLParams& pp, const JLServerKey& server_key, uint64_t tau,
                             std::span<const JLCiphertext> ciphertexts, size_t expected_count,
                             const MaskFn& mask = nullptr);

// Vector encoding: consecutive sum_bits-wide slots packed little-endian-by-slot
// into plaintexts one bit short of the modulus.
unsigned slots_per_residue(const JLParams& pp, unsigned sum_bits);
std::vector<Bigint> pack(const QuantizedVector& x, const JLParams& pp, unsigned sum_bits);
QuantizedVector unpack(std::span<const Bigint> plaintexts, uint64_t element_count,
                       unsigned sum_bits, unsigned slots);

JLCiphertext jl_protect_packed(const JLParams& pp, const JLUserKey& key, uint64_t tau,
                               const QuantizedVector& x, unsigned sum_bits,
                               const MaskFn& mask = nullptr);

QuantizedVector jl_aggregate_packed(const JLParams& pp, const JLServerKey& server_key,
                                    uint64_t tau, std::span<const JLCiphertext> ciphertexts,
                                    size_t expected_count, const MaskFn& mask = nullptr);

}  // namespace secagg
