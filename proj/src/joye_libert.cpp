#include "secagg/joye_libert.hpp"

#include <algorithm>
#include <string>

#include "secagg/errors.hpp"

namespace secagg {

namespace {

Bigint eval_mask(const MaskFn& mask, std::span<const uint8_t> tag, const Bigint& n_squared) {
  return mask ? mask(tag, n_squared) : hash_to_unit_group(tag, n_squared);
}

uint64_t plaintext_limit(const JLParams& pp, unsigned sum_bits) {
  uint64_t limit = sum_bits >= 64 ? UINT64_MAX : (uint64_t{1} << sum_bits);
  if (pp.modulus.fits_u64()) limit = std::min(limit, pp.modulus.to_u64());
  return limit;
}

void check_batch(std::span<const JLCiphertext> cts, size_t expected, CipherLayout layout) {
  if (cts.size() != expected || cts.empty())
    fail(Errc::missing_ciphertext, "have " + std::to_string(cts.size()) + " ciphertexts, round needs " +
                                       std::to_string(expected));
  for (const JLCiphertext& ct : cts) {
    if (ct.layout != layout || ct.residues.size() != cts.front().residues.size() ||
        ct.slot_bits != cts.front().slot_bits ||
        ct.slots_per_residue != cts.front().slots_per_residue ||
        ct.element_count != cts.front().element_count)
      fail(Errc::layout_mismatch, "ciphertexts disagree on layout or shape");
  }
}

// Multiply the batch elementwise, strip the masks with the server key and
// recover the integer sums (1 + sum*N = v mod N^2).
std::vector<Bigint> decrypt_sums(const JLParams& pp, const JLServerKey& server_key, uint64_t tau,
                                 std::span<const JLCiphertext> cts, const MaskFn& mask) {
  const Bigint& n2 = pp.modulus_squared;
  size_t width = cts.front().residues.size();
  std::vector<Bigint> sums;
  sums.reserve(width);
  for (size_t i = 0; i < width; ++i) {
    Bigint y(1);
    for (const JLCiphertext& ct : cts) y = (y * ct.residues[i]) % n2;
    auto tag = round_tag(tau, i);
    Bigint v = (mod_exp(eval_mask(mask, tag, n2), server_key.sk, n2) * y) % n2;
    Bigint num = v - Bigint(1);
    if (!num.divisible_by(pp.modulus))
      fail(Errc::decryption_failure,
           "mask residue not divisible by N; key mismatch or missing participant");
    sums.push_back(num.divexact(pp.modulus) % pp.modulus);
  }
  return sums;
}

}  // namespace

JLParams JLParams::from_modulus(const Bigint& n) {
  JLParams pp;
  pp.modulus = n;
  pp.modulus_squared = n * n;
  pp.modulus_bits = static_cast<unsigned>(n.bit_length());
  return pp;
}

Bigint default_mask_fn(std::span<const uint8_t> tag, const Bigint& n_squared) {
  return hash_to_unit_group(tag, n_squared);
}

JLKeySet jl_setup(SecurityProfile profile, unsigned n_users, Rng& rng) {
  if (n_users < 2) fail(Errc::config_error, "jl_setup needs at least 2 users");
  ProfileSpec spec = profile_spec(profile);
  unsigned half = spec.jl_modulus_bits / 2;
  Bigint p = gen_prime(half, rng);
  Bigint q = gen_prime(half, rng);
  while (q == p) q = gen_prime(half, rng);

  JLKeySet out;
  out.params = JLParams::from_modulus(p * q);
  Bigint key_sum;
  out.user_keys.reserve(n_users);
  for (unsigned u = 0; u < n_users; ++u) {
    Bigint sk = rng.below(out.params.modulus_squared);
    key_sum += sk;
    out.user_keys.push_back(JLUserKey{std::move(sk)});
  }
  out.server_key = JLServerKey{-key_sum};
  return out;
}

std::vector<uint8_t> round_tag(uint64_t tau, uint64_t index) {
  std::vector<uint8_t> tag(16);
  for (int i = 0; i < 8; ++i) {
    tag[i] = static_cast<uint8_t>(tau >> (8 * (7 - i)));
    tag[8 + i] = static_cast<uint8_t>(index >> (8 * (7 - i)));
  }
  return tag;
}

JLCiphertext jl_protect(const JLParams& pp, const JLUserKey& key, uint64_t tau,
                        const QuantizedVector& x, unsigned sum_bits, const MaskFn& mask) {
  const Bigint& n2 = pp.modulus_squared;
  const uint64_t limit = plaintext_limit(pp, sum_bits);
  JLCiphertext ct;
  ct.layout = CipherLayout::naive;
  ct.slot_bits = sum_bits;
  ct.element_count = x.values.size();
  ct.residues.reserve(x.values.size());
  for (size_t i = 0; i < x.values.size(); ++i) {
    uint64_t v = x.values[i];
    if (v >= limit)
      fail(Errc::plaintext_overflow, "element " + std::to_string(i) + " exceeds the plaintext bound");
    auto tag = round_tag(tau, i);
    Bigint masked = mod_exp(eval_mask(mask, tag, n2), key.sk, n2);
    Bigint residue = ((Bigint(1) + Bigint(static_cast<unsigned long long>(v)) * pp.modulus) * masked) % n2;
    ct.residues.push_back(std::move(residue));
  }
  return ct;
}

QuantizedVector jl_aggregate(const JLParams& pp, const JLServerKey& server_key, uint64_t tau,
                             std::span<const JLCiphertext> ciphertexts, size_t expected_count,
                             const MaskFn& mask) {
  check_batch(ciphertexts, expected_count, CipherLayout::naive);
  auto sums = decrypt_sums(pp, server_key, tau, ciphertexts, mask);
  QuantizedVector out;
  out.bit_width = ciphertexts.front().slot_bits;
  out.values.reserve(sums.size());
  for (const Bigint& s : sums) {
    if (!s.fits_u64())
      fail(Errc::decryption_failure, "recovered sum exceeds the native integer range");
    out.values.push_back(s.to_u64());
  }
  return out;
}

unsigned slots_per_residue(const JLParams& pp, unsigned sum_bits) {
  if (sum_bits == 0 || pp.modulus_bits < 2) fail(Errc::slot_overflow, "degenerate slot size");
  unsigned slots = (pp.modulus_bits - 1) / sum_bits;  // 1 headroom bit keeps plaintexts < N
  if (slots < 1)
    fail(Errc::slot_overflow, "slot of " + std::to_string(sum_bits) +
                                  " bits does not fit a " + std::to_string(pp.modulus_bits) +
                                  "-bit modulus");
  return slots;
}

std::vector<Bigint> pack(const QuantizedVector& x, const JLParams& pp, unsigned sum_bits) {
  unsigned slots = slots_per_residue(pp, sum_bits);
  const uint64_t limit = sum_bits >= 64 ? UINT64_MAX : (uint64_t{1} << sum_bits);
  std::vector<Bigint> plaintexts;
  plaintexts.reserve((x.values.size() + slots - 1) / slots);
  for (size_t base = 0; base < x.values.size(); base += slots) {
    Bigint packed;
    size_t count = std::min<size_t>(slots, x.values.size() - base);
    for (size_t j = 0; j < count; ++j) {
      uint64_t v = x.values[base + j];
      if (v >= limit)
        fail(Errc::slot_overflow, "element " + std::to_string(base + j) + " exceeds its slot");
      packed += Bigint(static_cast<unsigned long long>(v)) << (j * sum_bits);
    }
    plaintexts.push_back(std::move(packed));
  }
  return plaintexts;
}

QuantizedVector unpack(std::span<const Bigint> plaintexts, uint64_t element_count,
                       unsigned sum_bits, unsigned slots) {
  if (plaintexts.size() != (element_count + slots - 1) / slots &&
      !(element_count == 0 && plaintexts.empty()))
    fail(Errc::length_mismatch, "plaintext count does not match the element count");
  QuantizedVector out;
  out.bit_width = sum_bits;
  out.values.reserve(element_count);
  Bigint slot_mask = Bigint::pow2(sum_bits) - Bigint(1);
  for (size_t k = 0; k < plaintexts.size(); ++k) {
    size_t count = std::min<uint64_t>(slots, element_count - k * slots);
    for (size_t j = 0; j < count; ++j) {
      Bigint slot = (plaintexts[k] >> (j * sum_bits));
      Bigint masked;
      mpz_and(masked.raw(), slot.raw(), slot_mask.raw());
      out.values.push_back(masked.to_u64());
    }
  }
  return out;
}

JLCiphertext jl_protect_packed(const JLParams& pp, const JLUserKey& key, uint64_t tau,
                               const QuantizedVector& x, unsigned sum_bits, const MaskFn& mask) {
  const Bigint& n2 = pp.modulus_squared;
  auto plaintexts = pack(x, pp, sum_bits);
  JLCiphertext ct;
  ct.layout = CipherLayout::packed;
  ct.slot_bits = sum_bits;
  ct.slots_per_residue = slots_per_residue(pp, sum_bits);
  ct.element_count = x.values.size();
  ct.residues.reserve(plaintexts.size());
  for (size_t k = 0; k < plaintexts.size(); ++k) {
    auto tag = round_tag(tau, k);
    Bigint masked = mod_exp(eval_mask(mask, tag, n2), key.sk, n2);
    ct.residues.push_back(((Bigint(1) + plaintexts[k] * pp.modulus) * masked) % n2);
  }
  return ct;
}

QuantizedVector jl_aggregate_packed(const JLParams& pp, const JLServerKey& server_key,
                                    uint64_t tau, std::span<const JLCiphertext> ciphertexts,
                                    size_t expected_count, const MaskFn& mask) {
  check_batch(ciphertexts, expected_count, CipherLayout::packed);
  const JLCiphertext& head = ciphertexts.front();
  auto sums = decrypt_sums(pp, server_key, tau, ciphertexts, mask);
  return unpack(sums, head.element_count, head.slot_bits, head.slots_per_residue);
}

}  // namespace secagg
