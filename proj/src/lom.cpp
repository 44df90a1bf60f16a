#include "secagg/lom.hpp"

#include <algorithm>
#include <string>

#include "secagg/digest.hpp"
#include "secagg/errors.hpp"

namespace secagg {

namespace {

void check_sum_bits(unsigned sum_bits) {
  if (sum_bits < 1 || sum_bits > 63)
    fail(Errc::config_error, "mask modulus needs 1 <= sum_bits <= 63");
}

}  // namespace

std::vector<uint64_t> mask_stream(const PairwiseSecret& secret, uint64_t tau, size_t d,
                                  unsigned sum_bits) {
  check_sum_bits(sum_bits);
  size_t total_bits = d * sum_bits;
  auto stream = chacha20_keystream(secret.key_bytes, tau, (total_bits + 7) / 8);

  // Slice the keystream into contiguous sum_bits-wide values, LSB-first.
  // The accumulator needs sum_bits + 7 bits, which exceeds 64 for the
  // largest slot sizes.
  std::vector<uint64_t> out;
  out.reserve(d);
  unsigned __int128 acc = 0;
  unsigned held = 0;
  size_t next_byte = 0;
  const uint64_t mask = (uint64_t{1} << sum_bits) - 1;
  for (size_t i = 0; i < d; ++i) {
    while (held < sum_bits) {
      acc |= static_cast<unsigned __int128>(stream[next_byte++]) << held;
      held += 8;
    }
    out.push_back(static_cast<uint64_t>(acc) & mask);
    acc >>= sum_bits;
    held -= sum_bits;
  }
  return out;
}

MaskedVector lom_protect(const LOMParams& pp, const std::map<uint64_t, PairwiseSecret>& secrets,
                         uint64_t me, std::span<const uint64_t> cohort, uint64_t tau,
                         const QuantizedVector& x) {
  check_sum_bits(pp.sum_bits);
  if (std::find(cohort.begin(), cohort.end(), me) == cohort.end())
    fail(Errc::config_error, "node " + std::to_string(me) + " is not in the cohort");
  const uint64_t mask = pp.modulus_mask();
  const size_t d = x.values.size();

  // Sums may be taken in native uint64: 2^M divides 2^64, so wraparound
  // commutes with the final reduction.
  std::vector<uint64_t> acc(d, 0);
  for (uint64_t v : cohort) {
    if (v == me) continue;
    auto it = secrets.find(v);
    if (it == secrets.end())
      fail(Errc::missing_pairwise_secret, "no pairwise secret for node " + std::to_string(v));
    auto stream = mask_stream(it->second, tau, d, pp.sum_bits);
    if (me < v) {
      for (size_t i = 0; i < d; ++i) acc[i] += stream[i];
    } else {
      for (size_t i = 0; i < d; ++i) acc[i] -= stream[i];
    }
  }

  MaskedVector out;
  out.values.reserve(d);
  for (size_t i = 0; i < d; ++i) {
    if (x.values[i] > mask)
      fail(Errc::input_overflow, "element " + std::to_string(i) + " exceeds the mask modulus");
    out.values.push_back((x.values[i] + acc[i]) & mask);
  }
  return out;
}

QuantizedVector lom_aggregate(const LOMParams& pp, std::span<const MaskedVector> masked,
                              size_t expected_count) {
  check_sum_bits(pp.sum_bits);
  if (masked.size() != expected_count || masked.empty())
    fail(Errc::missing_vector, "have " + std::to_string(masked.size()) +
                                   " masked vectors, round needs " + std::to_string(expected_count));
  const size_t d = masked.front().values.size();
  for (const MaskedVector& mv : masked)
    if (mv.values.size() != d) fail(Errc::length_mismatch, "masked vectors differ in length");

  QuantizedVector out;
  out.bit_width = pp.sum_bits;
  out.values.assign(d, 0);
  for (const MaskedVector& mv : masked)
    for (size_t i = 0; i < d; ++i) out.values[i] += mv.values[i];
  const uint64_t mask = pp.modulus_mask();
  for (uint64_t& v : out.values) v &= mask;
  return out;
}

std::map<uint64_t, std::map<uint64_t, PairwiseSecret>> dealer_pairwise_secrets(
    std::span<const uint64_t> nodes, Rng& rng) {
  std::map<uint64_t, std::map<uint64_t, PairwiseSecret>> out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      PairwiseSecret s;
      for (size_t k = 0; k < s.key_bytes.size(); k += 8) {
        uint64_t word = rng.u64();
        for (size_t b = 0; b < 8; ++b) s.key_bytes[k + b] = static_cast<uint8_t>(word >> (8 * b));
      }
      out[nodes[i]][nodes[j]] = s;
      out[nodes[j]][nodes[i]] = s;
    }
  }
  return out;
}

}  // namespace secagg
