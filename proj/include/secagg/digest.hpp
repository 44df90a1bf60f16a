#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace secagg {

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

// ChaCha20 keystream: `len` bytes keyed by `key`, 8-byte big-endian nonce.
std::vector<uint8_t> chacha20_keystream(const std::array<uint8_t, 32>& key, uint64_t nonce,
                                        size_t len);

}  // namespace secagg
