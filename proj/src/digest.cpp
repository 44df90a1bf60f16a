#include "secagg/digest.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace secagg {

namespace {
void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}
}  // namespace

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  ensure_sodium();
  std::array<uint8_t, 32> out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

std::vector<uint8_t> chacha20_keystream(const std::array<uint8_t, 32>& key, uint64_t nonce,
                                        size_t len) {
  ensure_sodium();
  std::array<uint8_t, crypto_stream_chacha20_NONCEBYTES> n{};
  static_assert(crypto_stream_chacha20_NONCEBYTES == 8);
  for (int i = 7; i >= 0; --i) n[7 - i] = static_cast<uint8_t>(nonce >> (8 * i));
  std::vector<uint8_t> out(len);
  if (len > 0) crypto_stream_chacha20(out.data(), len, n.data(), key.data());
  return out;
}

}  // namespace secagg
