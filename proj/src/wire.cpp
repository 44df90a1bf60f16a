#include "secagg/wire.hpp"

#include <bit>
#include <cstring>

namespace secagg {

void ByteWriter::f64(double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  u64(bits);
}

uint8_t ByteReader::u8() {
  if (pos_ + 1 > data_.size()) fail(Errc::bad_message, "truncated u8");
  return data_[pos_++];
}

uint16_t ByteReader::u16() {
  uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v = static_cast<uint16_t>((v << 8) | u8());
  return v;
}

uint32_t ByteReader::u32() {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
  return v;
}

uint64_t ByteReader::u64() {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
  return v;
}

std::span<const uint8_t> ByteReader::bytes(size_t n) {
  if (pos_ + n > data_.size()) fail(Errc::bad_message, "truncated byte string");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

Bigint ByteReader::bigint() {
  uint32_t len = u32();
  return Bigint::from_bytes_be(bytes(len));
}

double ByteReader::f64() {
  uint64_t bits = u64();
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace secagg
