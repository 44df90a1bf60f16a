#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secagg/bigint.hpp"
#include "secagg/errors.hpp"

namespace secagg {

// Length-prefixed binary primitives shared by every message payload.
// Integers are big-endian; big integers are big-endian byte strings with a
// 4-byte length prefix.

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) {
    for (int i = 1; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u32(uint32_t v) {
    for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void bytes(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void bigint(const Bigint& v) {
    auto b = v.to_bytes_be();
    u32(static_cast<uint32_t>(b.size()));
    bytes(b);
  }
  void f64(double v);

  std::vector<uint8_t> take() { return std::move(buf_); }
  const std::vector<uint8_t>& data() const { return buf_; }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t u8();
  uint16_t u16();
  uint32_t u32();
  uint64_t u64();
  std::span<const uint8_t> bytes(size_t n);
  Bigint bigint();
  double f64();

  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) fail(Errc::bad_message, "trailing bytes in payload");
  }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace secagg
