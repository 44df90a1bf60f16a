#include "secagg/bigint.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "secagg/digest.hpp"
#include "secagg/errors.hpp"

namespace secagg {

Bigint::Bigint(long long v) {
  mpz_init(z_);
  bool neg = v < 0;
  unsigned long long mag = neg ? -static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
  mpz_import(z_, 1, 1, sizeof(mag), 0, 0, &mag);
  if (neg) mpz_neg(z_, z_);
}

Bigint::Bigint(unsigned long long v) {
  mpz_init(z_);
  mpz_import(z_, 1, 1, sizeof(v), 0, 0, &v);
}

Bigint::Bigint(std::string_view digits, int base) {
  if (mpz_init_set_str(z_, std::string(digits).c_str(), base) != 0) {
    mpz_clear(z_);
    throw std::invalid_argument("Bigint: malformed digit string");
  }
}

Bigint Bigint::from_bytes_be(std::span<const uint8_t> bytes) {
  Bigint r;
  if (!bytes.empty()) mpz_import(r.z_, bytes.size(), 1, 1, 0, 0, bytes.data());
  return r;
}

std::vector<uint8_t> Bigint::to_bytes_be() const {
  if (is_zero()) return {};
  size_t count = 0;
  std::vector<uint8_t> out((mpz_sizeinbase(z_, 2) + 7) / 8);
  mpz_export(out.data(), &count, 1, 1, 0, 0, z_);
  out.resize(count);
  return out;
}

std::string Bigint::to_string(int base) const {
  char* s = mpz_get_str(nullptr, base, z_);
  std::string out(s);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

bool Bigint::fits_u64() const { return sign() >= 0 && bit_length() <= 64; }

uint64_t Bigint::to_u64() const {
  if (!fits_u64()) throw std::overflow_error("Bigint: value does not fit uint64");
  uint64_t v = 0;
  auto bytes = to_bytes_be();
  for (uint8_t b : bytes) v = (v << 8) | b;
  return v;
}

Rng::Rng(uint64_t seed) {
  gmp_randinit_mt(state_);
  Bigint s{static_cast<unsigned long long>(seed)};
  gmp_randseed(state_, s.raw());
}

Rng::~Rng() { gmp_randclear(state_); }

Bigint Rng::bits(unsigned long n) {
  Bigint r;
  mpz_urandomb(r.raw(), state_, n);
  return r;
}

Bigint Rng::below(const Bigint& bound) {
  if (bound.sign() <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
  Bigint r;
  mpz_urandomm(r.raw(), state_, bound.raw());
  return r;
}

uint64_t Rng::u64() {
  Bigint r;
  mpz_urandomb(r.raw(), state_, 64);
  static_assert(sizeof(unsigned long) == 8);
  return mpz_get_ui(r.raw());
}

uint64_t Rng::below_u64(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below_u64: bound must be positive");
  // rejection sampling keeps the draw exactly uniform
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = u64();
    if (v < limit) return v % bound;
  }
}

double Rng::unit_real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double stddev) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + stddev * spare_;
  }
  // Box-Muller on two uniform draws
  double u1 = unit_real();
  while (u1 == 0.0) u1 = unit_real();
  double u2 = unit_real();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  have_spare_ = true;
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t Rng::derive(uint64_t seed, std::string_view label, uint64_t index) {
  std::vector<uint8_t> buf;
  buf.reserve(16 + label.size());
  for (int i = 7; i >= 0; --i) buf.push_back(static_cast<uint8_t>(seed >> (8 * i)));
  buf.insert(buf.end(), label.begin(), label.end());
  for (int i = 7; i >= 0; --i) buf.push_back(static_cast<uint8_t>(index >> (8 * i)));
  auto d = sha256(buf);
  uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | d[i];
  return out;
}

}  // namespace secagg
