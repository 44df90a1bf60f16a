#include "secagg/quantizer.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "secagg/errors.hpp"

namespace secagg {

unsigned QuantConfig::sum_bits() const {
  unsigned log_n = static_cast<unsigned>(std::bit_width(uint64_t{cohort_size} - 1));
  return input_bits + weight_bits + log_n;  // ceil(log2 n) headroom
}

void QuantConfig::validate() const {
  if (input_bits < 1) fail(Errc::config_error, "input_bits must be >= 1");
  if (weight_bits < 1) fail(Errc::config_error, "weight_bits must be >= 1");
  if (cohort_size < 2) fail(Errc::config_error, "cohort_size must be >= 2");
  if (!(clip_lo < clip_hi)) fail(Errc::invalid_range, "clip range requires lo < hi");
  if (max_sum_bits > 63) fail(Errc::config_error, "max_sum_bits cannot exceed 63");
  if (sum_bits() > max_sum_bits)
    fail(Errc::config_error, "bit budget L + W + ceil(log2 n) = " + std::to_string(sum_bits()) +
                                 " exceeds max_sum_bits " + std::to_string(max_sum_bits));
}

double clip(double x, double lo, double hi) {
  if (!(lo < hi)) fail(Errc::invalid_range, "clip requires lo < hi");
  return std::min(std::max(x, lo), hi);
}

QuantizedVector quantize(std::span<const double> theta, const QuantConfig& cfg) {
  cfg.validate();
  const double scale = static_cast<double>(uint64_t{1} << cfg.input_bits);
  const double span = cfg.clip_hi - cfg.clip_lo;
  const uint64_t top = (uint64_t{1} << cfg.input_bits) - 1;
  QuantizedVector out;
  out.bit_width = cfg.input_bits;
  out.values.reserve(theta.size());
  for (double x : theta) {
    double c = clip(x, cfg.clip_lo, cfg.clip_hi);
    // llround rounds half away from zero; the argument is >= 0 after clipping
    auto q = static_cast<uint64_t>(std::llround(scale * (c - cfg.clip_lo) / span));
    out.values.push_back(std::min(q, top));
  }
  return out;
}

QuantizedVector apply_weight(const QuantizedVector& q, uint64_t weight, const QuantConfig& cfg) {
  if (weight == 0) fail(Errc::config_error, "weight must be positive");
  if (cfg.weight_bits >= 64 || weight >= (uint64_t{1} << cfg.weight_bits))
    fail(Errc::weight_overflow,
         "weight " + std::to_string(weight) + " needs more than " +
             std::to_string(cfg.weight_bits) + " bits");
  QuantizedVector out;
  out.bit_width = q.bit_width + cfg.weight_bits;
  out.values.reserve(q.values.size());
  for (uint64_t v : q.values) out.values.push_back(v * weight);
  return out;
}

std::vector<double> dequantize_aggregate(const QuantizedVector& agg, uint64_t weight_sum,
                                         const QuantConfig& cfg) {
  if (weight_sum == 0) fail(Errc::zero_weight_sum, "aggregate weight sum is zero");
  // long double keeps the 63-bit integer division exact before rescaling
  const long double step =
      static_cast<long double>(cfg.clip_hi - cfg.clip_lo) /
      static_cast<long double>(uint64_t{1} << cfg.input_bits);
  std::vector<double> out;
  out.reserve(agg.values.size());
  for (uint64_t v : agg.values) {
    long double mean = static_cast<long double>(v) / static_cast<long double>(weight_sum);
    out.push_back(static_cast<double>(mean * step + cfg.clip_lo));
  }
  return out;
}

}  // namespace secagg
