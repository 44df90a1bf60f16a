#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace secagg {

// Bit budget for the integer aggregation pipeline. input_bits (L) covers one
// quantized parameter, weight_bits (W) the largest dataset-size weight, and
// sum_bits() = L + W + ceil(log2 cohort_size) is the headroom the aggregate
// needs so that no elementwise sum can overflow.
struct QuantConfig {
  unsigned input_bits = 16;    // L
  unsigned weight_bits = 8;    // W
  unsigned cohort_size = 2;    // n
  double clip_lo = -1.0;       // theta_min
  double clip_hi = 1.0;        // theta_max
  unsigned max_sum_bits = 63;  // cap keeping sums in native integers

  unsigned sum_bits() const;  // M
  void validate() const;
};

struct QuantizedVector {
  std::vector<uint64_t> values;
  unsigned bit_width = 0;  // every value < 2^bit_width
};

double clip(double x, double lo, double hi);

// Uniform quantization of each element into [0, 2^L - 1]; the formula's upper
// edge 2^L is clamped down one step so the stated L-bit budget stays true.
QuantizedVector quantize(std::span<const double> theta, const QuantConfig& cfg);

// Elementwise multiply by the dataset-size weight; widens L bits to L + W.
QuantizedVector apply_weight(const QuantizedVector& q, uint64_t weight, const QuantConfig& cfg);

// Inverse map for an aggregated vector: divide by the weight sum in real
// arithmetic, then rescale to the clip range.
std::vector<double> dequantize_aggregate(const QuantizedVector& agg, uint64_t weight_sum,
                                         const QuantConfig& cfg);

}  // namespace secagg
