#include <cmath>

#include "doctest.h"
#include "secagg/bigint.hpp"
#include "secagg/errors.hpp"
#include "secagg/quantizer.hpp"

using namespace secagg;

namespace {

QuantConfig make_cfg(unsigned L, unsigned W, unsigned n, double lo, double hi) {
  QuantConfig cfg;
  cfg.input_bits = L;
  cfg.weight_bits = W;
  cfg.cohort_size = n;
  cfg.clip_lo = lo;
  cfg.clip_hi = hi;
  return cfg;
}

}  // namespace

TEST_SUITE("quantizer") {

TEST_CASE("clip saturates at both ends") {
  CHECK(clip(5.0, -2.0, 2.0) == 2.0);
  CHECK(clip(0.0, -1.0, 1.0) == 0.0);
  CHECK(clip(-3.7, -2.0, 2.0) == -2.0);
  CHECK_THROWS_AS(clip(0.0, 2.0, 2.0), Error);
}

TEST_CASE("quantize maps the unit range onto L bits") {
  QuantConfig cfg = make_cfg(3, 2, 2, 0.0, 1.0);
  std::vector<double> theta{0.5, 0.0, 1.0};
  auto q = quantize(theta, cfg);
  CHECK(q.values[0] == 4);  // round(8 * 0.5)
  CHECK(q.values[1] == 0);  // lower bound
  CHECK(q.values[2] == 7);  // formula gives 8, clamped to 2^3 - 1
  CHECK(q.bit_width == 3);
}

TEST_CASE("quantize is monotone") {
  QuantConfig cfg = make_cfg(10, 2, 2, -1.5, 2.5);
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    double a = -3.0 + 6.0 * rng.unit_real();
    double b = -3.0 + 6.0 * rng.unit_real();
    if (a > b) std::swap(a, b);
    std::vector<double> v{a, b};
    auto q = quantize(v, cfg);
    CHECK(q.values[0] <= q.values[1]);
  }
}

TEST_CASE("apply_weight widens the bit budget") {
  QuantConfig cfg = make_cfg(3, 2, 2, 0.0, 1.0);
  QuantizedVector q{{4}, 3};
  auto w = apply_weight(q, 3, cfg);
  CHECK(w.values[0] == 12);
  CHECK(w.bit_width == 5);

  auto same = apply_weight(q, 1, cfg);
  CHECK(same.values == q.values);

  CHECK_THROWS_AS(apply_weight(q, 4, cfg), Error);  // 2^W is out of range
  try {
    apply_weight(q, 4, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weight_overflow);
  }
}

TEST_CASE("dequantize_aggregate inverts the pipeline") {
  QuantConfig cfg = make_cfg(3, 2, 2, 0.0, 1.0);
  auto theta = dequantize_aggregate(QuantizedVector{{12}, 5}, 3, cfg);
  CHECK(theta[0] == doctest::Approx(0.5).epsilon(1e-12));
  auto lo = dequantize_aggregate(QuantizedVector{{0}, 5}, 7, cfg);
  CHECK(lo[0] == cfg.clip_lo);
  CHECK_THROWS_AS(dequantize_aggregate(QuantizedVector{{1}, 5}, 0, cfg), Error);
}

TEST_CASE("roundtrip error stays within one quantization step") {
  Rng rng(12);
  for (int c = 0; c < 10; ++c) {
    unsigned L = 2 + static_cast<unsigned>(rng.below_u64(16));
    QuantConfig cfg = make_cfg(L, 6, 4, -2.0 - rng.unit_real(), 1.0 + 2.0 * rng.unit_real());
    const double bound = (cfg.clip_hi - cfg.clip_lo) / std::pow(2.0, L);
    // attained exactly at the top clamp; allow a few ulps of measurement noise
    const double slack = bound * 1e-9 + 1e-13 * std::max(std::abs(cfg.clip_lo), cfg.clip_hi);
    uint64_t w = 1 + rng.below_u64(63);
    for (int i = 0; i < 1000; ++i) {
      double theta = -5.0 + 10.0 * rng.unit_real();
      std::vector<double> v{theta};
      auto back = dequantize_aggregate(apply_weight(quantize(v, cfg), w, cfg), w, cfg);
      CHECK(std::abs(back[0] - clip(theta, cfg.clip_lo, cfg.clip_hi)) <= bound + slack);
    }
  }
}

TEST_CASE("elementwise sums never exceed the sum_bits budget") {
  // exhaustive at small sizes: extreme inputs, maximal weights
  for (unsigned L : {1u, 2u, 3u}) {
    for (unsigned W : {1u, 2u}) {
      for (unsigned n : {2u, 3u, 5u}) {
        QuantConfig cfg = make_cfg(L, W, n, -1.0, 1.0);
        uint64_t max_q = (uint64_t{1} << L) - 1;
        uint64_t max_w = (uint64_t{1} << W) - 1;
        uint64_t worst = n * max_q * max_w;
        CHECK(worst < (uint64_t{1} << cfg.sum_bits()));
      }
    }
  }
}

TEST_CASE("aggregate equals the weighted FedAvg of quantized inputs exactly") {
  QuantConfig cfg = make_cfg(8, 4, 3, -1.0, 1.0);
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<uint64_t> weights{1 + rng.below_u64(15), 1 + rng.below_u64(15),
                                  1 + rng.below_u64(15)};
    std::vector<std::vector<double>> thetas(3, std::vector<double>(4));
    for (auto& t : thetas)
      for (auto& x : t) x = -1.0 + 2.0 * rng.unit_real();

    QuantizedVector agg{std::vector<uint64_t>(4, 0), cfg.sum_bits()};
    uint64_t weight_sum = 0;
    std::vector<std::vector<uint64_t>> qs;
    for (int u = 0; u < 3; ++u) {
      auto xq = apply_weight(quantize(thetas[u], cfg), weights[u], cfg);
      for (int i = 0; i < 4; ++i) agg.values[i] += xq.values[i];
      weight_sum += weights[u];
      qs.push_back(quantize(thetas[u], cfg).values);
    }
    auto result = dequantize_aggregate(agg, weight_sum, cfg);

    // reference: weighted mean of the quantized grid points, no secure path
    for (int i = 0; i < 4; ++i) {
      long double mean = 0.0;
      for (int u = 0; u < 3; ++u)
        mean += static_cast<long double>(qs[u][i]) * static_cast<long double>(weights[u]);
      mean /= static_cast<long double>(weight_sum);
      double expect = static_cast<double>(
          mean * (cfg.clip_hi - cfg.clip_lo) / std::pow(2.0L, cfg.input_bits) + cfg.clip_lo);
      CHECK(result[i] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("config validation pins the invariants") {
  CHECK_THROWS_AS(make_cfg(0, 2, 2, 0.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(make_cfg(3, 0, 2, 0.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(make_cfg(3, 2, 1, 0.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(make_cfg(3, 2, 2, 1.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(make_cfg(40, 20, 300, 0.0, 1.0).validate(), Error);  // budget > 63
  CHECK(make_cfg(22, 8, 4, -3.0, 3.0).sum_bits() == 32);
}

}  // TEST_SUITE
