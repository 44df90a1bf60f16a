#include "secagg/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "secagg/errors.hpp"
#include "secagg/joye_libert.hpp"
#include "secagg/lom.hpp"

namespace secagg {

namespace {

using Clock = std::chrono::steady_clock;

struct Sampled {
  double median_s;
  double p90_s;
};

Sampled time_op(int samples, const std::function<void()>& op) {
  op();  // warmup
  std::vector<double> times;
  times.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    auto t0 = Clock::now();
    op();
    times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  double median = times[times.size() / 2];
  size_t p90_idx = std::min(times.size() - 1,
                            static_cast<size_t>(std::ceil(0.9 * times.size())) - 1);
  return Sampled{median, times[p90_idx]};
}

QuantizedVector random_vector(uint64_t d, unsigned value_bits, Rng& rng) {
  QuantizedVector x;
  x.bit_width = value_bits;
  x.values.reserve(d);
  for (uint64_t i = 0; i < d; ++i) x.values.push_back(rng.bits(value_bits).to_u64());
  return x;
}

}  // namespace

std::string BenchResult::to_csv() const {
  std::ostringstream os;
  os.precision(9);
  os << csv_header() << '\n';
  for (const BenchRow& r : rows)
    os << r.scheme << ',' << r.d << ',' << r.n << ',' << r.profile << ',' << r.op << ','
       << std::fixed << r.median_s << ',' << r.p90_s << '\n';
  return os.str();
}

double BenchResult::median_of(const std::string& scheme, const std::string& op, uint64_t d,
                              unsigned n) const {
  for (const BenchRow& r : rows)
    if (r.scheme == scheme && r.op == op && r.d == d && r.n == n) return r.median_s;
  return -1.0;
}

BenchResult run_benchmark(const BenchConfig& cfg) {
  if (cfg.samples < 1) fail(Errc::config_error, "benchmark needs at least one sample");
  BenchResult result;
  Rng rng(cfg.seed);
  const unsigned m = cfg.sum_bits;

  for (unsigned n : cfg.cohorts) {
    if (n < 2) fail(Errc::config_error, "benchmark cohorts need n >= 2");
    unsigned headroom = static_cast<unsigned>(std::ceil(std::log2(double(n))));
    unsigned value_bits = m > headroom ? m - headroom : 1;

    for (Scheme scheme : cfg.schemes) {
      if (scheme == Scheme::jl) {
        JLKeySet keys = jl_setup(cfg.profile, n, rng);
        for (uint64_t d : cfg.dims) {
          QuantizedVector x = random_vector(d, value_bits, rng);
          auto protect = [&] {
            if (cfg.packed_jl)
              jl_protect_packed(keys.params, keys.user_keys[0], 0, x, m);
            else
              jl_protect(keys.params, keys.user_keys[0], 0, x, m);
          };
          Sampled p = time_op(cfg.samples, protect);
          result.rows.push_back(BenchRow{"jl", d, n, profile_name(cfg.profile), "protect",
                                         p.median_s, p.p90_s});

          std::vector<JLCiphertext> cts;
          for (unsigned u = 0; u < n; ++u) {
            QuantizedVector xu = random_vector(d, value_bits, rng);
            cts.push_back(cfg.packed_jl
                              ? jl_protect_packed(keys.params, keys.user_keys[u], 1, xu, m)
                              : jl_protect(keys.params, keys.user_keys[u], 1, xu, m));
          }
          auto aggregate = [&] {
            if (cfg.packed_jl)
              jl_aggregate_packed(keys.params, keys.server_key, 1, cts, n);
            else
              jl_aggregate(keys.params, keys.server_key, 1, cts, n);
          };
          Sampled a = time_op(cfg.samples, aggregate);
          result.rows.push_back(BenchRow{"jl", d, n, profile_name(cfg.profile), "aggregate",
                                         a.median_s, a.p90_s});
        }
      } else if (scheme == Scheme::lom) {
        std::vector<uint64_t> ids;
        for (uint64_t u = 1; u <= n; ++u) ids.push_back(u);
        auto secrets = dealer_pairwise_secrets(ids, rng);
        LOMParams pp{m};
        for (uint64_t d : cfg.dims) {
          QuantizedVector x = random_vector(d, value_bits, rng);
          auto protect = [&] { lom_protect(pp, secrets.at(ids[0]), ids[0], ids, 0, x); };
          Sampled p = time_op(cfg.samples, protect);
          result.rows.push_back(BenchRow{"lom", d, n, profile_name(cfg.profile), "protect",
                                         p.median_s, p.p90_s});

          std::vector<MaskedVector> masked;
          for (uint64_t u : ids) {
            QuantizedVector xu = random_vector(d, value_bits, rng);
            masked.push_back(lom_protect(pp, secrets.at(u), u, ids, 1, xu));
          }
          auto aggregate = [&] { lom_aggregate(pp, masked, n); };
          Sampled a = time_op(cfg.samples, aggregate);
          result.rows.push_back(BenchRow{"lom", d, n, profile_name(cfg.profile), "aggregate",
                                         a.median_s, a.p90_s});
        }
      } else {
        fail(Errc::config_error, "benchmark covers JL and LOM only");
      }
    }
  }
  return result;
}

double loglog_slope(std::span<const uint64_t> dims, std::span<const double> times) {
  if (dims.size() != times.size() || dims.size() < 2)
    fail(Errc::config_error, "slope needs matching samples for at least two dimensions");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) {
    double x = std::log10(static_cast<double>(dims[i]));
    double y = std::log10(times[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace secagg
