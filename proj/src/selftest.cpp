#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "secagg/errors.hpp"
#include "secagg/harness.hpp"

namespace secagg {

namespace {

struct Check {
  const char* name;
  std::function<bool(std::string&)> body;
};

bool quantizer_roundtrip(std::string& detail) {
  Rng rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    QuantConfig cfg;
    cfg.input_bits = 4 + static_cast<unsigned>(rng.below_u64(14));
    cfg.weight_bits = 1 + static_cast<unsigned>(rng.below_u64(8));
    cfg.cohort_size = 2 + static_cast<unsigned>(rng.below_u64(10));
    cfg.clip_lo = -2.0 - rng.unit_real();
    cfg.clip_hi = 1.0 + rng.unit_real();
    const double bound = (cfg.clip_hi - cfg.clip_lo) / std::pow(2.0, cfg.input_bits);
    // attained exactly at the top clamp; allow a few ulps of measurement noise
    const double slack = bound * 1e-9 + 1e-13 * std::max(std::abs(cfg.clip_lo), cfg.clip_hi);
    const uint64_t w = 1 + rng.below_u64((uint64_t{1} << cfg.weight_bits) - 1);
    for (int i = 0; i < 2000; ++i) {
      double theta = -4.0 + 8.0 * rng.unit_real();
      std::vector<double> v{theta};
      auto back = dequantize_aggregate(apply_weight(quantize(v, cfg), w, cfg), w, cfg);
      double err = std::abs(back[0] - clip(theta, cfg.clip_lo, cfg.clip_hi));
      if (err > bound + slack) {
        detail = "error " + std::to_string(err) + " above bound " + std::to_string(bound);
        return false;
      }
    }
  }
  return true;
}

bool shamir_sweep(std::string& detail) {
  Rng rng(202);
  FieldSpec field{Bigint("2305843009213693951")};  // 2^61 - 1
  for (unsigned n = 1; n <= 5; ++n) {
    std::vector<uint64_t> members;
    for (uint64_t u = 1; u <= n; ++u) members.push_back(u);
    for (unsigned t = 1; t <= n; ++t) {
      Bigint s1 = rng.below(field.prime);
      Bigint s2 = rng.below(field.prime);
      auto sh1 = ss_share(s1, t, members, field, rng);
      auto sh2 = ss_share(s2, t, members, field, rng);
      if (ss_recon(sh1, t, field) != s1) {
        detail = "reconstruction mismatch";
        return false;
      }
      if (ss_recon(ss_add(sh1, sh2, field), t, field) != (s1 + s2) % field.prime) {
        detail = "additive homomorphism broken";
        return false;
      }
    }
  }
  return true;
}

bool jl_toy_example(std::string& detail) {
  JLParams pp = JLParams::from_modulus(Bigint(35));
  MaskFn stub = [](std::span<const uint8_t>, const Bigint&) { return Bigint(2); };
  QuantizedVector x{{3}, 5};
  JLCiphertext ct = jl_protect(pp, JLUserKey{Bigint(2)}, 0, x, 5, stub);
  if (ct.residues[0] != Bigint(424)) {
    detail = "protect residue " + ct.residues[0].to_string();
    return false;
  }
  auto agg = jl_aggregate(pp, JLServerKey{Bigint(-2)}, 0, std::vector<JLCiphertext>{ct}, 1, stub);
  if (agg.values[0] != 3) {
    detail = "aggregate " + std::to_string(agg.values[0]);
    return false;
  }
  return true;
}

bool jl_small_e2e(std::string& detail) {
  Rng rng(303);
  JLKeySet keys = jl_setup(SecurityProfile::test, 3, rng);
  const unsigned m = 24;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<JLCiphertext> cts;
    std::vector<uint64_t> sums(8, 0);
    for (unsigned u = 0; u < 3; ++u) {
      QuantizedVector x;
      x.bit_width = 22;
      for (int i = 0; i < 8; ++i) {
        x.values.push_back(rng.below_u64(uint64_t{1} << 22));
        sums[i] += x.values.back();
      }
      cts.push_back(jl_protect_packed(keys.params, keys.user_keys[u], trial, x, m));
    }
    auto agg = jl_aggregate_packed(keys.params, keys.server_key, trial, cts, 3);
    if (agg.values != sums) {
      detail = "aggregate differs from the plaintext sums";
      return false;
    }
  }
  return true;
}

bool jl_packed_naive_equivalence(std::string& detail) {
  Rng rng(404);
  JLKeySet keys = jl_setup(SecurityProfile::test, 2, rng);
  const unsigned m = 16;
  std::vector<JLCiphertext> naive, packed;
  for (unsigned u = 0; u < 2; ++u) {
    QuantizedVector x;
    x.bit_width = 15;
    for (int i = 0; i < 40; ++i) x.values.push_back(rng.below_u64(uint64_t{1} << 15));
    naive.push_back(jl_protect(keys.params, keys.user_keys[u], 7, x, m));
    packed.push_back(jl_protect_packed(keys.params, keys.user_keys[u], 7, x, m));
  }
  auto a = jl_aggregate(keys.params, keys.server_key, 7, naive, 2);
  auto b = jl_aggregate_packed(keys.params, keys.server_key, 7, packed, 2);
  if (a.values != b.values) {
    detail = "naive and packed aggregates differ";
    return false;
  }
  return true;
}

bool lom_cancellation(std::string& detail) {
  Rng rng(505);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 2 + rng.below_u64(6);
    std::vector<uint64_t> ids;
    uint64_t next = 1 + rng.below_u64(3);
    for (size_t u = 0; u < n; ++u) {
      ids.push_back(next);
      next += 1 + rng.below_u64(4);
    }
    auto secrets = dealer_pairwise_secrets(ids, rng);
    LOMParams pp{12};
    uint64_t tau = rng.below_u64(1000);
    QuantizedVector zeros{std::vector<uint64_t>(4, 0), 12};
    std::vector<MaskedVector> masked;
    for (uint64_t u : ids) masked.push_back(lom_protect(pp, secrets.at(u), u, ids, tau, zeros));
    auto agg = lom_aggregate(pp, masked, ids.size());
    for (uint64_t v : agg.values)
      if (v != 0) {
        detail = "masks did not cancel on the zero vector";
        return false;
      }
  }
  return true;
}

bool scheme_equivalence(std::string& detail) {
  Rng rng(606);
  const unsigned m = 20;
  std::vector<uint64_t> ids{1, 2, 3};
  JLKeySet keys = jl_setup(SecurityProfile::test, 3, rng);
  auto secrets = dealer_pairwise_secrets(ids, rng);
  std::vector<JLCiphertext> cts;
  std::vector<MaskedVector> masked;
  for (unsigned u = 0; u < 3; ++u) {
    QuantizedVector x;
    x.bit_width = 18;
    for (int i = 0; i < 16; ++i) x.values.push_back(rng.below_u64(uint64_t{1} << 18));
    cts.push_back(jl_protect_packed(keys.params, keys.user_keys[u], 1, x, m));
    masked.push_back(lom_protect(LOMParams{m}, secrets.at(ids[u]), ids[u], ids, 1, x));
  }
  auto a = jl_aggregate_packed(keys.params, keys.server_key, 1, cts, 3);
  auto b = lom_aggregate(LOMParams{m}, masked, 3);
  if (a.values != b.values) {
    detail = "JL and LOM disagree on the integer aggregate";
    return false;
  }
  return true;
}

bool experiment_determinism(std::string& detail) {
  ExperimentConfig cfg;
  cfg.scheme = "LOM";
  cfg.n_tot = 4;
  cfg.n = 3;
  cfg.T = 3;
  cfg.d = 6;
  cfg.L = 16;
  cfg.seed = 99;
  cfg.task.samples_per_node = 40;
  auto r1 = run_experiment(cfg);
  auto r2 = run_experiment(cfg);
  if (r1.transcript_hash != r2.transcript_hash || r1.final_model != r2.final_model) {
    detail = "same seed produced different runs";
    return false;
  }
  for (size_t i = 0; i < r1.rounds.size(); ++i)
    if (r1.rounds[i].aggregate_checksum != r2.rounds[i].aggregate_checksum) {
      detail = "round checksums differ across replays";
      return false;
    }
  return true;
}

bool transcript_hygiene(std::string& detail) {
  ExperimentConfig cfg;
  cfg.scheme = "LOM";
  cfg.n_tot = 4;
  cfg.n = 4;
  cfg.T = 2;
  cfg.d = 24;
  cfg.seed = 7;
  cfg.task.samples_per_node = 30;
  auto result = run_experiment(cfg);
  for (const auto& per_round : result.round_inputs) {
    for (const auto& x : per_round) {
      std::vector<uint8_t> needle;
      for (uint64_t v : x.values)
        for (int i = 7; i >= 0; --i) needle.push_back(static_cast<uint8_t>(v >> (8 * i)));
      for (const auto& frame : result.transcript_frames) {
        if (std::search(frame.begin(), frame.end(), needle.begin(), needle.end()) != frame.end()) {
          detail = "plaintext update bytes appear in the transcript";
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

std::vector<SelftestResult> selftest() {
  const Check checks[] = {
      {"quantizer roundtrip bound", quantizer_roundtrip},
      {"shamir reconstruction + additive sweep", shamir_sweep},
      {"jl toy hand example", jl_toy_example},
      {"jl end-to-end vs plaintext sums", jl_small_e2e},
      {"jl packed/naive equivalence", jl_packed_naive_equivalence},
      {"lom mask cancellation", lom_cancellation},
      {"jl/lom scheme equivalence", scheme_equivalence},
      {"experiment determinism", experiment_determinism},
      {"transcript hygiene", transcript_hygiene},
  };
  std::vector<SelftestResult> results;
  for (const Check& c : checks) {
    SelftestResult r;
    r.name = c.name;
    try {
      std::string detail;
      r.pass = c.body(detail);
      r.detail = detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace secagg
