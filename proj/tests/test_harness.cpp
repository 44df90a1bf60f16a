#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "secagg/benchmark.hpp"
#include "secagg/errors.hpp"
#include "secagg/harness.hpp"

using namespace secagg;

namespace {

ExperimentConfig small_cfg(const char* scheme) {
  ExperimentConfig cfg;
  cfg.scheme = scheme;
  cfg.n_tot = 4;
  cfg.n = 4;
  cfg.T = 5;
  cfg.e = 3;
  cfg.b = 8;
  cfg.eta = 0.05;
  cfg.L = 18;
  cfg.W = 8;
  cfg.theta_min = -3.0;
  cfg.theta_max = 3.0;
  cfg.seed = 2024;
  cfg.d = 6;
  cfg.task.samples_per_node = 50;
  cfg.task.size_spread = 0.2;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config json roundtrip keeps every field") {
  ExperimentConfig cfg = small_cfg("JL");
  cfg.t = 3;
  cfg.task.heterogeneity = 0.5;
  auto back = ExperimentConfig::from_json_text(cfg.to_json_text());
  CHECK(back.scheme == "JL");
  CHECK(back.n_tot == 4);
  CHECK(back.T == 5);
  CHECK(back.eta == 0.05);
  CHECK(back.L == 18);
  CHECK(back.theta_max == 3.0);
  CHECK(back.t == 3);
  CHECK(back.task.heterogeneity == 0.5);
  CHECK(back.task.size_spread == 0.2);
}

TEST_CASE("config validation rejects the spec'd bad shapes") {
  auto expect_config_error = [](ExperimentConfig cfg) {
    try {
      cfg.validate();
      FAIL("expected config error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::config_error);
    }
  };
  ExperimentConfig jl_subset = small_cfg("JL");
  jl_subset.n = 3;  // JL cannot run client selection
  expect_config_error(jl_subset);

  ExperimentConfig bad_n = small_cfg("LOM");
  bad_n.n = 9;
  expect_config_error(bad_n);

  ExperimentConfig heavy_weights = small_cfg("LOM");
  heavy_weights.W = 5;  // 50-sample shards need 6 bits
  expect_config_error(heavy_weights);

  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{not json"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"n_tot": "four"})"), Error);
}

TEST_CASE("threshold defaults to a two-thirds majority") {
  ExperimentConfig cfg = small_cfg("JL");
  CHECK(cfg.threshold() == 3);  // ceil(8/3)
  cfg.n_tot = 6;
  CHECK(cfg.threshold() == 4);
  cfg.t = 2;
  CHECK(cfg.threshold() == 2);
}

TEST_CASE("zero rounds still runs setup and returns no reports") {
  ExperimentConfig cfg = small_cfg("LOM");
  cfg.T = 0;
  auto result = run_experiment(cfg);
  CHECK(result.rounds.empty());
  CHECK(result.final_model == std::vector<double>(cfg.d, 0.0));
  // setup traffic happened
  CHECK(!result.transcript.empty());
}

TEST_CASE("reports keep the timing identity and the round count") {
  ExperimentConfig cfg = small_cfg("LOM");
  auto result = run_experiment(cfg);
  CHECK(result.rounds.size() == cfg.T);
  for (const auto& r : result.rounds) {
    CHECK(r.total_s >= r.train_s + r.protect_s);
    CHECK(r.metric >= 0.0);
  }
  // the metric should improve over training on this easy task
  CHECK(result.rounds.back().metric < result.rounds.front().metric);
}

TEST_CASE("secure rounds stay inside the propagated quantization bound") {
  for (const char* scheme : {"JL", "LOM"}) {
    ExperimentConfig cfg = small_cfg(scheme);
    auto result = run_experiment(cfg);
    const double bound = (cfg.theta_max - cfg.theta_min) / std::pow(2.0, cfg.L);
    for (const auto& r : result.rounds) CHECK(r.max_param_dev <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("same seed, same run; different seed, different run") {
  ExperimentConfig cfg = small_cfg("LOM");
  auto a = run_experiment(cfg);
  auto b = run_experiment(cfg);
  CHECK(a.transcript_hash == b.transcript_hash);
  CHECK(a.final_model == b.final_model);
  cfg.seed = 2025;
  auto c = run_experiment(cfg);
  CHECK(a.transcript_hash != c.transcript_hash);
}

TEST_CASE("jl and lom experiments agree bit-exactly under one seed") {
  ExperimentConfig jl = small_cfg("JL");
  ExperimentConfig lom = small_cfg("LOM");
  auto a = run_experiment(jl);
  auto b = run_experiment(lom);
  CHECK(a.final_model == b.final_model);
  CHECK(a.final_metric == b.final_metric);
}

TEST_CASE("online phase structure: one node-to-server round of protected updates") {
  ExperimentConfig cfg = small_cfg("JL");
  cfg.T = 3;
  auto result = run_experiment(cfg);
  for (uint64_t tau = 0; tau < cfg.T; ++tau) {
    size_t to_server = 0, updates = 0;
    for (const auto& m : result.transcript) {
      if (m.round != tau) continue;
      if (m.recipient == kServerId) {
        ++to_server;
        CHECK(m.kind == MsgKind::protected_update);
        ++updates;
      } else {
        CHECK(m.kind == MsgKind::global_model);
        CHECK(m.sender == kServerId);
      }
    }
    CHECK(to_server == cfg.n);
    CHECK(updates == cfg.n);
  }
}

TEST_CASE("no transcript frame contains a node's plaintext vector encoding") {
  for (const char* scheme : {"JL", "LOM"}) {
    ExperimentConfig cfg = small_cfg(scheme);
    cfg.T = 2;
    cfg.d = 24;
    auto result = run_experiment(cfg);
    REQUIRE(!result.round_inputs.empty());
    for (const auto& per_round : result.round_inputs) {
      for (const auto& x : per_round) {
        std::vector<uint8_t> be, le;
        for (uint64_t v : x.values)
          for (int i = 0; i < 8; ++i) {
            be.push_back(static_cast<uint8_t>(v >> (8 * (7 - i))));
            le.push_back(static_cast<uint8_t>(v >> (8 * i)));
          }
        for (const auto& frame : result.transcript_frames) {
          CHECK(std::search(frame.begin(), frame.end(), be.begin(), be.end()) == frame.end());
          CHECK(std::search(frame.begin(), frame.end(), le.begin(), le.end()) == frame.end());
        }
      }
    }
  }
}

TEST_CASE("plain baseline tracks the secure run closely") {
  ExperimentConfig secure = small_cfg("LOM");
  secure.T = 12;
  ExperimentConfig plain = secure;
  plain.scheme = "PLAIN";
  auto s = run_experiment(secure);
  auto p = run_experiment(plain);
  REQUIRE(p.final_metric > 0.0);
  CHECK(std::abs(s.final_metric - p.final_metric) / p.final_metric < 0.02);
}

TEST_CASE("synthetic task regenerates bit-identically from its seed") {
  TaskSpec spec;
  spec.samples_per_node = 30;
  spec.heterogeneity = 0.4;
  spec.size_spread = 0.3;
  auto a = SyntheticTask::generate(3, 5, spec, 4242);
  auto b = SyntheticTask::generate(3, 5, spec, 4242);
  CHECK(a.true_model == b.true_model);
  CHECK(a.test.features == b.test.features);
  for (size_t u = 0; u < 3; ++u) {
    CHECK(a.shards[u].rows == b.shards[u].rows);
    CHECK(a.shards[u].features == b.shards[u].features);
    CHECK(a.shards[u].targets == b.shards[u].targets);
  }
  auto c = SyntheticTask::generate(3, 5, spec, 4243);
  CHECK(a.true_model != c.true_model);
}

TEST_CASE("selftest suite is green") {
  for (const auto& r : selftest()) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("benchmark rows cover the grid with sane medians") {
  BenchConfig cfg;
  cfg.dims = {8, 32};
  cfg.cohorts = {2};
  cfg.samples = 3;
  auto result = run_benchmark(cfg);
  // 2 schemes x 2 dims x 2 ops
  CHECK(result.rows.size() == 8);
  for (const auto& r : result.rows) {
    CHECK(r.median_s > 0.0);
    CHECK(r.p90_s >= r.median_s);
    CHECK(r.profile == "test");
  }
  CHECK(result.median_of("jl", "protect", 8, 2) > 0.0);
  CHECK(result.median_of("jl", "protect", 9, 2) < 0.0);
  CHECK(BenchResult::csv_header() == "scheme,d,n,profile,op,median_s,p90_s");
  auto csv = result.to_csv();
  CHECK(csv.find("scheme,d,n,profile,op,median_s,p90_s\n") == 0);
  CHECK(csv.find("jl,8,2,test,protect,") != std::string::npos);
}

TEST_CASE("log-log slope helper recovers a known exponent") {
  std::vector<uint64_t> dims{100, 1000, 10000};
  std::vector<double> linear{1e-3, 1e-2, 1e-1};
  CHECK(loglog_slope(dims, linear) == doctest::Approx(1.0));
  std::vector<double> quadratic{1e-3, 1e-1, 1e+1};
  CHECK(loglog_slope(dims, quadratic) == doctest::Approx(2.0));
}

}  // TEST_SUITE
