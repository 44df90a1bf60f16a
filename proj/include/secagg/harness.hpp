#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "secagg/protocol.hpp"
#include "secagg/synthetic.hpp"
#include "secagg/transport_sim.hpp"

namespace secagg {

// One experiment = setup phase + T federated rounds on the synthetic task.
// Field names mirror the JSON config schema one-to-one.
struct ExperimentConfig {
  std::string scheme = "LOM";  // JL | LOM | PLAIN
  uint64_t n_tot = 4;
  uint64_t n = 4;
  uint64_t T = 10;     // FL rounds
  uint64_t e = 5;      // local SGD steps
  uint64_t b = 16;     // batch size
  double eta = 0.05;   // learning rate
  unsigned L = 16;     // input bits
  unsigned W = 8;      // weight bits
  double theta_min = -3.0;
  double theta_max = 3.0;
  unsigned t = 0;      // Shamir threshold; 0 selects ceil(2 n_tot / 3)
  std::string profile = "test";
  uint64_t seed = 1;
  uint64_t d = 10;     // model dimension
  TaskSpec task;
  std::string out;

  Scheme parsed_scheme() const { return parse_scheme(scheme); }
  SecurityProfile parsed_profile() const { return parse_profile(profile); }
  unsigned threshold() const { return t != 0 ? t : static_cast<unsigned>((2 * n_tot + 2) / 3); }
  QuantConfig quant() const;
  void validate() const;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct RoundReport {
  uint64_t tau = 0;
  double train_s = 0.0;
  double protect_s = 0.0;
  double aggregate_s = 0.0;
  double total_s = 0.0;
  double metric = 0.0;             // test MSE of the new global model
  uint64_t aggregate_checksum = 0;
  double max_param_dev = 0.0;      // vs the in-clear weighted average (secure runs)

  std::string to_json_line() const;
  static std::string csv_header();
  std::string to_csv_line() const;
};

struct ExperimentResult {
  std::vector<RoundReport> rounds;
  std::vector<double> final_model;
  double final_metric = 0.0;
  std::vector<ProtocolMessage> transcript;
  std::vector<std::vector<uint8_t>> transcript_frames;
  std::array<uint8_t, 32> transcript_hash{};
  // Test instrumentation: each round's cohort and the weighted quantized
  // vectors the nodes protected (kept only at desk scale).
  std::vector<std::vector<NodeId>> round_cohorts;
  std::vector<std::vector<QuantizedVector>> round_inputs;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SelftestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast end-to-end sweep over the library's core invariants.
std::vector<SelftestResult> selftest();

}  // namespace secagg
