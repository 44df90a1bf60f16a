#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secagg/bigint.hpp"

namespace secagg {

// Linear-regression stand-in task: every node's shard is drawn from one fixed
// linear model plus noise, with an optional per-node shift of the feature
// means (statistical heterogeneity) and per-node dataset-size spread.
struct TaskSpec {
  uint64_t samples_per_node = 200;
  double noise_std = 0.1;
  double heterogeneity = 0.0;
  uint64_t test_samples = 512;
  double size_spread = 0.0;  // shard sizes vary uniformly within +-spread
};

struct NodeDataset {
  size_t rows = 0;
  size_t dim = 0;
  std::vector<double> features;  // row-major rows x dim
  std::vector<double> targets;
};

struct SyntheticTask {
  std::vector<NodeDataset> shards;
  NodeDataset test;
  std::vector<double> true_model;

  static SyntheticTask generate(size_t n_nodes, size_t dim, const TaskSpec& spec, uint64_t seed);

  double mse(std::span<const double> theta) const;
};

// Deterministic minibatch SGD on the squared loss: `steps` passes over
// sequential wrapping windows of `batch` rows.
std::vector<double> local_sgd(std::span<const double> theta, const NodeDataset& data,
                              uint64_t steps, uint64_t batch, double learning_rate);

}  // namespace secagg
