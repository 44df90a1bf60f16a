#include "secagg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secagg {

namespace {

NodeDataset draw_dataset(size_t rows, size_t dim, std::span<const double> model,
                         std::span<const double> mean_shift, double noise_std, Rng& rng) {
  NodeDataset ds;
  ds.rows = rows;
  ds.dim = dim;
  ds.features.resize(rows * dim);
  ds.targets.resize(rows);
  for (size_t r = 0; r < rows; ++r) {
    double y = 0.0;
    for (size_t c = 0; c < dim; ++c) {
      double x = rng.normal(mean_shift.empty() ? 0.0 : mean_shift[c], 1.0);
      ds.features[r * dim + c] = x;
      y += x * model[c];
    }
    ds.targets[r] = y + rng.normal(0.0, noise_std);
  }
  return ds;
}

}  // namespace

SyntheticTask SyntheticTask::generate(size_t n_nodes, size_t dim, const TaskSpec& spec,
                                      uint64_t seed) {
  if (n_nodes == 0 || dim == 0) throw std::invalid_argument("task needs nodes and dimensions");
  SyntheticTask task;
  Rng model_rng(Rng::derive(seed, "task-model", 0));
  task.true_model.resize(dim);
  for (auto& w : task.true_model) w = 2.0 * model_rng.unit_real() - 1.0;

  for (size_t u = 0; u < n_nodes; ++u) {
    Rng rng(Rng::derive(seed, "task-shard", u));
    size_t rows = spec.samples_per_node;
    if (spec.size_spread > 0.0) {
      double f = 1.0 + spec.size_spread * (2.0 * rng.unit_real() - 1.0);
      rows = std::max<size_t>(1, static_cast<size_t>(std::llround(rows * f)));
    }
    std::vector<double> shift(dim, 0.0);
    if (spec.heterogeneity > 0.0)
      for (auto& s : shift) s = rng.normal(0.0, spec.heterogeneity);
    task.shards.push_back(draw_dataset(rows, dim, task.true_model, shift, spec.noise_std, rng));
  }

  Rng test_rng(Rng::derive(seed, "task-test", 0));
  task.test = draw_dataset(spec.test_samples, dim, task.true_model, {}, spec.noise_std, test_rng);
  return task;
}

double SyntheticTask::mse(std::span<const double> theta) const {
  double total = 0.0;
  for (size_t r = 0; r < test.rows; ++r) {
    double pred = 0.0;
    for (size_t c = 0; c < test.dim; ++c) pred += test.features[r * test.dim + c] * theta[c];
    double err = pred - test.targets[r];
    total += err * err;
  }
  return test.rows ? total / static_cast<double>(test.rows) : 0.0;
}

std::vector<double> local_sgd(std::span<const double> theta, const NodeDataset& data,
                              uint64_t steps, uint64_t batch, double learning_rate) {
  std::vector<double> w(theta.begin(), theta.end());
  if (data.rows == 0 || batch == 0) return w;
  const size_t dim = data.dim;
  std::vector<double> grad(dim);
  size_t cursor = 0;
  for (uint64_t s = 0; s < steps; ++s) {
    std::fill(grad.begin(), grad.end(), 0.0);
    size_t used = std::min<size_t>(batch, data.rows);
    for (size_t k = 0; k < used; ++k) {
      size_t r = (cursor + k) % data.rows;
      double pred = 0.0;
      for (size_t c = 0; c < dim; ++c) pred += data.features[r * dim + c] * w[c];
      double err = pred - data.targets[r];
      for (size_t c = 0; c < dim; ++c) grad[c] += err * data.features[r * dim + c];
    }
    cursor = (cursor + used) % data.rows;
    const double scale = learning_rate / static_cast<double>(used);
    for (size_t c = 0; c < dim; ++c) w[c] -= scale * grad[c];
  }
  return w;
}

}  // namespace secagg
