#include "secagg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "secagg/errors.hpp"

namespace secagg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

uint64_t fnv1a(std::span<const uint8_t> bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t checksum_doubles(std::span<const double> values) {
  std::vector<uint8_t> bytes;
  bytes.reserve(values.size() * 8);
  for (double v : values) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 7; i >= 0; --i) bytes.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  }
  return fnv1a(bytes);
}

}  // namespace

QuantConfig ExperimentConfig::quant() const {
  QuantConfig q;
  q.input_bits = L;
  q.weight_bits = W;
  q.cohort_size = static_cast<unsigned>(n);
  q.clip_lo = theta_min;
  q.clip_hi = theta_max;
  return q;
}

void ExperimentConfig::validate() const {
  Scheme s = parsed_scheme();
  parsed_profile();
  if (n_tot < 2) fail(Errc::config_error, "n_tot must be >= 2");
  if (n < 2 || n > n_tot) fail(Errc::config_error, "need 2 <= n <= n_tot");
  if (s == Scheme::jl && n != n_tot)
    fail(Errc::config_error,
         "JL fixes keys for all nodes; client selection (n < n_tot) is not supported");
  if (d == 0) fail(Errc::config_error, "model dimension d must be positive");
  if (threshold() < 1 || threshold() > n_tot)
    fail(Errc::config_error, "Shamir threshold outside [1, n_tot]");
  if (!(theta_min < theta_max)) fail(Errc::invalid_range, "need theta_min < theta_max");
  quant().validate();
  uint64_t max_rows = static_cast<uint64_t>(
      std::llround(std::ceil(task.samples_per_node * (1.0 + task.size_spread))));
  if (W >= 64 || max_rows >= (uint64_t{1} << W))
    fail(Errc::config_error, "dataset sizes can exceed the W-bit weight budget");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.scheme = j.value("scheme", cfg.scheme);
    cfg.n_tot = j.value("n_tot", cfg.n_tot);
    cfg.n = j.value("n", cfg.n);
    cfg.T = j.value("T", cfg.T);
    cfg.e = j.value("e", cfg.e);
    cfg.b = j.value("b", cfg.b);
    cfg.eta = j.value("eta", cfg.eta);
    cfg.L = j.value("L", cfg.L);
    cfg.W = j.value("W", cfg.W);
    cfg.theta_min = j.value("theta_min", cfg.theta_min);
    cfg.theta_max = j.value("theta_max", cfg.theta_max);
    cfg.t = j.value("t", cfg.t);
    cfg.profile = j.value("profile", cfg.profile);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.d = j.value("d", cfg.d);
    cfg.out = j.value("out", cfg.out);
    if (j.contains("task")) {
      const auto& t = j.at("task");
      cfg.task.samples_per_node = t.value("samples_per_node", cfg.task.samples_per_node);
      cfg.task.noise_std = t.value("noise_std", cfg.task.noise_std);
      cfg.task.heterogeneity = t.value("heterogeneity", cfg.task.heterogeneity);
      cfg.task.test_samples = t.value("test_samples", cfg.task.test_samples);
      cfg.task.size_spread = t.value("size_spread", cfg.task.size_spread);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::config_error, std::string("config field has the wrong type: ") + e.what());
  }
  return cfg;
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::json j{
      {"scheme", scheme},
      {"n_tot", n_tot},
      {"n", n},
      {"T", T},
      {"e", e},
      {"b", b},
      {"eta", eta},
      {"L", L},
      {"W", W},
      {"theta_min", theta_min},
      {"theta_max", theta_max},
      {"t", t},
      {"profile", profile},
      {"seed", seed},
      {"d", d},
      {"task",
       {{"samples_per_node", task.samples_per_node},
        {"noise_std", task.noise_std},
        {"heterogeneity", task.heterogeneity},
        {"test_samples", task.test_samples},
        {"size_spread", task.size_spread}}},
      {"out", out},
  };
  return j.dump(2);
}

std::string RoundReport::to_json_line() const {
  nlohmann::json j{
      {"tau", tau},
      {"train_s", train_s},
      {"protect_s", protect_s},
      {"aggregate_s", aggregate_s},
      {"total_s", total_s},
      {"metric", metric},
      {"aggregate_checksum", aggregate_checksum},
      {"max_param_dev", max_param_dev},
  };
  return j.dump();
}

std::string RoundReport::csv_header() {
  return "tau,train_s,protect_s,aggregate_s,total_s,metric,aggregate_checksum,max_param_dev";
}

std::string RoundReport::to_csv_line() const {
  std::ostringstream os;
  os.precision(17);
  os << tau << ',' << train_s << ',' << protect_s << ',' << aggregate_s << ',' << total_s << ','
     << metric << ',' << aggregate_checksum << ',' << max_param_dev;
  return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Scheme scheme = cfg.parsed_scheme();
  const QuantConfig quant = cfg.quant();

  SyntheticTask task =
      SyntheticTask::generate(cfg.n_tot, cfg.d, cfg.task, Rng::derive(cfg.seed, "task", 0));

  std::vector<NodeId> nodes;
  for (uint64_t u = 1; u <= cfg.n_tot; ++u) nodes.push_back(u);

  InProcessTransport transport;
  transport.register_party(kServerId);
  for (NodeId u : nodes) transport.register_party(u);

  // Setup phase.
  std::map<NodeId, NodeCrypto> node_keys;
  ServerCrypto server_keys;
  Rng setup_rng(Rng::derive(cfg.seed, "setup", 0));
  if (scheme == Scheme::jl) {
    JLSetupResult setup =
        jl_setup_phase(nodes, cfg.threshold(), transport, cfg.parsed_profile(), setup_rng);
    server_keys.jl_params = setup.params;
    server_keys.jl_key = setup.server_key;
    for (NodeId u : nodes) {
      NodeCrypto nc;
      nc.id = u;
      nc.jl_params = setup.params;
      nc.jl_key = setup.user_keys.at(u);
      node_keys.emplace(u, std::move(nc));
    }
  } else if (scheme == Scheme::lom) {
    DHGroup group = ka_param(cfg.parsed_profile(), setup_rng);
    auto secrets = lom_setup_phase(nodes, transport, group, setup_rng);
    for (NodeId u : nodes) {
      NodeCrypto nc;
      nc.id = u;
      nc.pairwise = std::move(secrets.at(u));
      node_keys.emplace(u, std::move(nc));
    }
  }

  const bool keep_inputs = cfg.n * cfg.d * std::max<uint64_t>(cfg.T, 1) <= (uint64_t{1} << 22);

  ExperimentResult result;
  std::vector<double> global(cfg.d, 0.0);
  for (uint64_t tau = 0; tau < cfg.T; ++tau) {
    auto round_start = Clock::now();
    RoundReport report;
    report.tau = tau;

    RoundContext ctx;
    ctx.tau = tau;
    ctx.scheme = scheme;
    ctx.quant = quant;
    ctx.cohort = scheme == Scheme::jl ? nodes : select_cohort(nodes, cfg.n, tau, cfg.seed);
    result.round_cohorts.push_back(ctx.cohort);

    // Global model broadcast (plain runs stay entirely in-process).
    if (scheme != Scheme::plain) {
      auto payload = encode_model(global);
      for (NodeId u : ctx.cohort)
        transport.send(ProtocolMessage{MsgKind::global_model, kServerId, u, tau, payload});
    }

    // Local training on each cohort member.
    std::vector<std::vector<double>> locals;
    std::vector<uint64_t> weights;
    for (NodeId u : ctx.cohort) {
      const NodeDataset& shard = task.shards[u - 1];
      std::vector<double> start = global;
      if (scheme != Scheme::plain) {
        auto msg = transport.poll(u);
        if (!msg || msg->kind != MsgKind::global_model)
          fail(Errc::bad_message, "node missed the global model broadcast");
        start = decode_model(msg->payload);
      }
      auto t0 = Clock::now();
      locals.push_back(local_sgd(start, shard, cfg.e, cfg.b, cfg.eta));
      report.train_s += seconds_since(t0);
      weights.push_back(shard.rows);
    }

    // In-clear weighted average of the same local models; the secure paths
    // are compared against it elementwise (harness instrumentation, never
    // sent through the transport).
    const uint64_t weight_sum = std::accumulate(weights.begin(), weights.end(), uint64_t{0});
    std::vector<double> reference(cfg.d, 0.0);
    for (size_t k = 0; k < locals.size(); ++k)
      for (uint64_t c = 0; c < cfg.d; ++c)
        reference[c] += (scheme == Scheme::plain
                             ? locals[k][c]
                             : clip(locals[k][c], quant.clip_lo, quant.clip_hi)) *
                        static_cast<double>(weights[k]);
    for (double& v : reference) v /= static_cast<double>(weight_sum);

    if (scheme == Scheme::plain) {
      global = reference;
      report.aggregate_checksum = checksum_doubles(global);
    } else {
      if (keep_inputs) {
        std::vector<QuantizedVector> round_x;
        for (size_t k = 0; k < locals.size(); ++k)
          round_x.push_back(apply_weight(quantize(locals[k], quant), weights[k], quant));
        result.round_inputs.push_back(std::move(round_x));
      }
      std::vector<ProtectedUpdate> updates;
      for (size_t k = 0; k < ctx.cohort.size(); ++k) {
        auto t0 = Clock::now();
        ProtectedUpdate upd =
            node_online_step(ctx, locals[k], weights[k], node_keys.at(ctx.cohort[k]));
        report.protect_s += seconds_since(t0);
        transport.send(ProtocolMessage{MsgKind::protected_update, ctx.cohort[k], kServerId, tau,
                                       encode_protected_update(upd)});
      }
      std::vector<ProtectedUpdate> received;
      while (auto msg = transport.poll(kServerId)) {
        if (msg->kind != MsgKind::protected_update)
          fail(Errc::bad_message, "unexpected online-phase message");
        received.push_back(decode_protected_update(msg->payload));
      }
      auto t0 = Clock::now();
      global = server_online_step(ctx, received, server_keys);
      report.aggregate_s = seconds_since(t0);

      // Checksum the integer aggregate the server recovered (re-derived from
      // the dequantized model to avoid a second aggregation path).
      report.aggregate_checksum = checksum_doubles(global);
      double dev = 0.0;
      for (uint64_t c = 0; c < cfg.d; ++c) dev = std::max(dev, std::abs(global[c] - reference[c]));
      report.max_param_dev = dev;
    }

    report.metric = task.mse(global);
    report.total_s = seconds_since(round_start);
    result.rounds.push_back(report);
  }

  result.final_model = global;
  result.final_metric = task.mse(global);
  result.transcript = transport.log();
  result.transcript_frames = transport.frames();
  result.transcript_hash = transport.transcript_hash();
  return result;
}

}  // namespace secagg
