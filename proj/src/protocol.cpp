#include "secagg/protocol.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "secagg/errors.hpp"
#include "secagg/wire.hpp"

namespace secagg {

namespace {

bool contains(std::span<const NodeId> ids, NodeId id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

void check_node_ids(std::span<const NodeId> nodes) {
  std::set<NodeId> seen;
  for (NodeId u : nodes) {
    if (u == kServerId) fail(Errc::zero_index, "node id 0 is reserved for the server");
    if (!seen.insert(u).second) fail(Errc::duplicate_index, "node id repeats");
  }
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
  if (name == "JL" || name == "jl") return Scheme::jl;
  if (name == "LOM" || name == "lom") return Scheme::lom;
  if (name == "PLAIN" || name == "plain") return Scheme::plain;
  fail(Errc::config_error, "unknown scheme '" + std::string(name) + "'");
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::jl: return "JL";
    case Scheme::lom: return "LOM";
    case Scheme::plain: return "PLAIN";
  }
  return "?";
}

std::vector<uint8_t> encode_message(const ProtocolMessage& msg) {
  ByteWriter body;
  body.u8(static_cast<uint8_t>(msg.kind));
  body.u64(msg.sender);
  body.u64(msg.recipient);
  body.u64(msg.round);
  body.bytes(msg.payload);
  ByteWriter frame;
  frame.u32(static_cast<uint32_t>(body.data().size()));
  frame.bytes(body.data());
  return frame.take();
}

ProtocolMessage decode_message(std::span<const uint8_t> frame) {
  ByteReader r(frame);
  uint32_t len = r.u32();
  if (frame.size() != size_t{len} + 4) fail(Errc::bad_message, "frame length mismatch");
  ProtocolMessage msg;
  uint8_t kind = r.u8();
  if (kind < 1 || kind > 6) fail(Errc::bad_message, "unknown message kind");
  msg.kind = static_cast<MsgKind>(kind);
  msg.sender = r.u64();
  msg.recipient = r.u64();
  msg.round = r.u64();
  auto rest = r.bytes(len - 25);
  msg.payload.assign(rest.begin(), rest.end());
  r.expect_done();
  return msg;
}

std::vector<uint8_t> encode_protected_update(const ProtectedUpdate& update) {
  ByteWriter w;
  if (const auto* ct = std::get_if<JLCiphertext>(&update.body)) {
    w.u8(ct->layout == CipherLayout::naive ? 0 : 1);
    w.u64(update.dim);
    w.u64(update.weight);
    w.u8(static_cast<uint8_t>(ct->slot_bits));
    w.u16(static_cast<uint16_t>(ct->slots_per_residue));
    w.u32(static_cast<uint32_t>(ct->residues.size()));
    for (const Bigint& res : ct->residues) w.bigint(res);
  } else {
    const auto& mv = std::get<MaskedVector>(update.body);
    w.u8(2);
    w.u64(update.dim);
    w.u64(update.weight);
    w.u32(static_cast<uint32_t>(mv.values.size()));
    for (uint64_t v : mv.values) w.u64(v);
  }
  return w.take();
}

ProtectedUpdate decode_protected_update(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  uint8_t tag = r.u8();
  ProtectedUpdate update;
  update.dim = r.u64();
  update.weight = r.u64();
  if (tag == 0 || tag == 1) {
    JLCiphertext ct;
    ct.layout = tag == 0 ? CipherLayout::naive : CipherLayout::packed;
    ct.slot_bits = r.u8();
    ct.slots_per_residue = r.u16();
    ct.element_count = update.dim;
    uint32_t count = r.u32();
    ct.residues.reserve(count);
    for (uint32_t i = 0; i < count; ++i) ct.residues.push_back(r.bigint());
    update.body = std::move(ct);
  } else if (tag == 2) {
    MaskedVector mv;
    uint32_t count = r.u32();
    mv.values.reserve(count);
    for (uint32_t i = 0; i < count; ++i) mv.values.push_back(r.u64());
    update.body = std::move(mv);
  } else {
    fail(Errc::bad_message, "unknown protected-update tag");
  }
  r.expect_done();
  return update;
}

std::vector<uint8_t> encode_share(const Share& share) {
  ByteWriter w;
  w.u64(share.index);
  w.bigint(share.value);
  return w.take();
}

Share decode_share(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  Share s;
  s.index = r.u64();
  s.value = r.bigint();
  r.expect_done();
  return s;
}

std::vector<uint8_t> encode_model(std::span<const double> theta) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(theta.size()));
  for (double v : theta) w.f64(v);
  return w.take();
}

std::vector<double> decode_model(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  uint32_t count = r.u32();
  std::vector<double> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) out.push_back(r.f64());
  r.expect_done();
  return out;
}

JLSetupResult jl_setup_phase(std::span<const NodeId> nodes, unsigned threshold,
                             Transport& transport, SecurityProfile profile, Rng& rng,
                             std::span<const NodeId> absent) {
  check_node_ids(nodes);
  if (nodes.empty() || threshold < 1 || threshold > nodes.size())
    fail(Errc::invalid_threshold, "threshold must lie in [1, n_tot]");

  // Server-published parameters: the JL modulus and a Shamir field large
  // enough that the sum of all node keys (each < N^2) cannot wrap.
  ProfileSpec spec = profile_spec(profile);
  unsigned half = spec.jl_modulus_bits / 2;
  Bigint p = gen_prime(half, rng);
  Bigint q = gen_prime(half, rng);
  while (q == p) q = gen_prime(half, rng);
  JLParams params = JLParams::from_modulus(p * q);
  FieldSpec field{next_prime_above(Bigint(static_cast<unsigned long long>(nodes.size())) *
                                   params.modulus_squared)};

  auto is_absent = [&](NodeId u) { return contains(absent, u); };

  // Each node samples its key, shares it t-of-n, and routes every share to
  // its holder.
  std::map<NodeId, JLUserKey> user_keys;
  std::map<NodeId, Bigint> own_share;  // share of u's own key held by u
  for (NodeId u : nodes) {
    if (is_absent(u)) continue;
    Bigint sk = rng.below(params.modulus_squared);
    auto shares = ss_share(sk, threshold, nodes, field, rng);
    user_keys.emplace(u, JLUserKey{sk});
    for (const Share& s : shares) {
      if (s.index == u) {
        own_share[u] = s.value;
      } else {
        transport.send(ProtocolMessage{MsgKind::shamir_share, u, s.index, kSetupRound,
                                       encode_share(s)});
      }
    }
  }

  // Each node folds the received shares into a share of the key sum and
  // forwards it to the server.
  for (NodeId u : nodes) {
    if (is_absent(u)) continue;
    Bigint sum = own_share[u];
    while (auto msg = transport.poll(u)) {
      if (msg->kind != MsgKind::shamir_share) fail(Errc::bad_message, "unexpected setup message");
      sum = (sum + decode_share(msg->payload).value) % field.prime;
    }
    transport.send(ProtocolMessage{MsgKind::server_key_share, u, kServerId, kSetupRound,
                                   encode_share(Share{u, sum})});
  }

  // Server side: enough shares or abort.
  std::vector<Share> collected;
  while (auto msg = transport.poll(kServerId)) {
    if (msg->kind != MsgKind::server_key_share) fail(Errc::bad_message, "unexpected setup message");
    collected.push_back(decode_share(msg->payload));
  }
  if (collected.size() < threshold) {
    for (NodeId u : nodes)
      transport.send(ProtocolMessage{MsgKind::abort_notice, kServerId, u, kSetupRound, {}});
    fail(Errc::setup_aborted, "collected " + std::to_string(collected.size()) +
                                  " key shares, threshold is " + std::to_string(threshold));
  }
  Bigint key_sum = ss_recon(collected, threshold, field);

  JLSetupResult out;
  out.user_keys = std::move(user_keys);
  out.server_key = JLServerKey{-key_sum};
  out.params = std::move(params);
  out.field = std::move(field);
  return out;
}

std::map<NodeId, std::map<NodeId, PairwiseSecret>> lom_setup_phase(std::span<const NodeId> nodes,
                                                                   Transport& transport,
                                                                   const DHGroup& group, Rng& rng,
                                                                   std::span<const NodeId> absent) {
  check_node_ids(nodes);
  auto is_absent = [&](NodeId u) { return contains(absent, u); };

  // Broadcast of each node's public key, modeled as addressed fan-out.
  std::map<NodeId, KeyPair> pairs;
  for (NodeId u : nodes) {
    if (is_absent(u)) continue;
    KeyPair kp = ka_gen(group, rng);
    ByteWriter w;
    w.bigint(kp.public_key);
    auto payload = w.take();
    for (NodeId v : nodes) {
      if (v == u) continue;
      transport.send(ProtocolMessage{MsgKind::public_key, u, v, kSetupRound, payload});
    }
    pairs.emplace(u, std::move(kp));
  }

  std::map<NodeId, std::map<NodeId, PairwiseSecret>> secrets;
  for (NodeId u : nodes) {
    if (is_absent(u)) continue;
    std::map<NodeId, Bigint> received;
    while (auto msg = transport.poll(u)) {
      if (msg->kind != MsgKind::public_key) fail(Errc::bad_message, "unexpected setup message");
      ByteReader r(msg->payload);
      received[msg->sender] = r.bigint();
    }
    for (NodeId v : nodes) {
      if (v == u) continue;
      auto it = received.find(v);
      if (it == received.end())
        fail(Errc::missing_public_key, "no public key broadcast from node " + std::to_string(v));
      secrets[u][v] = ka_agree(group, pairs.at(u).secret, it->second);
    }
  }
  return secrets;
}

std::vector<NodeId> select_cohort(std::span<const NodeId> all_nodes, size_t n, uint64_t tau,
                                  uint64_t seed) {
  if (n > all_nodes.size())
    fail(Errc::cohort_too_large, "cohort of " + std::to_string(n) + " from " +
                                     std::to_string(all_nodes.size()) + " nodes");
  std::vector<NodeId> pool(all_nodes.begin(), all_nodes.end());
  Rng rng(Rng::derive(seed, "cohort", tau));
  for (size_t i = 0; i < n; ++i) {
    size_t j = i + static_cast<size_t>(rng.below_u64(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

ProtectedUpdate node_online_step(const RoundContext& ctx, std::span<const double> theta,
                                 uint64_t weight, const NodeCrypto& keys) {
  if (!contains(ctx.cohort, keys.id))
    fail(Errc::config_error, "node " + std::to_string(keys.id) + " is not in the round cohort");
  QuantizedVector q = quantize(theta, ctx.quant);
  QuantizedVector x = apply_weight(q, weight, ctx.quant);

  ProtectedUpdate update;
  update.weight = weight;
  update.dim = theta.size();
  switch (ctx.scheme) {
    case Scheme::jl: {
      if (!keys.jl_key) fail(Errc::config_error, "node holds no JL key");
      update.body = jl_protect_packed(keys.jl_params, *keys.jl_key, ctx.tau, x,
                                      ctx.quant.sum_bits());
      break;
    }
    case Scheme::lom: {
      LOMParams pp{ctx.quant.sum_bits()};
      update.body = lom_protect(pp, keys.pairwise, keys.id, ctx.cohort, ctx.tau, x);
      break;
    }
    case Scheme::plain:
      fail(Errc::config_error, "plain runs bypass the protection pipeline");
  }
  return update;
}

std::vector<double> server_online_step(const RoundContext& ctx,
                                       std::span<const ProtectedUpdate> updates,
                                       const ServerCrypto& keys) {
  const size_t n = ctx.cohort.size();
  if (updates.size() != n || updates.empty())
    fail(Errc::missing_update, "round has " + std::to_string(updates.size()) + " updates, cohort is " +
                                   std::to_string(n));
  const uint64_t dim = updates.front().dim;
  uint64_t weight_sum = 0;
  for (const ProtectedUpdate& u : updates) {
    if (u.dim != dim) fail(Errc::length_mismatch, "updates disagree on dimension");
    if (ctx.quant.weight_bits >= 64 || u.weight >= (uint64_t{1} << ctx.quant.weight_bits))
      fail(Errc::weight_overflow, "update weight exceeds the weight bit budget");
    weight_sum += u.weight;
  }

  QuantizedVector agg;
  if (ctx.scheme == Scheme::jl) {
    if (!keys.jl_key) fail(Errc::config_error, "server holds no JL key");
    std::vector<JLCiphertext> cts;
    cts.reserve(updates.size());
    for (const ProtectedUpdate& u : updates) {
      const auto* ct = std::get_if<JLCiphertext>(&u.body);
      if (!ct) fail(Errc::layout_mismatch, "non-JL payload in a JL round");
      cts.push_back(*ct);
    }
    agg = cts.front().layout == CipherLayout::packed
              ? jl_aggregate_packed(keys.jl_params, *keys.jl_key, ctx.tau, cts, n)
              : jl_aggregate(keys.jl_params, *keys.jl_key, ctx.tau, cts, n);
  } else if (ctx.scheme == Scheme::lom) {
    std::vector<MaskedVector> mvs;
    mvs.reserve(updates.size());
    for (const ProtectedUpdate& u : updates) {
      const auto* mv = std::get_if<MaskedVector>(&u.body);
      if (!mv) fail(Errc::layout_mismatch, "non-LOM payload in a LOM round");
      mvs.push_back(*mv);
    }
    agg = lom_aggregate(LOMParams{ctx.quant.sum_bits()}, mvs, n);
  } else {
    fail(Errc::config_error, "plain runs bypass the aggregation pipeline");
  }

  if (agg.values.size() != dim) fail(Errc::length_mismatch, "aggregate dimension mismatch");
  return dequantize_aggregate(agg, weight_sum, ctx.quant);
}

}  // namespace secagg
