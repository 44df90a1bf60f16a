#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "secagg/joye_libert.hpp"
#include "secagg/keyagreement.hpp"
#include "secagg/lom.hpp"
#include "secagg/quantizer.hpp"
#include "secagg/shamir.hpp"

namespace secagg {

// Node identifiers are positive and totally ordered; they double as Shamir
// share indices. Address 0 is the server.
using NodeId = uint64_t;
inline constexpr NodeId kServerId = 0;
inline constexpr uint64_t kSetupRound = UINT64_MAX;

enum class Scheme : uint8_t { jl = 0, lom = 1, plain = 2 };
Scheme parse_scheme(std::string_view name);  // "JL" | "LOM" | "PLAIN"
const char* scheme_name(Scheme s);

enum class MsgKind : uint8_t {
  public_key = 1,
  shamir_share = 2,
  server_key_share = 3,
  protected_update = 4,
  global_model = 5,
  abort_notice = 6,
};

struct ProtocolMessage {
  MsgKind kind{};
  NodeId sender = 0;
  NodeId recipient = 0;
  uint64_t round = kSetupRound;
  std::vector<uint8_t> payload;
};

// Framing: u32 length | kind u8 | sender u64 | recipient u64 | round u64 | payload.
std::vector<uint8_t> encode_message(const ProtocolMessage& msg);
ProtocolMessage decode_message(std::span<const uint8_t> frame);

// One node's protected contribution for a round, with its clear weight.
struct ProtectedUpdate {
  std::variant<JLCiphertext, MaskedVector> body;
  uint64_t weight = 0;
  uint64_t dim = 0;
};

std::vector<uint8_t> encode_protected_update(const ProtectedUpdate& update);
ProtectedUpdate decode_protected_update(std::span<const uint8_t> payload);

std::vector<uint8_t> encode_share(const Share& share);
Share decode_share(std::span<const uint8_t> payload);

std::vector<uint8_t> encode_model(std::span<const double> theta);
std::vector<double> decode_model(std::span<const uint8_t> payload);

// Abstract message fabric the role state machines run over. Implementations
// must deliver per-channel FIFO.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(const ProtocolMessage& msg) = 0;
  virtual std::optional<ProtocolMessage> poll(NodeId recipient) = 0;
};

struct RoundContext {
  uint64_t tau = 0;
  std::vector<NodeId> cohort;  // sorted by id
  Scheme scheme = Scheme::lom;
  QuantConfig quant;
};

// Cryptographic material held by one node after setup. The LOM mask modulus
// comes from the round's QuantConfig, so only keys live here.
struct NodeCrypto {
  NodeId id = 0;
  JLParams jl_params;
  std::optional<JLUserKey> jl_key;
  std::map<NodeId, PairwiseSecret> pairwise;
};

struct ServerCrypto {
  JLParams jl_params;
  std::optional<JLServerKey> jl_key;
};

struct JLSetupResult {
  std::map<NodeId, JLUserKey> user_keys;
  JLServerKey server_key;
  JLParams params;
  FieldSpec field;
};

// Distributed server-key setup: every node samples its key, Shamir-shares it
// to all peers, peers sum the received shares into shares of the key sum and
// forward them, and the server reconstructs. Aborts (SetupAborted) when fewer
// than `threshold` nodes deliver their summed share. Nodes listed in `absent`
// never act; params (modulus) are published by the server up front.
JLSetupResult jl_setup_phase(std::span<const NodeId> nodes, unsigned threshold,
                             Transport& transport, SecurityProfile profile, Rng& rng,
                             std::span<const NodeId> absent = {});

// Pairwise key establishment over broadcast public keys. MissingPublicKey if
// any expected broadcast never arrives.
std::map<NodeId, std::map<NodeId, PairwiseSecret>> lom_setup_phase(std::span<const NodeId> nodes,
                                                                   Transport& transport,
                                                                   const DHGroup& group, Rng& rng,
                                                                   std::span<const NodeId> absent = {});

// Uniform n-subset of the nodes, deterministic in (seed, tau), sorted by id.
std::vector<NodeId> select_cohort(std::span<const NodeId> all_nodes, size_t n, uint64_t tau,
                                  uint64_t seed);

// quantize -> apply weight -> protect, per the round's scheme.
ProtectedUpdate node_online_step(const RoundContext& ctx, std::span<const double> theta,
                                 uint64_t weight, const NodeCrypto& keys);

// aggregate -> divide by the weight sum -> dequantize.
std::vector<double> server_online_step(const RoundContext& ctx,
                                       std::span<const ProtectedUpdate> updates,
                                       const ServerCrypto& keys);

}  // namespace secagg
