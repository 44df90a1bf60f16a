#pragma once

#include <array>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "secagg/protocol.hpp"

namespace secagg {

// Deterministic in-process message fabric: inboxes are FIFO in send order
// (which preserves per-channel FIFO), and every frame is retained as the
// round transcript for the structural protocol checks.
class InProcessTransport : public Transport {
 public:
  void register_party(NodeId id);

  void send(const ProtocolMessage& msg) override;
  std::optional<ProtocolMessage> poll(NodeId recipient) override;

  const std::vector<ProtocolMessage>& log() const { return log_; }
  const std::vector<std::vector<uint8_t>>& frames() const { return frames_; }
  std::array<uint8_t, 32> transcript_hash() const;

  size_t count(MsgKind kind, uint64_t round) const;

 private:
  std::set<NodeId> parties_;
  std::map<NodeId, std::deque<ProtocolMessage>> inboxes_;
  std::vector<ProtocolMessage> log_;
  std::vector<std::vector<uint8_t>> frames_;
};

}  // namespace secagg
