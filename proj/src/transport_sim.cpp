#include "secagg/transport_sim.hpp"

#include <string>

#include "secagg/digest.hpp"
#include "secagg/errors.hpp"

namespace secagg {

void InProcessTransport::register_party(NodeId id) { parties_.insert(id); }

void InProcessTransport::send(const ProtocolMessage& msg) {
  if (!parties_.contains(msg.recipient))
    fail(Errc::undeliverable_message, "no party registered at address " +
                                          std::to_string(msg.recipient));
  frames_.push_back(encode_message(msg));
  log_.push_back(msg);
  inboxes_[msg.recipient].push_back(msg);
}

std::optional<ProtocolMessage> InProcessTransport::poll(NodeId recipient) {
  auto it = inboxes_.find(recipient);
  if (it == inboxes_.end() || it->second.empty()) return std::nullopt;
  ProtocolMessage msg = std::move(it->second.front());
  it->second.pop_front();
  return msg;
}

std::array<uint8_t, 32> InProcessTransport::transcript_hash() const {
  std::vector<uint8_t> all;
  for (const auto& f : frames_) all.insert(all.end(), f.begin(), f.end());
  return sha256(all);
}

size_t InProcessTransport::count(MsgKind kind, uint64_t round) const {
  size_t n = 0;
  for (const auto& m : log_)
    if (m.kind == kind && m.round == round) ++n;
  return n;
}

}  // namespace secagg
