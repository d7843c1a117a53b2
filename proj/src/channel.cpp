#include "sbb/channel.hpp"

#include "sbb/errors.hpp"

#include "json.hpp"

namespace sbb {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Received> const kEmptyInbox;

}  // namespace

BitString const *RoundDelivery::find(NodeId receiver, NodeId sender, int topic) const
{
  auto it = inbox_.find(receiver);
  if (it == inbox_.end())
  {
    return nullptr;
  }
  for (auto const &r : it->second)
  {
    if (r.sender == sender && r.topic == topic)
    {
      return &r.bits;
    }
  }
  return nullptr;
}

std::vector<Received> const &RoundDelivery::inbox(NodeId receiver) const
{
  auto it = inbox_.find(receiver);
  return it == inbox_.end() ? kEmptyInbox : it->second;
}

void TrafficMeter::record(std::string const &phase, bool honest, std::uint64_t messages, std::uint64_t bits)
{
  auto bump = [&](TrafficCounters &c) {
    if (honest)
    {
      c.honest_messages += messages;
      c.honest_bits += bits;
    }
    else
    {
      c.adversary_messages += messages;
      c.adversary_bits += bits;
    }
  };
  bump(totals_);
  bump(per_phase_[phase]);
}

TrafficCounters TrafficMeter::phase(std::string const &name) const
{
  auto it = per_phase_.find(name);
  return it == per_phase_.end() ? TrafficCounters{} : it->second;
}

std::string TraceEntry::to_json() const
{
  nlohmann::ordered_json j;
  j["round"]  = round;
  j["slot"]   = slot;
  j["sender"] = sender.value;
  j["kind"]   = kind;
  j["bytes"]  = bytes();
  j["bits"]   = bits;
  j["phase"]  = phase;
  return j.dump();
}

std::string payload_kind(Payload const &payload)
{
  return std::visit(overloaded{[](Broadcast const &b) -> std::string { return b.bits.empty() ? "silent" : "broadcast"; },
                               [](Selective const &) -> std::string { return "selective"; },
                               [](Unicast const &) -> std::string { return "unicast"; }},
                    payload);
}

std::uint64_t payload_bits(Payload const &payload)
{
  return std::visit(overloaded{[](Broadcast const &b) -> std::uint64_t { return b.bits.size(); },
                               [](Selective const &s) -> std::uint64_t {
                                 std::uint64_t total = 0;
                                 for (auto const &[_, bits] : s.per_receiver)
                                 {
                                   total += bits.size();
                                 }
                                 return total;
                               },
                               [](Unicast const &u) -> std::uint64_t { return u.bits.size() * u.receivers.size(); }},
                    payload);
}

std::map<NodeId, Received> channel_deliver(SlotTransmission const &tx, int n, FaultOracle const &faulty,
                                           TrafficMeter &meter, std::string const &phase)
{
  bool const honest = faulty.count(tx.sender) == 0;
  if (tx.sender.value < 1 || tx.sender.value > n)
  {
    throw ModelViolation("sender outside 1..n");
  }
  std::map<NodeId, Received> out;
  for (auto const &node : all_nodes(n))
  {
    if (node != tx.sender)
    {
      out.emplace(node, Received{tx.sender, tx.topic, BitString{}});
    }
  }
  auto check_receiver = [&](NodeId r) {
    if (r == tx.sender || out.count(r) == 0)
    {
      throw ModelViolation("invalid receiver " + std::to_string(r.value));
    }
  };

  std::visit(overloaded{[&](Broadcast const &b) {
                          if (b.bits.empty())
                          {
                            return;
                          }
                          for (auto &[_, r] : out)
                          {
                            r.bits = b.bits;
                          }
                          meter.record(phase, honest, 1, b.bits.size());
                        },
                        [&](Selective const &s) {
                          if (honest)
                          {
                            throw ModelViolation("fault-free node " + std::to_string(tx.sender.value) +
                                                 " attempted a selective transmission");
                          }
                          std::uint64_t messages = 0;
                          std::uint64_t bits     = 0;
                          for (auto const &[receiver, payload] : s.per_receiver)
                          {
                            check_receiver(receiver);
                            out[receiver].bits = payload;
                            if (!payload.empty())
                            {
                              ++messages;
                              bits += payload.size();
                            }
                          }
                          meter.record(phase, honest, messages, bits);
                        },
                        [&](Unicast const &u) {
                          if (u.bits.empty())
                          {
                            return;
                          }
                          for (auto receiver : u.receivers)
                          {
                            check_receiver(receiver);
                            out[receiver].bits = u.bits;
                          }
                          meter.record(phase, honest, u.receivers.size(), u.bits.size() * u.receivers.size());
                        }},
             tx.payload);
  return out;
}

Channel::Channel(int n, FaultOracle faulty) : n_{n}, faulty_{std::move(faulty)} {}

void Channel::submit(SlotTransmission tx, std::string phase)
{
  pending_.push_back(Pending{std::move(tx), std::move(phase)});
}

RoundDelivery Channel::close_round()
{
  RoundDelivery delivery;
  int           slot = 0;
  for (auto &p : pending_)
  {
    auto received = channel_deliver(p.tx, n_, faulty_, meter_, p.phase);
    trace_.push_back(TraceEntry{round_, slot++, p.tx.sender, payload_kind(p.tx.payload), payload_bits(p.tx.payload),
                                p.phase});
    for (auto &[receiver, r] : received)
    {
      if (!r.bits.empty())
      {
        delivery.add(receiver, std::move(r));
      }
    }
  }
  pending_.clear();
  ++round_;
  return delivery;
}

}  // namespace sbb
