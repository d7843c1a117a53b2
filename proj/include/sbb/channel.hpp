#pragma once

#include "sbb/bit_string.hpp"
#include "sbb/config.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sbb {

/// Same bits to every other node. An empty payload is silence.
struct Broadcast
{
  BitString bits;
};

/// Per-receiver payloads in one slot. Only faulty senders may use this.
struct Selective
{
  std::map<NodeId, BitString> per_receiver;
};

/// Point-to-point copies of one message, one per listed receiver. Used to run
/// protocols in the classical model for coalescing comparisons.
struct Unicast
{
  std::vector<NodeId> receivers;
  BitString           bits;
};

using Payload = std::variant<Broadcast, Selective, Unicast>;

struct SlotTransmission
{
  NodeId  sender;
  int     topic = 0;  ///< demultiplexes parallel protocol instances within a round
  Payload payload;
};

struct Received
{
  NodeId    sender;
  int       topic = 0;
  BitString bits;
};

/// Everything delivered in one round, by receiver.
class RoundDelivery
{
public:
  void add(NodeId receiver, Received r) { inbox_[receiver].push_back(std::move(r)); }

  /// The payload receiver got from sender on topic, or nullptr.
  BitString const *find(NodeId receiver, NodeId sender, int topic = 0) const;

  std::vector<Received> const &inbox(NodeId receiver) const;

private:
  std::map<NodeId, std::vector<Received>> inbox_;
};

struct TrafficCounters
{
  std::uint64_t honest_messages    = 0;
  std::uint64_t honest_bits        = 0;
  std::uint64_t adversary_messages = 0;
  std::uint64_t adversary_bits     = 0;

  friend bool operator==(TrafficCounters const &, TrafficCounters const &) = default;
};

/// Message and bit counters. Honest counters cover only fault-free senders.
class TrafficMeter
{
public:
  void record(std::string const &phase, bool honest, std::uint64_t messages, std::uint64_t bits);

  TrafficCounters const                        &totals() const noexcept { return totals_; }
  std::map<std::string, TrafficCounters> const &per_phase() const noexcept { return per_phase_; }
  TrafficCounters                               phase(std::string const &name) const;

  std::uint64_t honest_messages() const noexcept { return totals_.honest_messages; }
  std::uint64_t honest_bits() const noexcept { return totals_.honest_bits; }
  std::uint64_t adversary_messages() const noexcept { return totals_.adversary_messages; }
  std::uint64_t adversary_bits() const noexcept { return totals_.adversary_bits; }

  friend bool operator==(TrafficMeter const &, TrafficMeter const &) = default;

private:
  TrafficCounters                        totals_;
  std::map<std::string, TrafficCounters> per_phase_;
};

/// One line of the slot log.
struct TraceEntry
{
  int         round = 0;
  int         slot  = 0;
  NodeId      sender;
  std::string kind;  ///< broadcast | selective | unicast | silent
  std::uint64_t bits = 0;
  std::string   phase;

  std::uint64_t bytes() const noexcept { return (bits + 7) / 8; }
  std::string   to_json() const;

  friend bool operator==(TraceEntry const &, TraceEntry const &) = default;
};

/// Delivers one slot. Every node other than the sender gets exactly one
/// attributed payload (possibly empty). Updates the meter. Throws
/// ModelViolation when a fault-free sender uses a Selective payload.
std::map<NodeId, Received> channel_deliver(SlotTransmission const &tx, int n, FaultOracle const &faulty,
                                           TrafficMeter &meter, std::string const &phase);

std::string payload_kind(Payload const &payload);
std::uint64_t payload_bits(Payload const &payload);

/// Synchronous selective-broadcast channel. Transmissions submitted during a
/// round are delivered together when the round closes.
class Channel
{
public:
  Channel(int n, FaultOracle faulty);

  void          submit(SlotTransmission tx, std::string phase);
  RoundDelivery close_round();

  int                             n() const noexcept { return n_; }
  int                             round() const noexcept { return round_; }
  TrafficMeter const             &meter() const noexcept { return meter_; }
  std::vector<TraceEntry> const &trace() const noexcept { return trace_; }

private:
  struct Pending
  {
    SlotTransmission tx;
    std::string      phase;
  };

  int                     n_;
  FaultOracle             faulty_;
  int                     round_ = 1;
  std::vector<Pending>    pending_;
  TrafficMeter            meter_;
  std::vector<TraceEntry> trace_;
};

}  // namespace sbb
