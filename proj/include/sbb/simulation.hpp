#pragma once

#include "sbb/bit_string.hpp"
#include "sbb/channel.hpp"
#include "sbb/config.hpp"
#include "sbb/errors.hpp"
#include "sbb/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sbb {

/// Which protocol step a slot belongs to. Adversaries key their behaviour on this.
enum class Step
{
  kDbSource,     ///< source sends x(g) in Detectable Broadcast
  kDbRelay,      ///< peer relays its own coded symbol
  kEig,          ///< a round of an EIG broadcast instance
  kCommitteeSource,  ///< Algorithm 2 source broadcast
  kAnnounce,     ///< Algorithm 2 announcer transmits the decided value
};

enum class EigPurpose
{
  kNone,
  kStandalone,
  kDetection,     ///< 1-bit detection dissemination
  kDisputeValue,  ///< source re-broadcasts x(g) during dispute control
  kDisputeClaim,  ///< a peer broadcasts its claims during dispute control
  kCore,          ///< Algorithm 2 consensus core
};

struct StepInfo
{
  Step         kind       = Step::kEig;
  EigPurpose   purpose    = EigPurpose::kNone;
  NodeId       instance_source{};  ///< EIG instance root
  int          eig_round  = 0;     ///< 1-based EIG round
  std::int64_t generation = 0;     ///< 1-based; 0 outside the generation loop
};

/// A slot the protocol schedules. For a fault-free sender the prescribed bits
/// are transmitted as is; an empty prescription means stay silent.
struct PlannedSlot
{
  NodeId              sender;
  int                 topic = 0;
  StepInfo            step;
  BitString           prescribed;
  std::vector<NodeId> audience;  ///< intended receivers (point-to-point mode)
};

/// Everything the adversary may look at when filling a corrupted node's slot.
struct SlotContext
{
  SystemConfig const                &config;
  StepInfo const                    &step;
  NodeId                             sender;
  int                                topic;
  BitString const                   &prescribed;
  std::vector<NodeId> const         &audience;
  BitString const                   &source_input;
  std::span<SlotTransmission const>  honest_this_round;
  Rng                               &rng;
};

class AdversaryStrategy
{
public:
  virtual ~AdversaryStrategy() = default;

  virtual std::string name() const = 0;
  /// Chooses the payload for a slot owned by a corrupted node.
  virtual Payload act(SlotContext const &context) = 0;

  FaultOracle const &corrupt_set() const noexcept { return corrupt_; }

protected:
  explicit AdversaryStrategy(FaultOracle corrupt) : corrupt_{std::move(corrupt)} {}

private:
  FaultOracle corrupt_;
};

enum class ChannelMode
{
  kSelectiveBroadcast,  ///< fault-free slots are single broadcasts
  kPointToPoint,        ///< fault-free slots become one unicast per audience member
};

/// One execution. Owns the channel and the fault oracle; protocol code talks to
/// it only through run_round() and local(), so it never learns who is faulty.
class Simulation
{
public:
  Simulation(SystemConfig config, AdversaryStrategy &adversary, BitString source_input,
             ChannelMode mode = ChannelMode::kSelectiveBroadcast);

  SystemConfig const &config() const noexcept { return config_; }
  ChannelMode         mode() const noexcept { return mode_; }

  /// One synchronous round. Fault-free slots are fixed first; the adversary
  /// then fills corrupted slots having seen them (rushing).
  RoundDelivery run_round(std::string const &phase, std::vector<PlannedSlot> const &plan);

  /// Runs a node's local computation. An InvariantViolation raised while
  /// computing the honest shadow state of a corrupted node is absorbed and
  /// reported as false; for fault-free nodes it propagates.
  template <class F>
  bool local(NodeId node, F &&step)
  {
    try
    {
      step();
      return true;
    }
    catch (InvariantViolation const &)
    {
      if (faulty_.count(node) != 0)
      {
        return false;
      }
      throw;
    }
  }

  /// Drops corrupted nodes from a per-node output map.
  template <class V>
  std::map<NodeId, V> fault_free_only(std::map<NodeId, V> values) const
  {
    std::erase_if(values, [&](auto const &kv) { return faulty_.count(kv.first) != 0; });
    return values;
  }

  /// The value the fault-free nodes hold in common. Collective scheduling
  /// decisions (run dispute control or not) are taken from agreed values, so
  /// every fault-free node reaches the same one; a disagreement means the
  /// agreement subroutine is broken and raises InvariantViolation.
  template <class V>
  V common_decision(std::map<NodeId, V> const &per_node) const
  {
    V const *first = nullptr;
    for (auto const &[node, value] : per_node)
    {
      if (faulty_.count(node) != 0)
      {
        continue;
      }
      if (first == nullptr)
      {
        first = &value;
      }
      else if (!(value == *first))
      {
        throw InvariantViolation("fault-free nodes disagree on an agreed value");
      }
    }
    if (first == nullptr)
    {
      throw InvariantViolation("no fault-free node holds a decision");
    }
    return *first;
  }

  Channel const &channel() const noexcept { return channel_; }

private:
  SystemConfig        config_;
  AdversaryStrategy  &adversary_;
  FaultOracle         faulty_;
  BitString           source_input_;
  ChannelMode         mode_;
  Channel             channel_;
  Rng                 adversary_rng_;
};

}  // namespace sbb
