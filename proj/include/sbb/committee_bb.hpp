#pragma once

// Committee broadcast: the source broadcasts x once, the 3t + 1 active nodes
// agree on what they got, 2t + 1 of them announce the result, and the passive
// nodes take the majority of the announcements without ever transmitting.

#include "sbb/bb_outcome.hpp"
#include "sbb/simulation.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sbb {

inline constexpr char const *kPhaseSource   = "SRC";
inline constexpr char const *kPhaseCore     = "CORE";
inline constexpr char const *kPhaseAnnounce = "ANN";

struct CommitteeLayout
{
  std::vector<NodeId> active;      ///< lowest 3t + 1 ids, source first
  std::vector<NodeId> announcers;  ///< lowest 2t + 1 ids
  std::vector<NodeId> passive;

  /// Throws ConfigError when n < 3t + 1.
  static CommitteeLayout make(SystemConfig const &config);

  bool is_active(NodeId node) const;
};

/// Consensus among the active nodes on their received values.
class ConsensusCore
{
public:
  virtual ~ConsensusCore() = default;

  virtual std::string name() const = 0;
  /// inputs holds one value per active node (corrupted ones included, as their
  /// honest shadow). Returns a decision per active node.
  virtual std::map<NodeId, BitString> run(Simulation &sim, CommitteeLayout const &layout,
                                          std::map<NodeId, BitString> const &inputs, std::size_t value_bits) = 0;
};

/// Every active node EIG-broadcasts its input among the active set; each then
/// takes the strict majority of the agreed vector, all-zeros without one.
class EigConsensusCore final : public ConsensusCore
{
public:
  std::string                 name() const override { return "eig_majority"; }
  std::map<NodeId, BitString> run(Simulation &sim, CommitteeLayout const &layout,
                                  std::map<NodeId, BitString> const &inputs, std::size_t value_bits) override;
};

/// The value occurring at least t + 1 times among 2t + 1 announcements.
/// Throws UsageError for the wrong count and ModelViolation when no value
/// reaches t + 1.
BitString majority_vote(std::vector<BitString> const &values, int t);

BbOutcome run_algorithm2(BitString const &x, SystemConfig const &config, AdversaryStrategy &strategy,
                         ChannelMode mode = ChannelMode::kSelectiveBroadcast, ConsensusCore *core = nullptr);

}  // namespace sbb
