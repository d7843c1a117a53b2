#pragma once

#include "sbb/bit_string.hpp"
#include "sbb/config.hpp"
#include "sbb/simulation.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace sbb {

/// Label structure of an exponential information gathering tree: level l holds
/// every sequence of l distinct participants that starts at the source.
class EigLayout
{
public:
  EigLayout(NodeId source, std::vector<NodeId> participants, int t);

  NodeId                     source() const noexcept { return source_; }
  std::vector<NodeId> const &participants() const noexcept { return participants_; }
  int                        depth() const noexcept { return t_ + 1; }
  /// Participant's position in participants(), or -1.
  int index_of(NodeId node) const;

  std::size_t level_size(int level) const { return labels_.at(level - 1).size(); }
  std::vector<int> const &label(int level, std::size_t i) const { return labels_.at(level - 1).at(i); }
  /// Index at level + 1 of label(level, i) extended by participant p, or -1 when p is on the label.
  int child(int level, std::size_t i, int p) const { return children_.at(level - 1).at(i).at(p); }
  /// Labels at `level` that participant p relays in round level + 1, in canonical order.
  std::vector<int> const &relay_set(int level, int p) const { return relay_.at(level - 1).at(p); }

private:
  NodeId                                     source_;
  std::vector<NodeId>                        participants_;
  int                                        t_;
  std::vector<std::vector<std::vector<int>>> labels_;    // [level-1][i] -> participant indices
  std::vector<std::vector<std::vector<int>>> children_;  // [level-1][i][p]
  std::vector<std::vector<std::vector<int>>> relay_;     // [level-1][p] -> label indices
};

/// One t+1 round Byzantine Broadcast over fixed-width bit-string values.
/// Missing or malformed relays read as the all-zeros default, and recursive
/// majority falls back to the default when no value has a strict majority.
class EigInstance
{
public:
  EigInstance(std::shared_ptr<EigLayout const> layout, std::size_t value_bits);

  EigLayout const &layout() const noexcept { return *layout_; }
  std::size_t      value_bits() const noexcept { return width_; }

  void set_source_value(BitString value);

  /// What node sends in `round` (1-based); empty when it has nothing to relay.
  BitString outgoing(NodeId node, int round) const;
  /// Stores what receiver got from sender in `round`; nullptr means nothing arrived.
  void absorb(NodeId receiver, NodeId sender, int round, BitString const *payload);
  /// Stores a node's own relay in its own tree (a node hears itself).
  void self_relay(NodeId node, int round);

  BitString decide(NodeId node) const;

private:
  std::shared_ptr<EigLayout const>        layout_;
  std::size_t                             width_;
  std::vector<std::vector<std::vector<BitString>>> trees_;  // [participant][level-1][label]
};

struct EigRequest
{
  NodeId    source;
  BitString value;  ///< the source's own input
  std::size_t value_bits = 0;
};

/// Runs several EIG instances in lockstep over `participants`. Nodes in
/// `excluded` get no slots. Slot topics are the request indices. Returns each
/// instance's decision for every participant (corrupted ones included).
std::vector<std::map<NodeId, BitString>> run_eig_parallel(Simulation &sim, std::vector<EigRequest> const &requests,
                                                          std::vector<NodeId> const &participants,
                                                          std::set<NodeId> const &excluded, StepInfo const &step,
                                                          std::string const &phase);

/// Single Byzantine Broadcast of `value` from `source`. Throws ConfigError when
/// participants has fewer than 3t + 1 nodes or does not contain the source.
std::map<NodeId, BitString> eig_broadcast(Simulation &sim, NodeId source, BitString const &value,
                                          std::vector<NodeId> const &participants,
                                          std::string const &phase = "EIG");

}  // namespace sbb
