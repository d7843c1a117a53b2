#pragma once

#include "sbb/config.hpp"

#include <set>
#include <utility>
#include <vector>

namespace sbb {

/// Unordered node pair, stored with the smaller id first.
using DisputePair = std::pair<NodeId, NodeId>;

DisputePair make_pair_key(NodeId a, NodeId b);

/// Publicly agreed "in dispute" pairs. A node in dispute with more than t
/// others is identified as faulty.
class DisputeGraph
{
public:
  DisputeGraph() = default;
  explicit DisputeGraph(int t) : t_{t} {}

  /// Returns true when the pair was not present before. Self-pairs are rejected.
  bool add(NodeId a, NodeId b);
  bool contains(NodeId a, NodeId b) const;

  int                 degree(NodeId v) const;
  std::set<NodeId>    disputes_of(NodeId v) const;
  std::set<NodeId>    identified_faulty() const;
  bool                is_identified(NodeId v) const { return degree(v) > t_; }
  std::set<DisputePair> const &pairs() const noexcept { return pairs_; }

  friend bool operator==(DisputeGraph const &, DisputeGraph const &) = default;

private:
  int                   t_ = 0;
  std::set<DisputePair> pairs_;
};

}  // namespace sbb
