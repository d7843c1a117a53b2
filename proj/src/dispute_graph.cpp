#include "sbb/dispute_graph.hpp"

#include "sbb/errors.hpp"

namespace sbb {

DisputePair make_pair_key(NodeId a, NodeId b)
{
  return a < b ? DisputePair{a, b} : DisputePair{b, a};
}

bool DisputeGraph::add(NodeId a, NodeId b)
{
  if (a == b)
  {
    throw UsageError("a node cannot be in dispute with itself");
  }
  return pairs_.insert(make_pair_key(a, b)).second;
}

bool DisputeGraph::contains(NodeId a, NodeId b) const
{
  return a != b && pairs_.count(make_pair_key(a, b)) != 0;
}

int DisputeGraph::degree(NodeId v) const
{
  int d = 0;
  for (auto const &[a, b] : pairs_)
  {
    d += (a == v || b == v) ? 1 : 0;
  }
  return d;
}

std::set<NodeId> DisputeGraph::disputes_of(NodeId v) const
{
  std::set<NodeId> out;
  for (auto const &[a, b] : pairs_)
  {
    if (a == v)
    {
      out.insert(b);
    }
    else if (b == v)
    {
      out.insert(a);
    }
  }
  return out;
}

std::set<NodeId> DisputeGraph::identified_faulty() const
{
  std::set<NodeId> out;
  for (auto const &[a, b] : pairs_)
  {
    if (is_identified(a))
    {
      out.insert(a);
    }
    if (is_identified(b))
    {
      out.insert(b);
    }
  }
  return out;
}

}  // namespace sbb
