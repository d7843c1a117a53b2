#include "sbb/bb_outcome.hpp"

namespace sbb {

std::string to_string(BbProperty property)
{
  switch (property)
  {
  case BbProperty::kNone:
    return "none";
  case BbProperty::kTermination:
    return "termination";
  case BbProperty::kConsistency:
    return "consistency";
  case BbProperty::kValidity:
    return "validity";
  }
  return "unknown";
}

BbVerdict check_bb_properties(BbOutcome const &outcome, BitString const &x, FaultOracle const &faulty)
{
  BbVerdict verdict;
  std::vector<NodeId> fault_free;
  for (auto const &peer : peers(outcome.n))
  {
    if (faulty.count(peer) == 0)
    {
      fault_free.push_back(peer);
    }
  }

  for (auto const &peer : fault_free)
  {
    if (outcome.outputs.count(peer) == 0)
    {
      verdict.pass     = false;
      verdict.property = BbProperty::kTermination;
      verdict.witnesses.push_back(peer);
    }
  }
  if (!verdict.pass)
  {
    verdict.reason = "fault-free peer produced no output";
    return verdict;
  }
  if (fault_free.empty())
  {
    return verdict;
  }

  BitString const &common = outcome.outputs.at(fault_free.front());
  for (auto const &peer : fault_free)
  {
    if (outcome.outputs.at(peer) != common)
    {
      verdict.pass      = false;
      verdict.property  = BbProperty::kConsistency;
      verdict.witnesses = {fault_free.front(), peer};
      verdict.reason    = "outputs differ: " + common.to_string() + " vs " + outcome.outputs.at(peer).to_string();
      return verdict;
    }
  }

  if (faulty.count(kSource) == 0 && common != x)
  {
    verdict.pass      = false;
    verdict.property  = BbProperty::kValidity;
    verdict.witnesses = {fault_free.front()};
    verdict.reason    = "fault-free source input " + x.to_string() + " but peers output " + common.to_string();
  }
  return verdict;
}

}  // namespace sbb
