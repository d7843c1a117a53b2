#include "sbb/committee_bb.hpp"

#include "sbb/eig.hpp"
#include "sbb/errors.hpp"

#include <algorithm>

namespace sbb {

CommitteeLayout CommitteeLayout::make(SystemConfig const &config)
{
  config.validate_model();
  CommitteeLayout layout;
  for (auto const &node : all_nodes(config.n))
  {
    if (node.value <= 3 * config.t + 1)
    {
      layout.active.push_back(node);
    }
    else
    {
      layout.passive.push_back(node);
    }
    if (node.value <= 2 * config.t + 1)
    {
      layout.announcers.push_back(node);
    }
  }
  return layout;
}

bool CommitteeLayout::is_active(NodeId node) const
{
  return std::find(active.begin(), active.end(), node) != active.end();
}

std::map<NodeId, BitString> EigConsensusCore::run(Simulation &sim, CommitteeLayout const &layout,
                                                  std::map<NodeId, BitString> const &inputs, std::size_t value_bits)
{
  std::vector<EigRequest> requests;
  for (auto const &node : layout.active)
  {
    requests.push_back(EigRequest{node, inputs.at(node), value_bits});
  }
  StepInfo step;
  step.purpose         = EigPurpose::kCore;
  auto const decisions = run_eig_parallel(sim, requests, layout.active, {}, step, kPhaseCore);

  std::map<NodeId, BitString> out;
  for (auto const &node : layout.active)
  {
    std::map<BitString, std::size_t> counts;
    for (auto const &instance : decisions)
    {
      ++counts[instance.at(node)];
    }
    BitString decided(value_bits);
    for (auto const &[value, count] : counts)
    {
      if (2 * count > layout.active.size())
      {
        decided = value;
      }
    }
    out.emplace(node, std::move(decided));
  }
  return out;
}

BitString majority_vote(std::vector<BitString> const &values, int t)
{
  if (static_cast<int>(values.size()) != 2 * t + 1)
  {
    throw UsageError("majority_vote expects 2t + 1 values");
  }
  std::map<BitString, int> counts;
  for (auto const &v : values)
  {
    if (++counts[v] >= t + 1)
    {
      return v;
    }
  }
  throw ModelViolation("no announced value reaches t + 1 copies");
}

BbOutcome run_algorithm2(BitString const &x, SystemConfig const &config, AdversaryStrategy &strategy,
                         ChannelMode mode, ConsensusCore *core)
{
  CommitteeLayout const layout = CommitteeLayout::make(config);
  if (static_cast<std::int64_t>(x.size()) != config.L)
  {
    throw ConfigError("input has " + std::to_string(x.size()) + " bits, config says L=" + std::to_string(config.L));
  }
  EigConsensusCore fallback;
  if (core == nullptr)
  {
    core = &fallback;
  }
  std::size_t const width = x.size();
  Simulation        sim{config, strategy, x, mode};

  std::vector<NodeId> active_others(layout.active.begin() + 1, layout.active.end());
  StepInfo            step;
  step.kind            = Step::kCommitteeSource;
  auto const delivered = sim.run_round(kPhaseSource, {PlannedSlot{kSource, 0, step, x, active_others}});

  std::map<NodeId, BitString> inputs{{kSource, x}};
  for (auto const &node : active_others)
  {
    BitString const *bits = delivered.find(node, kSource);
    inputs.emplace(node, bits != nullptr && bits->size() == width ? *bits : BitString(width));
  }
  auto const decisions = core->run(sim, layout, inputs, width);

  step.kind = Step::kAnnounce;
  std::vector<PlannedSlot> plan;
  for (auto const &node : layout.announcers)
  {
    plan.push_back(PlannedSlot{node, 0, step, decisions.at(node), layout.passive});
  }
  auto const announced = sim.run_round(kPhaseAnnounce, plan);

  std::map<NodeId, BitString> outputs;
  for (auto const &node : layout.active)
  {
    if (node != kSource)
    {
      outputs.emplace(node, decisions.at(node));
    }
  }
  for (auto const &node : layout.passive)
  {
    std::vector<BitString> values;
    for (auto const &announcer : layout.announcers)
    {
      BitString const *bits = announced.find(node, announcer);
      values.push_back(bits != nullptr ? *bits : BitString{});
    }
    outputs.emplace(node, majority_vote(values, config.t));
  }

  BbOutcome outcome;
  outcome.n           = config.n;
  outcome.outputs     = sim.fault_free_only(std::move(outputs));
  outcome.meter       = sim.channel().meter();
  outcome.dispute_graph = DisputeGraph{config.t};
  outcome.phase_trace = sim.channel().trace();
  return outcome;
}

}  // namespace sbb
