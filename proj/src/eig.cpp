#include "sbb/eig.hpp"

#include "sbb/errors.hpp"

#include <algorithm>
#include <map>

namespace sbb {

EigLayout::EigLayout(NodeId source, std::vector<NodeId> participants, int t)
  : source_{source}, participants_{std::move(participants)}, t_{t}
{
  std::sort(participants_.begin(), participants_.end());
  int const m   = static_cast<int>(participants_.size());
  int const src = index_of(source_);
  if (src < 0)
  {
    throw ConfigError("EIG source is not a participant");
  }

  labels_.push_back({{src}});
  for (int level = 1; level < depth(); ++level)
  {
    auto const &prev = labels_.back();
    std::vector<std::vector<int>>         next;
    std::vector<std::vector<int>>         kids(prev.size(), std::vector<int>(m, -1));
    for (std::size_t i = 0; i < prev.size(); ++i)
    {
      for (int p = 0; p < m; ++p)
      {
        if (std::find(prev[i].begin(), prev[i].end(), p) != prev[i].end())
        {
          continue;
        }
        auto extended = prev[i];
        extended.push_back(p);
        kids[i][p] = static_cast<int>(next.size());
        next.push_back(std::move(extended));
      }
    }
    children_.push_back(std::move(kids));
    labels_.push_back(std::move(next));
  }
  // Leaves have no children.
  children_.emplace_back(labels_.back().size(), std::vector<int>(m, -1));

  for (auto const &level : labels_)
  {
    std::vector<std::vector<int>> per_node(m);
    for (std::size_t i = 0; i < level.size(); ++i)
    {
      for (int p = 0; p < m; ++p)
      {
        if (std::find(level[i].begin(), level[i].end(), p) == level[i].end())
        {
          per_node[p].push_back(static_cast<int>(i));
        }
      }
    }
    relay_.push_back(std::move(per_node));
  }
}

int EigLayout::index_of(NodeId node) const
{
  auto it = std::lower_bound(participants_.begin(), participants_.end(), node);
  return it != participants_.end() && *it == node ? static_cast<int>(it - participants_.begin()) : -1;
}

EigInstance::EigInstance(std::shared_ptr<EigLayout const> layout, std::size_t value_bits)
  : layout_{std::move(layout)}, width_{value_bits}
{
  auto const m = layout_->participants().size();
  trees_.resize(m);
  for (auto &tree : trees_)
  {
    for (int level = 1; level <= layout_->depth(); ++level)
    {
      tree.emplace_back(layout_->level_size(level), BitString(width_));
    }
  }
}

void EigInstance::set_source_value(BitString value)
{
  if (value.size() != width_)
  {
    throw UsageError("EIG source value has the wrong width");
  }
  trees_.at(layout_->index_of(layout_->source()))[0][0] = std::move(value);
}

BitString EigInstance::outgoing(NodeId node, int round) const
{
  int const p = layout_->index_of(node);
  if (p < 0 || round < 1 || round > layout_->depth())
  {
    return {};
  }
  auto const &tree = trees_[p];
  if (round == 1)
  {
    return node == layout_->source() ? tree[0][0] : BitString{};
  }
  BitString out;
  for (int i : layout_->relay_set(round - 1, p))
  {
    out.append(tree[round - 2][i]);
  }
  return out;
}

void EigInstance::absorb(NodeId receiver, NodeId sender, int round, BitString const *payload)
{
  int const r = layout_->index_of(receiver);
  int const s = layout_->index_of(sender);
  if (r < 0 || s < 0 || r == s)
  {
    return;
  }
  auto &tree = trees_[r];
  if (round == 1)
  {
    if (sender == layout_->source())
    {
      tree[0][0] = payload != nullptr && payload->size() == width_ ? *payload : BitString(width_);
    }
    return;
  }
  auto const &relays = layout_->relay_set(round - 1, s);
  bool const  valid  = payload != nullptr && payload->size() == relays.size() * width_;
  for (std::size_t j = 0; j < relays.size(); ++j)
  {
    int const target        = layout_->child(round - 1, relays[j], s);
    tree[round - 1][target] = valid ? payload->slice(j * width_, width_) : BitString(width_);
  }
}

void EigInstance::self_relay(NodeId node, int round)
{
  int const p = layout_->index_of(node);
  if (p < 0 || round < 2)
  {
    return;
  }
  auto &tree = trees_[p];
  for (int i : layout_->relay_set(round - 1, p))
  {
    tree[round - 1][layout_->child(round - 1, i, p)] = tree[round - 2][i];
  }
}

BitString EigInstance::decide(NodeId node) const
{
  int const p = layout_->index_of(node);
  if (p < 0)
  {
    throw UsageError("decide: node is not a participant");
  }
  int const m        = static_cast<int>(layout_->participants().size());
  auto      resolved = trees_[p].back();
  for (int level = layout_->depth() - 1; level >= 1; --level)
  {
    std::vector<BitString> current(layout_->level_size(level));
    for (std::size_t i = 0; i < current.size(); ++i)
    {
      std::map<BitString, int> votes;
      int                      children = 0;
      for (int k = 0; k < m; ++k)
      {
        int const c = layout_->child(level, i, k);
        if (c >= 0)
        {
          ++votes[resolved[c]];
          ++children;
        }
      }
      current[i] = BitString(width_);
      for (auto const &[value, count] : votes)
      {
        if (2 * count > children)
        {
          current[i] = value;
        }
      }
    }
    resolved = std::move(current);
  }
  return resolved.at(0);
}

std::vector<std::map<NodeId, BitString>> run_eig_parallel(Simulation &sim, std::vector<EigRequest> const &requests,
                                                          std::vector<NodeId> const &participants,
                                                          std::set<NodeId> const &excluded, StepInfo const &step,
                                                          std::string const &phase)
{
  int const t = sim.config().t;
  std::vector<EigInstance> instances;
  instances.reserve(requests.size());
  for (auto const &req : requests)
  {
    auto layout = std::make_shared<EigLayout const>(req.source, participants, t);
    instances.emplace_back(std::move(layout), req.value_bits);
    instances.back().set_source_value(req.value);
  }

  for (int round = 1; round <= t + 1; ++round)
  {
    std::vector<PlannedSlot> plan;
    for (std::size_t topic = 0; topic < instances.size(); ++topic)
    {
      auto const &inst = instances[topic];
      for (auto const &node : inst.layout().participants())
      {
        if (excluded.count(node) != 0)
        {
          continue;
        }
        BitString payload = inst.outgoing(node, round);
        if (payload.empty())
        {
          continue;
        }
        StepInfo info        = step;
        info.kind            = Step::kEig;
        info.instance_source = inst.layout().source();
        info.eig_round       = round;
        std::vector<NodeId> audience;
        for (auto const &other : inst.layout().participants())
        {
          if (other != node)
          {
            audience.push_back(other);
          }
        }
        plan.push_back(PlannedSlot{node, static_cast<int>(topic), info, std::move(payload), std::move(audience)});
      }
    }

    RoundDelivery const delivery = sim.run_round(phase, plan);

    for (std::size_t topic = 0; topic < instances.size(); ++topic)
    {
      auto &inst = instances[topic];
      for (auto const &sender : inst.layout().participants())
      {
        bool const scheduled = excluded.count(sender) == 0 && (round > 1 || sender == inst.layout().source());
        for (auto const &receiver : inst.layout().participants())
        {
          if (receiver == sender)
          {
            continue;
          }
          BitString const *payload =
              scheduled ? delivery.find(receiver, sender, static_cast<int>(topic)) : nullptr;
          inst.absorb(receiver, sender, round, payload);
        }
        inst.self_relay(sender, round);
      }
    }
  }

  std::vector<std::map<NodeId, BitString>> decisions;
  for (auto const &inst : instances)
  {
    std::map<NodeId, BitString> per_node;
    for (auto const &node : inst.layout().participants())
    {
      per_node.emplace(node, inst.decide(node));
    }
    decisions.push_back(std::move(per_node));
  }
  return decisions;
}

std::map<NodeId, BitString> eig_broadcast(Simulation &sim, NodeId source, BitString const &value,
                                          std::vector<NodeId> const &participants, std::string const &phase)
{
  int const t = sim.config().t;
  if (static_cast<int>(participants.size()) < 3 * t + 1)
  {
    throw ConfigError("EIG needs at least 3t + 1 participants");
  }
  if (std::find(participants.begin(), participants.end(), source) == participants.end())
  {
    throw ConfigError("EIG source is not a participant");
  }
  StepInfo step;
  step.purpose = EigPurpose::kStandalone;
  return run_eig_parallel(sim, {EigRequest{source, value, value.size()}}, participants, {}, step, phase).front();
}

}  // namespace sbb
