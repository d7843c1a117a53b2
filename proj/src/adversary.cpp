#include "sbb/adversary.hpp"

#include "sbb/errors.hpp"
#include "sbb/rng.hpp"

#include <algorithm>

namespace sbb {

namespace {

std::vector<std::string> const kNames{"honest",      "crash_silent",     "equivocating_source", "symbol_corruptor",
                                      "detection_liar", "claim_liar", "randomized_byzantine"};

/// A nonempty strict subset of `nodes`, or all of them when there is only one.
std::set<NodeId> split(std::vector<NodeId> const &nodes, Rng &rng)
{
  std::set<NodeId> out;
  if (nodes.size() < 2)
  {
    out.insert(nodes.begin(), nodes.end());
    return out;
  }
  while (out.empty() || out.size() == nodes.size())
  {
    out.clear();
    for (auto const &node : nodes)
    {
      if (rng.chance(1, 2))
      {
        out.insert(node);
      }
    }
  }
  return out;
}

BitString flip_one(BitString bits, Rng &rng)
{
  if (!bits.empty())
  {
    bits.flip(rng.below(bits.size()));
  }
  return bits;
}

Payload two_faced(SlotContext const &ctx, std::set<NodeId> const &targets, BitString const &other)
{
  Selective s;
  for (auto const &node : ctx.audience)
  {
    s.per_receiver[node] = targets.count(node) != 0 ? other : ctx.prescribed;
  }
  return s;
}

bool own_instance_start(SlotContext const &ctx, EigPurpose purpose)
{
  return ctx.step.kind == Step::kEig && ctx.step.purpose == purpose && ctx.step.instance_source == ctx.sender &&
         ctx.step.eig_round == 1;
}

class CrashSilent final : public ScriptedStrategy
{
public:
  using ScriptedStrategy::ScriptedStrategy;
  Payload act(SlotContext const &) override { return Broadcast{}; }
};

class EquivocatingSource final : public ScriptedStrategy
{
public:
  EquivocatingSource(FaultOracle corrupt, StrategyOptions const &options)
    : ScriptedStrategy{"equivocating_source", std::move(corrupt)}
    , alternate_{options.alternate}
    , receivers_{options.alternate_receivers}
  {
  }

  Payload act(SlotContext const &ctx) override
  {
    bool const source_step = ctx.step.kind == Step::kDbSource || ctx.step.kind == Step::kCommitteeSource;
    if (ctx.sender != kSource || !(source_step || (ctx.step.kind == Step::kEig && ctx.step.instance_source == kSource &&
                                                   ctx.step.eig_round == 1)))
    {
      return Broadcast{ctx.prescribed};
    }
    BitString other = alternate_ && source_step && alternate_->size() == ctx.prescribed.size()
                          ? *alternate_
                          : flip_one(ctx.prescribed, ctx.rng);
    auto const targets = receivers_ && source_step ? *receivers_ : split(ctx.audience, ctx.rng);
    return two_faced(ctx, targets, other);
  }

private:
  std::optional<BitString>        alternate_;
  std::optional<std::set<NodeId>> receivers_;
};

class SymbolCorruptor final : public ScriptedStrategy
{
public:
  SymbolCorruptor(std::string name, FaultOracle corrupt, bool consistent, bool lie_in_claims)
    : ScriptedStrategy{std::move(name), std::move(corrupt)}, consistent_{consistent}, lie_in_claims_{lie_in_claims}
  {
  }

  Payload act(SlotContext const &ctx) override
  {
    if (ctx.step.kind == Step::kDbRelay && !ctx.prescribed.empty())
    {
      BitString const wrong = flip_one(ctx.prescribed, ctx.rng);
      if (consistent_)
      {
        return Broadcast{wrong};
      }
      return two_faced(ctx, split(ctx.audience, ctx.rng), wrong);
    }
    if (lie_in_claims_ && own_instance_start(ctx, EigPurpose::kDisputeClaim))
    {
      BitString lie = ctx.prescribed;
      auto const flips = 1 + ctx.rng.below(3);
      for (std::uint64_t k = 0; k < flips; ++k)
      {
        lie = flip_one(std::move(lie), ctx.rng);
      }
      if (ctx.rng.chance(1, 2))
      {
        return Broadcast{lie};
      }
      return two_faced(ctx, split(ctx.audience, ctx.rng), lie);
    }
    return Broadcast{ctx.prescribed};
  }

private:
  bool consistent_;
  bool lie_in_claims_;
};

class DetectionLiar final : public ScriptedStrategy
{
public:
  using ScriptedStrategy::ScriptedStrategy;

  Payload act(SlotContext const &ctx) override
  {
    if (!own_instance_start(ctx, EigPurpose::kDetection))
    {
      return Broadcast{ctx.prescribed};
    }
    if (ctx.rng.chance(1, 2))
    {
      return Broadcast{BitString(1, true)};
    }
    auto const ones = split(ctx.audience, ctx.rng);
    Selective  s;
    for (auto const &node : ctx.audience)
    {
      s.per_receiver[node] = BitString(1, ones.count(node) != 0);
    }
    return s;
  }
};

class RandomizedByzantine final : public ScriptedStrategy
{
public:
  RandomizedByzantine(FaultOracle corrupt, int n) : ScriptedStrategy{"randomized_byzantine", std::move(corrupt)}, n_{n} {}

  Payload act(SlotContext const &ctx) override
  {
    Selective s;
    for (auto const &node : all_nodes(n_))
    {
      if (node == ctx.sender)
      {
        continue;
      }
      switch (ctx.rng.below(5))
      {
      case 0:
        break;
      case 1:
        s.per_receiver[node] = ctx.prescribed;
        break;
      case 2:
        s.per_receiver[node] = flip_one(ctx.prescribed, ctx.rng);
        break;
      case 3:
        s.per_receiver[node] = ctx.rng.bits(ctx.prescribed.size());
        break;
      default:
        s.per_receiver[node] = ctx.rng.bits(ctx.rng.below(ctx.prescribed.size() + 8));
        break;
      }
    }
    return s;
  }

private:
  int n_;
};

std::vector<NodeId> shuffled(std::vector<NodeId> nodes, Rng &rng)
{
  for (std::size_t i = nodes.size(); i > 1; --i)
  {
    std::swap(nodes[i - 1], nodes[rng.below(i)]);
  }
  return nodes;
}

/// `count` nodes from the pool. The source is either forced in or kept out.
FaultOracle draw(std::vector<NodeId> pool, int count, Rng &rng, bool with_source)
{
  FaultOracle out;
  if (with_source)
  {
    out.insert(kSource);
  }
  std::erase(pool, kSource);
  for (auto const &node : shuffled(std::move(pool), rng))
  {
    if (static_cast<int>(out.size()) >= count)
    {
      break;
    }
    out.insert(node);
  }
  return out;
}

}  // namespace

std::vector<std::string> strategy_names()
{
  return kNames;
}

std::unique_ptr<AdversaryStrategy> make_strategy(std::string const &name, SystemConfig const &config,
                                                 StrategyOptions const &options)
{
  if (std::find(kNames.begin(), kNames.end(), name) == kNames.end())
  {
    throw ConfigError("unknown strategy '" + name + "'");
  }

  std::vector<NodeId> pool = options.pool.empty() ? all_nodes(config.n) : options.pool;
  for (auto const &node : pool)
  {
    if (node.value < 1 || node.value > config.n)
    {
      throw ConfigError("strategy pool names a node outside 1..n");
    }
  }
  bool const in_pool = std::find(pool.begin(), pool.end(), kSource) != pool.end();

  Rng         rng{mix_seed(config.seed ^ 0xc0ffeeULL)};
  bool const  needs_source = name == "equivocating_source";
  bool const  peers_only   = name == "symbol_corruptor" || name == "detection_liar" || name == "claim_liar";
  FaultOracle corrupt;
  if (options.corrupt)
  {
    corrupt = *options.corrupt;
    if (needs_source && corrupt.count(kSource) == 0)
    {
      throw ConfigError(name + " needs the source in its corrupt set");
    }
  }
  else if (name != "honest" && config.t > 0)
  {
    if (needs_source && !in_pool)
    {
      throw ConfigError(name + " needs the source in its pool");
    }
    if (peers_only || needs_source)
    {
      corrupt = draw(pool, config.t, rng, needs_source);
    }
    else
    {
      for (auto const &node : shuffled(pool, rng))
      {
        if (static_cast<int>(corrupt.size()) == config.t)
        {
          break;
        }
        corrupt.insert(node);
      }
    }
  }
  if (static_cast<int>(corrupt.size()) > config.t)
  {
    throw ConfigError("corrupt set larger than t");
  }

  if (name == "honest")
  {
    return std::make_unique<ScriptedStrategy>(name, FaultOracle{});
  }
  if (name == "crash_silent")
  {
    return std::make_unique<CrashSilent>(name, std::move(corrupt));
  }
  if (name == "equivocating_source")
  {
    return std::make_unique<EquivocatingSource>(std::move(corrupt), options);
  }
  if (name == "symbol_corruptor")
  {
    return std::make_unique<SymbolCorruptor>(name, std::move(corrupt), options.consistent_lie, false);
  }
  if (name == "detection_liar")
  {
    return std::make_unique<DetectionLiar>(name, std::move(corrupt));
  }
  if (name == "claim_liar")
  {
    return std::make_unique<SymbolCorruptor>(name, std::move(corrupt), false, true);
  }
  return std::make_unique<RandomizedByzantine>(std::move(corrupt), config.n);
}

std::vector<std::unique_ptr<AdversaryStrategy>> strategy_catalog(SystemConfig const &config,
                                                                 StrategyOptions const &options)
{
  std::vector<std::unique_ptr<AdversaryStrategy>> out;
  for (auto const &name : kNames)
  {
    out.push_back(make_strategy(name, config, options));
  }
  return out;
}

}  // namespace sbb
