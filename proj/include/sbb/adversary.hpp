#pragma once

#include "sbb/config.hpp"
#include "sbb/simulation.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sbb {

/// Knobs shared by the catalog strategies. Anything left unset is drawn from
/// the strategy's own seeded stream.
struct StrategyOptions
{
  /// Explicit corrupt set; must respect the strategy's shape (e.g. contain the source).
  std::optional<FaultOracle> corrupt;
  /// Nodes the strategy may corrupt. Empty means every node.
  std::vector<NodeId> pool;
  /// symbol_corruptor: send the same wrong symbol to every receiver.
  bool consistent_lie = false;
  /// equivocating_source: the second value and who gets it.
  std::optional<BitString>        alternate;
  std::optional<std::set<NodeId>> alternate_receivers;
};

/// Corrupted nodes follow the protocol; used as the base for the catalog.
class ScriptedStrategy : public AdversaryStrategy
{
public:
  ScriptedStrategy(std::string name, FaultOracle corrupt) : AdversaryStrategy{std::move(corrupt)}, name_{std::move(name)} {}

  std::string name() const override { return name_; }
  Payload     act(SlotContext const &context) override { return Broadcast{context.prescribed}; }

private:
  std::string name_;
};

std::vector<std::string> strategy_names();

/// Builds a catalog strategy. Corrupt sets are drawn deterministically from
/// config.seed. Throws ConfigError for unknown names or bad options.
std::unique_ptr<AdversaryStrategy> make_strategy(std::string const &name, SystemConfig const &config,
                                                 StrategyOptions const &options = {});

/// One instance of every catalog strategy for the given config.
std::vector<std::unique_ptr<AdversaryStrategy>> strategy_catalog(SystemConfig const &config,
                                                                 StrategyOptions const &options = {});

}  // namespace sbb
