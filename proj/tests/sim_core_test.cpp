#include "sbb/adversary.hpp"
#include "sbb/bb_outcome.hpp"
#include "sbb/channel.hpp"
#include "sbb/dispute_graph.hpp"
#include "sbb/errors.hpp"
#include "sbb/simulation.hpp"

#include <gtest/gtest.h>

using namespace sbb;

namespace {

BitString bits(char const *s)
{
  return BitString::from_string(s);
}

/// Corrupted nodes send a fixed payload per receiver in every slot.
class FixedSelective final : public AdversaryStrategy
{
public:
  FixedSelective(FaultOracle corrupt, Selective payload) : AdversaryStrategy{std::move(corrupt)}, payload_{std::move(payload)} {}
  std::string name() const override { return "fixed"; }
  Payload     act(SlotContext const &) override { return payload_; }

private:
  Selective payload_;
};

}  // namespace

TEST(Channel, BroadcastFromFaultFreeNode)
{
  TrafficMeter meter;
  auto const   out = channel_deliver(SlotTransmission{NodeId{2}, 0, Broadcast{bits("101101")}}, 4, {}, meter, "X");
  ASSERT_EQ(out.size(), 3U);
  for (int r : {1, 3, 4})
  {
    EXPECT_EQ(out.at(NodeId{r}).sender, NodeId{2});
    EXPECT_EQ(out.at(NodeId{r}).bits, bits("101101"));
  }
  EXPECT_EQ(meter.honest_messages(), 1U);
  EXPECT_EQ(meter.honest_bits(), 6U);
  EXPECT_EQ(meter.adversary_messages(), 0U);
}

TEST(Channel, SelectiveFromFaultyNode)
{
  TrafficMeter meter;
  Selective    s;
  s.per_receiver = {{NodeId{2}, bits("0")}, {NodeId{3}, bits("1")}, {NodeId{4}, bits("1")}};
  auto const out = channel_deliver(SlotTransmission{kSource, 0, s}, 4, {kSource}, meter, "X");
  EXPECT_EQ(out.at(NodeId{2}).bits, bits("0"));
  EXPECT_EQ(out.at(NodeId{3}).bits, bits("1"));
  EXPECT_EQ(out.at(NodeId{4}).bits, bits("1"));
  EXPECT_EQ(meter.adversary_messages(), 3U);
  EXPECT_EQ(meter.adversary_bits(), 3U);
  EXPECT_EQ(meter.honest_messages(), 0U);
}

TEST(Channel, SilenceIsFree)
{
  TrafficMeter meter;
  auto const   out = channel_deliver(SlotTransmission{NodeId{3}, 0, Broadcast{}}, 4, {}, meter, "X");
  EXPECT_EQ(out.size(), 3U);
  EXPECT_EQ(meter.totals(), TrafficCounters{});
}

TEST(Channel, FaultFreeSelectiveIsAModelViolation)
{
  TrafficMeter meter;
  Selective    s;
  s.per_receiver = {{NodeId{2}, bits("0")}};
  EXPECT_THROW(channel_deliver(SlotTransmission{kSource, 0, s}, 4, {}, meter, "X"), ModelViolation);
  s.per_receiver = {{NodeId{9}, bits("0")}};
  EXPECT_THROW(channel_deliver(SlotTransmission{kSource, 0, s}, 4, {kSource}, meter, "X"), ModelViolation);
}

TEST(Channel, UnicastCountsOneMessagePerReceiver)
{
  TrafficMeter meter;
  auto const   out =
      channel_deliver(SlotTransmission{NodeId{2}, 0, Unicast{{NodeId{1}, NodeId{3}}, bits("11")}}, 4, {}, meter, "X");
  EXPECT_EQ(out.at(NodeId{1}).bits, bits("11"));
  EXPECT_TRUE(out.at(NodeId{4}).bits.empty());
  EXPECT_EQ(meter.honest_messages(), 2U);
  EXPECT_EQ(meter.honest_bits(), 4U);
}

TEST(Channel, RoundsNumberSlotsAndPhasesSumToTotals)
{
  Channel ch{4, {NodeId{4}}};
  ch.submit(SlotTransmission{NodeId{1}, 0, Broadcast{bits("111")}}, "A");
  ch.submit(SlotTransmission{NodeId{4}, 0, Selective{{{NodeId{1}, bits("0")}, {NodeId{2}, bits("01")}}}}, "A");
  auto const d1 = ch.close_round();
  ch.submit(SlotTransmission{NodeId{2}, 3, Broadcast{bits("1")}}, "B");
  auto const d2 = ch.close_round();

  ASSERT_NE(d1.find(NodeId{2}, NodeId{4}), nullptr);
  EXPECT_EQ(*d1.find(NodeId{2}, NodeId{4}), bits("01"));
  EXPECT_EQ(d1.find(NodeId{3}, NodeId{4}), nullptr);
  EXPECT_EQ(d1.find(NodeId{1}, NodeId{1}), nullptr);
  EXPECT_NE(d2.find(NodeId{1}, NodeId{2}, 3), nullptr);
  EXPECT_EQ(d2.find(NodeId{1}, NodeId{2}, 0), nullptr);

  auto const &trace = ch.trace();
  ASSERT_EQ(trace.size(), 3U);
  EXPECT_EQ(trace[0].round, 1);
  EXPECT_EQ(trace[1].slot, 1);
  EXPECT_EQ(trace[1].kind, "selective");
  EXPECT_EQ(trace[2].round, 2);
  EXPECT_EQ(trace[2].to_json(), R"({"round":2,"slot":0,"sender":2,"kind":"broadcast","bytes":1,"bits":1,"phase":"B"})");

  TrafficCounters sum;
  for (auto const &[_, c] : ch.meter().per_phase())
  {
    sum.honest_messages += c.honest_messages;
    sum.honest_bits += c.honest_bits;
    sum.adversary_messages += c.adversary_messages;
    sum.adversary_bits += c.adversary_bits;
  }
  EXPECT_EQ(sum, ch.meter().totals());
  EXPECT_EQ(ch.meter().honest_bits(), 4U);
  EXPECT_EQ(ch.meter().adversary_messages(), 2U);
}

TEST(DisputeGraph, IdentifiesNodesWithTooManyDisputes)
{
  DisputeGraph g{1};
  EXPECT_TRUE(g.add(NodeId{1}, NodeId{3}));
  EXPECT_FALSE(g.add(NodeId{3}, NodeId{1}));
  EXPECT_TRUE(g.contains(NodeId{3}, NodeId{1}));
  EXPECT_TRUE(g.identified_faulty().empty());
  g.add(NodeId{1}, NodeId{4});
  EXPECT_EQ(g.degree(NodeId{1}), 2);
  EXPECT_EQ(g.identified_faulty(), (std::set<NodeId>{NodeId{1}}));
  EXPECT_THROW(g.add(NodeId{2}, NodeId{2}), UsageError);
}

TEST(BbProperties, Examples)
{
  BitString const x = bits("1010");
  BbOutcome       ok;
  ok.n = 4;
  ok.outputs = {{NodeId{2}, x}, {NodeId{3}, x}, {NodeId{4}, x}};
  EXPECT_TRUE(check_bb_properties(ok, x, {}).pass);

  BbOutcome faulty_source;
  faulty_source.n = 4;
  faulty_source.outputs = {{NodeId{2}, bits("0001")}, {NodeId{3}, bits("0001")}, {NodeId{4}, bits("0001")}};
  EXPECT_TRUE(check_bb_properties(faulty_source, x, {kSource}).pass);
  auto const invalid = check_bb_properties(faulty_source, x, {});
  EXPECT_FALSE(invalid.pass);
  EXPECT_EQ(invalid.property, BbProperty::kValidity);

  BbOutcome split;
  split.n = 4;
  split.outputs   = {{NodeId{2}, bits("0001")}, {NodeId{3}, bits("0011")}};
  auto const bad  = check_bb_properties(split, x, {kSource, NodeId{4}});
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.property, BbProperty::kConsistency);
  EXPECT_EQ(bad.witnesses, (std::vector<NodeId>{NodeId{2}, NodeId{3}}));

  BbOutcome missing;
  missing.n = 4;
  missing.outputs  = {{NodeId{2}, x}, {NodeId{3}, x}};
  auto const unterm = check_bb_properties(missing, x, {});
  EXPECT_EQ(unterm.property, BbProperty::kTermination);
}

TEST(Simulation, AttributionAndRushing)
{
  SystemConfig const cfg = SystemConfig::make(4, 1, 3, 6, 1);
  Selective          s;
  s.per_receiver = {{NodeId{1}, bits("1")}, {NodeId{2}, bits("0")}};
  FixedSelective adversary{{NodeId{3}}, s};
  Simulation     sim{cfg, adversary, bits("000000")};

  StepInfo step;
  auto const d = sim.run_round("T", {PlannedSlot{NodeId{1}, 0, step, bits("11"), {}},
                                     PlannedSlot{NodeId{3}, 0, step, bits("00"), {}}});
  for (auto const &node : all_nodes(4))
  {
    for (auto const &r : d.inbox(node))
    {
      EXPECT_NE(r.sender, node);
    }
  }
  EXPECT_EQ(*d.find(NodeId{2}, NodeId{1}), bits("11"));
  EXPECT_EQ(*d.find(NodeId{2}, NodeId{3}), bits("0"));
  EXPECT_EQ(*d.find(NodeId{1}, NodeId{3}), bits("1"));
  EXPECT_EQ(d.find(NodeId{4}, NodeId{3}), nullptr);
  EXPECT_EQ(sim.channel().meter().honest_messages(), 1U);
  EXPECT_EQ(sim.channel().meter().adversary_messages(), 2U);
}

TEST(Simulation, RejectsOversizedCorruptSets)
{
  SystemConfig const cfg = SystemConfig::make(4, 1, 3, 6, 1);
  ScriptedStrategy   two{"two", {NodeId{2}, NodeId{3}}};
  EXPECT_THROW(Simulation(cfg, two, bits("000000")), ConfigError);
  ScriptedStrategy outside{"outside", {NodeId{5}}};
  EXPECT_THROW(Simulation(cfg, outside, bits("000000")), ConfigError);
}

TEST(Simulation, PointToPointModeUnicastsToAudience)
{
  SystemConfig const cfg = SystemConfig::make(4, 1, 3, 6, 1);
  ScriptedStrategy   honest{"honest", {}};
  Simulation         sim{cfg, honest, bits("000000"), ChannelMode::kPointToPoint};
  StepInfo           step;
  auto const d = sim.run_round("T", {PlannedSlot{NodeId{1}, 0, step, bits("1"), {NodeId{2}, NodeId{4}}}});
  EXPECT_EQ(*d.find(NodeId{2}, NodeId{1}), bits("1"));
  EXPECT_EQ(d.find(NodeId{3}, NodeId{1}), nullptr);
  EXPECT_EQ(sim.channel().meter().honest_messages(), 2U);
}

TEST(Simulation, CommonDecisionIgnoresFaultyNodes)
{
  SystemConfig const cfg = SystemConfig::make(4, 1, 3, 6, 1);
  ScriptedStrategy   one{"one", {NodeId{4}}};
  Simulation         sim{cfg, one, bits("000000")};
  std::map<NodeId, int> agreed{{NodeId{1}, 5}, {NodeId{2}, 5}, {NodeId{3}, 5}, {NodeId{4}, 9}};
  EXPECT_EQ(sim.common_decision(agreed), 5);
  agreed[NodeId{2}] = 6;
  EXPECT_THROW(sim.common_decision(agreed), InvariantViolation);
  EXPECT_FALSE(sim.local(NodeId{4}, [] { throw InvariantViolation("shadow"); }));
  EXPECT_THROW(sim.local(NodeId{2}, [] { throw InvariantViolation("real"); }), InvariantViolation);
}

TEST(SystemConfig, Validation)
{
  EXPECT_NO_THROW(SystemConfig::make(4, 1, 3, 12).validate_coding());
  EXPECT_EQ(SystemConfig::make(4, 1, 3, 12).D, 6);
  EXPECT_THROW(SystemConfig::make(3, 1, 3, 6).validate_model(), ConfigError);
  EXPECT_THROW(SystemConfig::make(4, 1, 3, 7).validate_coding(), ConfigError);
  EXPECT_THROW(SystemConfig::make(8, 1, 3, 18).validate_coding(), ConfigError);
  EXPECT_NO_THROW(SystemConfig::make(25, 1, 3, 1).validate_model());
  EXPECT_EQ(SystemConfig::min_symbol_width(7), 3);
  EXPECT_EQ(SystemConfig::min_symbol_width(8), 4);
}
