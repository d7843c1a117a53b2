#include "sbb/simulation.hpp"

namespace sbb {

Simulation::Simulation(SystemConfig config, AdversaryStrategy &adversary, BitString source_input, ChannelMode mode)
  : config_{config}
  , adversary_{adversary}
  , faulty_{adversary.corrupt_set()}
  , source_input_{std::move(source_input)}
  , mode_{mode}
  , channel_{config.n, faulty_}
  , adversary_rng_{mix_seed(config.seed ^ 0xadu)}
{
  if (static_cast<int>(faulty_.size()) > config_.t)
  {
    throw ConfigError("adversary corrupts more than t nodes");
  }
  for (auto node : faulty_)
  {
    if (node.value < 1 || node.value > config_.n)
    {
      throw ConfigError("corrupt node outside 1..n");
    }
  }
}

RoundDelivery Simulation::run_round(std::string const &phase, std::vector<PlannedSlot> const &plan)
{
  std::vector<SlotTransmission> honest;
  for (auto const &slot : plan)
  {
    if (faulty_.count(slot.sender) != 0)
    {
      continue;
    }
    Payload payload = mode_ == ChannelMode::kSelectiveBroadcast || slot.prescribed.empty()
                          ? Payload{Broadcast{slot.prescribed}}
                          : Payload{Unicast{slot.audience, slot.prescribed}};
    honest.push_back(SlotTransmission{slot.sender, slot.topic, std::move(payload)});
  }

  std::vector<SlotTransmission> corrupted;
  for (auto const &slot : plan)
  {
    if (faulty_.count(slot.sender) == 0)
    {
      continue;
    }
    SlotContext const context{config_,       slot.step, slot.sender,    slot.topic,    slot.prescribed,
                              slot.audience, source_input_, honest, adversary_rng_};
    corrupted.push_back(SlotTransmission{slot.sender, slot.topic, adversary_.act(context)});
  }

  // Slots go on the channel in plan order.
  auto hi = honest.begin();
  auto ci = corrupted.begin();
  for (auto const &slot : plan)
  {
    auto &src = faulty_.count(slot.sender) != 0 ? ci : hi;
    channel_.submit(std::move(*src), phase);
    ++src;
  }
  return channel_.close_round();
}

}  // namespace sbb
