#include "sbb/dispute_bb.hpp"

#include "sbb/eig.hpp"
#include "sbb/errors.hpp"

#include <algorithm>
#include <string>

namespace sbb {

namespace {

std::vector<NodeId> others(int n, NodeId self)
{
  std::vector<NodeId> out;
  for (auto const &node : all_nodes(n))
  {
    if (node != self)
    {
      out.push_back(node);
    }
  }
  return out;
}

// Positions a fault-free node must have NULL for in peer k's view.
std::set<NodeId> required_nulls(NodeId k, DisputeGraph const &disputes)
{
  std::set<NodeId> out = disputes.disputes_of(k);
  auto const       src = disputes.disputes_of(kSource);
  out.insert(src.begin(), src.end());
  auto const identified = disputes.identified_faulty();
  out.insert(identified.begin(), identified.end());
  if (src.count(k) != 0)
  {
    out.insert(kSource);
    out.insert(k);
  }
  return out;
}

}  // namespace

ReedSolomonCode make_code(SystemConfig const &config)
{
  config.validate_coding();
  return ReedSolomonCode{GaloisField{gf::FieldSpec::with_default_polynomial(static_cast<unsigned>(config.c))},
                         static_cast<std::size_t>(config.n), static_cast<std::size_t>(config.t)};
}

BitString db_source_step(ReedSolomonCode const &code, DataBlock const &x_g)
{
  return code.to_bits(x_g);
}

BitString db_peer_relay(ReedSolomonCode const &code, NodeId i, std::optional<DataBlock> const &received,
                        DisputeGraph const &disputes)
{
  if (i == kSource)
  {
    throw UsageError("the source does not relay a coded symbol");
  }
  if (disputes.contains(i, kSource) || !received)
  {
    return {};
  }
  return code.symbol_to_bits(code.encode(*received).at(static_cast<std::size_t>(i.value)));
}

PartialView db_assemble_view(ReedSolomonCode const &code, NodeId i,
                             std::map<NodeId, std::optional<FieldElement>> const &received_symbols,
                             std::optional<Codeword> const &own_codeword, DisputeGraph const &disputes)
{
  int const   n = static_cast<int>(code.n());
  PartialView view;
  view.entries.assign(code.n(), std::nullopt);

  auto const nulls = required_nulls(i, disputes);
  for (int j = 1; j <= n; ++j)
  {
    NodeId const node{j};
    if (nulls.count(node) != 0)
    {
      continue;
    }
    auto &slot = view.at(static_cast<std::size_t>(j));
    if (node == kSource || node == i)
    {
      if (own_codeword)
      {
        slot = own_codeword->at(static_cast<std::size_t>(j));
      }
      continue;
    }
    auto it = received_symbols.find(node);
    if (it != received_symbols.end())
    {
      slot = it->second;
    }
  }

  if (view.non_null_count() < code.k())
  {
    throw InvariantViolation("node " + std::to_string(i.value) + " holds only " +
                             std::to_string(view.non_null_count()) + " non-NULL symbols");
  }
  return view;
}

Resolution db_resolve(ReedSolomonCode const &code, PartialView const &view)
{
  auto consistent = code.check_consistency(view);
  if (consistent)
  {
    return Resolution{std::move(*consistent), false};
  }
  return Resolution{code.default_block(), true};
}

std::size_t claim_bits(ReedSolomonCode const &code)
{
  return 1 + code.block_bits() + code.n() * (1 + code.symbol_bits());
}

BitString encode_claim(ReedSolomonCode const &code, DisputeClaim const &claim)
{
  if (claim.view.entries.size() != code.n())
  {
    throw UsageError("claimed view has the wrong length");
  }
  BitString out;
  out.append_bit(claim.received.has_value());
  out.append(claim.received ? code.to_bits(*claim.received) : BitString(code.block_bits()));
  for (auto const &entry : claim.view.entries)
  {
    out.append_bit(entry.has_value());
    out.append(entry ? code.symbol_to_bits(*entry) : BitString(code.symbol_bits()));
  }
  return out;
}

DisputeClaim decode_claim(ReedSolomonCode const &code, BitString const &bits)
{
  if (bits.size() != claim_bits(code))
  {
    throw UsageError("claim has the wrong length");
  }
  DisputeClaim claim;
  std::size_t  pos = 0;
  bool const   has_block = bits[pos++];
  if (has_block)
  {
    claim.received = code.block_from_bits(bits.slice(pos, code.block_bits()));
  }
  pos += code.block_bits();
  for (std::size_t j = 0; j < code.n(); ++j)
  {
    bool const present = bits[pos++];
    auto const symbol  = bits.slice(pos, code.symbol_bits());
    pos += code.symbol_bits();
    claim.view.entries.push_back(present ? code.symbol_from_bits(symbol) : std::nullopt);
  }
  return claim;
}

DisputeDerivation derive_disputes(ReedSolomonCode const &code, DataBlock const &agreed_value,
                                  std::map<NodeId, DisputeClaim> const &claims,
                                  std::map<NodeId, bool> const &announced, DisputeGraph const &disputes)
{
  DisputeDerivation result;
  int const         n = static_cast<int>(code.n());
  auto announced_bit = [&](NodeId v) {
    auto it = announced.find(v);
    return it != announced.end() && it->second;
  };

  // The source never detects anything, so a raised flag from it is a lie.
  if (announced_bit(kSource))
  {
    result.self_inconsistent.insert(kSource);
  }

  std::map<NodeId, Codeword> claimed_words;
  for (auto const &[k, claim] : claims)
  {
    bool const in_dispute_with_source = disputes.contains(k, kSource);
    bool       ok                     = claim.view.entries.size() == code.n();
    ok = ok && claim.received.has_value() != in_dispute_with_source;
    if (ok)
    {
      for (auto const &p : required_nulls(k, disputes))
      {
        ok = ok && !claim.view.at(static_cast<std::size_t>(p.value));
      }
    }
    if (ok && claim.received)
    {
      Codeword const word = code.encode(*claim.received);
      ok = ok && claim.view.at(1) == word.at(1) && claim.view.at(static_cast<std::size_t>(k.value)) ==
                                                        word.at(static_cast<std::size_t>(k.value));
      claimed_words.emplace(k, word);
    }
    ok = ok && claim.view.non_null_count() >= code.k();
    ok = ok && announced_bit(k) == !code.check_consistency(claim.view).has_value();
    if (!ok)
    {
      result.self_inconsistent.insert(k);
    }
  }

  std::set<DisputePair> found;
  auto note = [&](NodeId a, NodeId b) {
    if (a != b && !disputes.contains(a, b))
    {
      found.insert(make_pair_key(a, b));
    }
  };

  for (auto const &k : result.self_inconsistent)
  {
    for (int v = 1; v <= n; ++v)
    {
      note(k, NodeId{v});
    }
  }

  for (auto const &[k, claim] : claims)
  {
    if (result.self_inconsistent.count(k) != 0 || disputes.contains(k, kSource))
    {
      continue;
    }
    if (claim.received != agreed_value)
    {
      note(kSource, k);
    }
  }

  for (auto const &[j, claim_j] : claims)
  {
    if (result.self_inconsistent.count(j) != 0)
    {
      continue;
    }
    for (auto const &[i, word_i] : claimed_words)
    {
      if (i == j || result.self_inconsistent.count(i) != 0)
      {
        continue;
      }
      auto const &entry = claim_j.view.at(static_cast<std::size_t>(i.value));
      if (entry && *entry != word_i.at(static_cast<std::size_t>(i.value)))
      {
        note(i, j);
      }
    }
  }

  result.new_pairs.assign(found.begin(), found.end());
  return result;
}

std::map<NodeId, bool> run_detection_dissemination(Simulation &sim, std::map<NodeId, bool> const &detected,
                                                   DisputeGraph const &disputes, std::int64_t generation)
{
  int const  n          = sim.config().n;
  auto const identified = disputes.identified_faulty();

  std::vector<EigRequest> requests;
  for (auto const &node : all_nodes(n))
  {
    if (identified.count(node) != 0)
    {
      continue;
    }
    auto it = detected.find(node);
    requests.push_back(EigRequest{node, BitString(1, it != detected.end() && it->second), 1});
  }

  StepInfo step;
  step.purpose    = EigPurpose::kDetection;
  step.generation = generation;
  auto const decisions =
      run_eig_parallel(sim, requests, all_nodes(n), identified, step, kPhaseDissemination);

  // Node v's local vector of agreed flags.
  std::map<NodeId, std::map<NodeId, bool>> per_node;
  for (std::size_t r = 0; r < requests.size(); ++r)
  {
    for (auto const &[node, bits] : decisions[r])
    {
      per_node[node][requests[r].source] = bits[0];
    }
  }
  for (auto const &node : identified)
  {
    for (auto &[_, flags] : per_node)
    {
      flags[node] = false;
    }
  }
  return sim.common_decision(per_node);
}

DisputeControlResult run_dispute_control(Simulation &sim, ReedSolomonCode const &code, GenerationState const &gen,
                                         std::map<NodeId, bool> const &announced, DisputeGraph &disputes)
{
  int const  n          = sim.config().n;
  auto const identified = disputes.identified_faulty();

  StepInfo step;
  step.generation = gen.g;

  step.purpose     = EigPurpose::kDisputeValue;
  auto const value = run_eig_parallel(sim, {EigRequest{kSource, code.to_bits(gen.x_g), code.block_bits()}},
                                      all_nodes(n), identified, step, kPhaseDispute)
                         .front();
  std::map<NodeId, DataBlock> value_per_node;
  for (auto const &[node, bits] : value)
  {
    value_per_node.emplace(node, *code.block_from_bits(bits));
  }
  DataBlock const agreed = sim.common_decision(value_per_node);

  std::vector<EigRequest> requests;
  for (auto const &peer : peers(n))
  {
    if (identified.count(peer) != 0)
    {
      continue;
    }
    BitString bits(claim_bits(code));
    auto      view = gen.views.find(peer);
    if (view != gen.views.end())
    {
      bits = encode_claim(code, DisputeClaim{gen.received.at(peer), view->second});
    }
    requests.push_back(EigRequest{peer, std::move(bits), claim_bits(code)});
  }
  step.purpose         = EigPurpose::kDisputeClaim;
  auto const decisions = run_eig_parallel(sim, requests, all_nodes(n), identified, step, kPhaseDispute);

  std::map<NodeId, std::map<NodeId, DisputeClaim>> per_node;
  for (std::size_t r = 0; r < requests.size(); ++r)
  {
    for (auto const &[node, bits] : decisions[r])
    {
      per_node[node].emplace(requests[r].source, decode_claim(code, bits));
    }
  }
  auto const claims = sim.common_decision(per_node);

  auto derivation = derive_disputes(code, agreed, claims, announced, disputes);
  for (auto const &[a, b] : derivation.new_pairs)
  {
    disputes.add(a, b);
  }
  return DisputeControlResult{agreed, std::move(derivation.new_pairs)};
}

BbOutcome run_byzantine_broadcast(BitString const &x, SystemConfig const &config, AdversaryStrategy &strategy,
                                  ChannelMode mode)
{
  ReedSolomonCode const code = make_code(config);
  if (static_cast<std::int64_t>(x.size()) != config.L)
  {
    throw ConfigError("input has " + std::to_string(x.size()) + " bits, config says L=" + std::to_string(config.L));
  }
  int const          n = config.n;
  Simulation         sim{config, strategy, x, mode};
  DisputeGraph       disputes{config.t};
  BbOutcome          outcome;
  std::map<NodeId, BitString> outputs;
  std::size_t const  block_bits = code.block_bits();

  for (std::int64_t g = 1; g <= config.generations(); ++g)
  {
    GenerationRecord record;
    record.g = g;
    GenerationState gen;
    gen.g   = g;
    gen.x_g = *code.block_from_bits(x.slice(static_cast<std::size_t>(g - 1) * block_bits, block_bits));

    if (disputes.is_identified(kSource))
    {
      record.source_disqualified = true;
      for (auto const &peer : peers(n))
      {
        outputs[peer].append(code.to_bits(code.default_block()));
      }
      outcome.generations.push_back(std::move(record));
      continue;
    }
    auto const identified = disputes.identified_faulty();

    StepInfo step;
    step.generation = g;

    // Step 1: the source sends its D bits.
    step.kind = Step::kDbSource;
    auto const first =
        sim.run_round(kPhaseDetectable, {PlannedSlot{kSource, 0, step, db_source_step(code, gen.x_g), others(n, kSource)}});
    for (auto const &peer : peers(n))
    {
      if (disputes.contains(peer, kSource))
      {
        gen.received[peer] = std::nullopt;
        continue;
      }
      BitString const *bits  = first.find(peer, kSource);
      auto             block = bits != nullptr ? code.block_from_bits(*bits) : std::nullopt;
      gen.received[peer]     = block ? *block : code.default_block();
    }

    // Step 2a: every peer relays its own coded symbol.
    step.kind = Step::kDbRelay;
    std::vector<PlannedSlot> relays;
    for (auto const &peer : peers(n))
    {
      if (identified.count(peer) == 0)
      {
        relays.push_back(
            PlannedSlot{peer, 0, step, db_peer_relay(code, peer, gen.received[peer], disputes), others(n, peer)});
      }
    }
    auto const second = sim.run_round(kPhaseDetectable, relays);

    // Steps 2b and 3: assemble the symbol vector and check it.
    for (auto const &peer : peers(n))
    {
      std::map<NodeId, std::optional<FieldElement>> symbols;
      for (auto const &sender : peers(n))
      {
        if (sender == peer || identified.count(sender) != 0)
        {
          continue;
        }
        BitString const *bits = second.find(peer, sender);
        symbols[sender]       = bits != nullptr ? code.symbol_from_bits(*bits) : std::nullopt;
      }
      std::optional<Codeword> own;
      if (gen.received[peer])
      {
        own = code.encode(*gen.received[peer]);
      }
      bool const ok = sim.local(peer, [&] {
        PartialView view      = db_assemble_view(code, peer, symbols, own, disputes);
        Resolution  resolved  = db_resolve(code, view);
        gen.views[peer]       = std::move(view);
        gen.z[peer]           = std::move(resolved.z);
        gen.detected[peer]    = resolved.detected;
      });
      if (!ok)
      {
        gen.z[peer]        = std::nullopt;
        gen.detected[peer] = true;
      }
    }
    gen.detected[kSource] = false;
    record.z              = gen.z;
    record.detected       = gen.detected;

    auto const announced = run_detection_dissemination(sim, gen.detected, disputes, g);
    record.announced     = announced;
    bool const any       = std::any_of(announced.begin(), announced.end(), [](auto const &kv) { return kv.second; });

    if (!any)
    {
      for (auto const &peer : peers(n))
      {
        outputs[peer].append(code.to_bits(gen.z[peer] ? *gen.z[peer] : code.default_block()));
      }
    }
    else
    {
      auto result            = run_dispute_control(sim, code, gen, announced, disputes);
      record.dispute_control = true;
      record.new_pairs       = result.new_pairs;
      ++outcome.dispute_control_invocations;
      for (auto const &peer : peers(n))
      {
        outputs[peer].append(code.to_bits(result.y_g));
      }
    }
    outcome.generations.push_back(std::move(record));
  }

  outcome.n             = n;
  outcome.outputs       = sim.fault_free_only(std::move(outputs));
  outcome.meter         = sim.channel().meter();
  outcome.dispute_graph = disputes;
  outcome.phase_trace   = sim.channel().trace();
  return outcome;
}

}  // namespace sbb
