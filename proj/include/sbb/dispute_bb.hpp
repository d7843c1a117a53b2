#pragma once

// Multi-valued Byzantine Broadcast with dispute control. Each generation
// carries D = c(n - 2t) input bits through three phases:
//   DB  detectable broadcast: source sends x(g), every peer relays one coded symbol,
//       every peer checks its symbol vector against the (n, n-2t) code;
//   DD  every node Byzantine-broadcasts its 1-bit detection flag;
//   DC  only if some flag is 1: the source re-broadcasts x(g) with EIG (the
//       generation's output), peers broadcast what they saw, and the common
//       claims are cross-checked into new dispute pairs.

#include "sbb/bb_outcome.hpp"
#include "sbb/dispute_graph.hpp"
#include "sbb/rs_code.hpp"
#include "sbb/simulation.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace sbb {

inline constexpr char const *kPhaseDetectable    = "DB";
inline constexpr char const *kPhaseDissemination = "DD";
inline constexpr char const *kPhaseDispute       = "DC";

ReedSolomonCode make_code(SystemConfig const &config);

/// Source payload of the first step: the D-bit block.
BitString db_source_step(ReedSolomonCode const &code, DataBlock const &x_g);

/// A peer's relay: its own coded symbol of what it got from the source, or
/// silence when it is in dispute with the source.
BitString db_peer_relay(ReedSolomonCode const &code, NodeId i, std::optional<DataBlock> const &received,
                        DisputeGraph const &disputes);

/// Peer i's symbol vector. Positions of nodes in dispute with i or with the
/// source, identified-faulty nodes, and absent or malformed symbols are NULL.
/// Position 1 and position i come from i's own codeword. Throws
/// InvariantViolation with fewer than n - 2t non-NULL entries.
PartialView db_assemble_view(ReedSolomonCode const &code, NodeId i,
                             std::map<NodeId, std::optional<FieldElement>> const &received_symbols,
                             std::optional<Codeword> const &own_codeword, DisputeGraph const &disputes);

struct Resolution
{
  DataBlock z;
  bool      detected = false;
};

Resolution db_resolve(ReedSolomonCode const &code, PartialView const &view);

/// What a peer reports during dispute control.
struct DisputeClaim
{
  std::optional<DataBlock> received;  ///< block from the source; nullopt when in dispute with it
  PartialView              view;

  friend bool operator==(DisputeClaim const &, DisputeClaim const &) = default;
};

/// Present flag, D bits, then n entries of (present flag, c bits).
std::size_t  claim_bits(ReedSolomonCode const &code);
BitString    encode_claim(ReedSolomonCode const &code, DisputeClaim const &claim);
/// Total for bit strings of length claim_bits(); the all-zeros string is the
/// empty claim (no block, all NULL).
DisputeClaim decode_claim(ReedSolomonCode const &code, BitString const &bits);

struct DisputeDerivation
{
  std::vector<DisputePair> new_pairs;
  /// Nodes whose own agreed announcements and claims contradict each other.
  std::set<NodeId> self_inconsistent;
};

/// Cross-checks the agreed claims against the agreed value X and the agreed
/// detection flags. Only pairs absent from `disputes` are returned. Claims from
/// fault-free nodes never produce a pair between two fault-free nodes.
DisputeDerivation derive_disputes(ReedSolomonCode const &code, DataBlock const &agreed_value,
                                  std::map<NodeId, DisputeClaim> const &claims,
                                  std::map<NodeId, bool> const &announced, DisputeGraph const &disputes);

/// Every non-identified node Byzantine-broadcasts its flag. Returns the
/// agreed flags, each node's view of them taken in common.
std::map<NodeId, bool> run_detection_dissemination(Simulation &sim, std::map<NodeId, bool> const &detected,
                                                   DisputeGraph const &disputes, std::int64_t generation);

struct DisputeControlResult
{
  DataBlock                y_g;
  std::vector<DisputePair> new_pairs;
};

/// Per-node state of one generation.
struct GenerationState
{
  std::int64_t                               g = 0;
  DataBlock                                  x_g;  ///< the source's slice
  std::map<NodeId, std::optional<DataBlock>> received;
  std::map<NodeId, PartialView>              views;
  std::map<NodeId, std::optional<DataBlock>> z;
  std::map<NodeId, bool>                     detected;
};

/// Dispute control: agrees on x(g) via EIG, collects claims via EIG, and merges
/// the derived pairs into `disputes`.
DisputeControlResult run_dispute_control(Simulation &sim, ReedSolomonCode const &code, GenerationState const &gen,
                                         std::map<NodeId, bool> const &announced, DisputeGraph &disputes);

/// The full L-bit broadcast. Throws ConfigError for invalid configs.
BbOutcome run_byzantine_broadcast(BitString const &x, SystemConfig const &config, AdversaryStrategy &strategy,
                                  ChannelMode mode = ChannelMode::kSelectiveBroadcast);

}  // namespace sbb
