#pragma once

#include "sbb/bit_string.hpp"
#include "sbb/channel.hpp"
#include "sbb/config.hpp"
#include "sbb/dispute_graph.hpp"
#include "sbb/rs_code.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sbb {

/// Per-generation record of the dispute-control protocol, kept for every node
/// (corrupted nodes' entries are their honest shadow state).
struct GenerationRecord
{
  std::int64_t                                g = 0;
  bool                                        source_disqualified = false;
  std::map<NodeId, std::optional<DataBlock>>  z;
  std::map<NodeId, bool>                      detected;
  std::map<NodeId, bool>                      announced;  ///< agreed detection bits
  bool                                        dispute_control = false;
  std::vector<DisputePair>                    new_pairs;
};

struct BbOutcome
{
  int                            n = 0;
  std::map<NodeId, BitString>    outputs;  ///< fault-free peers only
  TrafficMeter                   meter;
  DisputeGraph                   dispute_graph;
  std::vector<TraceEntry>        phase_trace;
  std::vector<GenerationRecord>  generations;
  int                            dispute_control_invocations = 0;
};

enum class BbProperty
{
  kNone,
  kTermination,
  kConsistency,
  kValidity,
};

struct BbVerdict
{
  bool                pass     = true;
  BbProperty          property = BbProperty::kNone;
  std::vector<NodeId> witnesses;
  std::string         reason;

  explicit operator bool() const noexcept { return pass; }
};

/// Termination, consistency and validity over the fault-free peers.
BbVerdict check_bb_properties(BbOutcome const &outcome, BitString const &x, FaultOracle const &faulty);

std::string to_string(BbProperty property);

}  // namespace sbb
