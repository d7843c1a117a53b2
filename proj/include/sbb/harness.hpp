#pragma once

#include "sbb/adversary.hpp"
#include "sbb/bb_outcome.hpp"
#include "sbb/config.hpp"
#include "sbb/simulation.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sbb {

enum class Algorithm
{
  kDisputeBb,
  kAlgorithm2,
};

std::string to_string(Algorithm algorithm);
std::string to_string(ChannelMode mode);

struct StrategySpec
{
  std::string     name = "honest";
  StrategyOptions options;
};

struct Scenario
{
  SystemConfig  config;
  Algorithm     algorithm = Algorithm::kDisputeBb;
  StrategySpec  strategy;
  int           repetitions = 1;
  std::uint64_t seed        = 0;  ///< repetition r runs with seed + r
  ChannelMode   mode        = ChannelMode::kSelectiveBroadcast;
};

/// Keys: n, t, c (default: smallest width that fits n), L or generations,
/// algorithm, strategy (name or object), repetitions, seed, mode.
/// Throws ConfigError on malformed input.
Scenario               scenario_from_json(nlohmann::json const &j);
nlohmann::ordered_json scenario_to_json(Scenario const &s);

/// Rejects bad configs and unknown strategies before anything runs.
void validate_scenario(Scenario const &s);

/// The configuration repetition r runs with.
SystemConfig repetition_config(Scenario const &s, int repetition);
/// The source input for a run, derived from config.seed.
BitString scenario_input(SystemConfig const &config);

struct MetricsRecord
{
  int           scenario_index = 0;
  int           repetition     = 0;
  std::string   algorithm;
  std::string   strategy;
  std::string   mode;
  int           n = 0;
  int           t = 0;
  int           c = 0;
  std::int64_t  D = 0;
  std::int64_t  L = 0;
  std::uint64_t seed = 0;
  bool          pass = false;
  std::string   failure;
  std::uint64_t honest_messages    = 0;
  std::uint64_t honest_bits        = 0;
  std::uint64_t adversary_messages = 0;
  std::uint64_t adversary_bits     = 0;
  std::string   phase_breakdown;  ///< phase:messages/bits over honest traffic, ';'-separated
  int           dispute_control_invocations = 0;
  std::uint64_t db_honest_bits              = 0;
  std::string   total_bb_cost_bits;
  std::string   total_bb_cost_satisfied;
  std::int64_t  message_lower_bound = 0;
  std::string   message_lower_bound_satisfied;
  std::string   static_db_lower_bound;
  std::string   static_db_lower_bound_satisfied;
  std::string   input_bits_satisfied;  ///< honest bits >= L
};

struct RunResult
{
  MetricsRecord           record;
  BbOutcome               outcome;
  FaultOracle             faulty;
  BitString               input;
  std::vector<TraceEntry> trace;
};

/// One repetition, start to finish. Protocol-level exceptions become a Fail record.
RunResult run_once(Scenario const &s, int scenario_index, int repetition);

struct RunOptions
{
  int                                  jobs = 1;
  std::optional<std::filesystem::path> trace_dir;
};

/// Every repetition of every scenario; records come back ordered by
/// (scenario index, repetition) whatever the job count.
std::vector<MetricsRecord> run_scenarios(std::vector<Scenario> const &scenarios, RunOptions const &options);
std::vector<MetricsRecord> run_scenario(Scenario const &s, RunOptions const &options);

struct SweepPlan
{
  std::vector<Scenario>    scenarios;
  std::vector<std::string> rejected;  ///< invalid grid points, skipped
};

/// Cartesian product of the grid. Each key takes a value or a list; "t" also
/// accepts "max" (floor((n-1)/3)), "c" accepts "auto", and "generations" may
/// stand in for "L".
SweepPlan expand_grid(nlohmann::json const &grid);

std::string csv_header();
std::string csv_row(MetricsRecord const &record);
std::string to_csv(std::vector<MetricsRecord> const &records);

std::string trace_file_name(int scenario_index, int repetition);
/// Header line naming the scenario and repetition, then one line per slot.
std::string trace_document(Scenario const &s, int repetition, std::vector<TraceEntry> const &trace);

struct ReplayReport
{
  bool        match = false;
  std::size_t slots = 0;
  std::string detail;
};

/// Re-runs the run named in a trace's header and compares slot lines.
ReplayReport replay_trace(std::string const &document);

struct BoundsReport
{
  bool                     pass = true;
  std::vector<std::string> lines;
};

/// Keys: n, t, L, optional c, f (default t), and "modular": {B, i, alpha,
/// exponent, t} with M*(m) = m^exponent. Evaluates the formulas and compares
/// them against an honest dispute-control run.
BoundsReport verify_bounds(nlohmann::json const &params);

}  // namespace sbb
