#include "sbb/harness.hpp"

#include "sbb/bounds.hpp"
#include "sbb/committee_bb.hpp"
#include "sbb/dispute_bb.hpp"
#include "sbb/errors.hpp"
#include "sbb/rng.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace sbb {

namespace {

using nlohmann::json;

template <class T>
T get_or(json const &j, char const *key, T fallback)
{
  if (!j.contains(key))
  {
    return fallback;
  }
  try
  {
    return j.at(key).get<T>();
  }
  catch (json::exception const &e)
  {
    throw ConfigError(std::string{"bad value for '"} + key + "': " + e.what());
  }
}

std::vector<NodeId> node_list(json const &j)
{
  std::vector<NodeId> out;
  for (auto const &v : j)
  {
    out.push_back(NodeId{v.get<int>()});
  }
  return out;
}

json node_json(auto const &nodes)
{
  json out = json::array();
  for (auto const &node : nodes)
  {
    out.push_back(node.value);
  }
  return out;
}

StrategySpec strategy_from_json(json const &j)
{
  StrategySpec spec;
  if (j.is_string())
  {
    spec.name = j.get<std::string>();
    return spec;
  }
  if (!j.is_object())
  {
    throw ConfigError("strategy must be a name or an object");
  }
  spec.name = get_or<std::string>(j, "name", "honest");
  try
  {
    if (j.contains("corrupt"))
    {
      auto const nodes     = node_list(j.at("corrupt"));
      spec.options.corrupt = FaultOracle(nodes.begin(), nodes.end());
    }
    if (j.contains("pool"))
    {
      spec.options.pool = node_list(j.at("pool"));
    }
    spec.options.consistent_lie = get_or<bool>(j, "consistent_lie", false);
    if (j.contains("alternate"))
    {
      spec.options.alternate = BitString::from_string(j.at("alternate").get<std::string>());
    }
    if (j.contains("alternate_receivers"))
    {
      auto const nodes                 = node_list(j.at("alternate_receivers"));
      spec.options.alternate_receivers = std::set<NodeId>(nodes.begin(), nodes.end());
    }
  }
  catch (json::exception const &e)
  {
    throw ConfigError(std::string{"bad strategy options: "} + e.what());
  }
  catch (UsageError const &e)
  {
    throw ConfigError(std::string{"bad strategy options: "} + e.what());
  }
  return spec;
}

json strategy_to_json(StrategySpec const &spec)
{
  json j;
  j["name"] = spec.name;
  auto const &o = spec.options;
  if (o.corrupt)
  {
    j["corrupt"] = node_json(*o.corrupt);
  }
  if (!o.pool.empty())
  {
    j["pool"] = node_json(o.pool);
  }
  if (o.consistent_lie)
  {
    j["consistent_lie"] = true;
  }
  if (o.alternate)
  {
    j["alternate"] = o.alternate->to_string();
  }
  if (o.alternate_receivers)
  {
    j["alternate_receivers"] = node_json(*o.alternate_receivers);
  }
  return j;
}

Algorithm algorithm_from(std::string const &name)
{
  if (name == "dispute_bb")
  {
    return Algorithm::kDisputeBb;
  }
  if (name == "algo2")
  {
    return Algorithm::kAlgorithm2;
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

ChannelMode mode_from(std::string const &name)
{
  if (name == "selective_broadcast")
  {
    return ChannelMode::kSelectiveBroadcast;
  }
  if (name == "point_to_point")
  {
    return ChannelMode::kPointToPoint;
  }
  throw ConfigError("unknown channel mode '" + name + "'");
}

std::string yes_no(bool b)
{
  return b ? "yes" : "no";
}

std::string csv_safe(std::string s)
{
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string breakdown(TrafficMeter const &meter)
{
  std::string out;
  for (auto const &[phase, counters] : meter.per_phase())
  {
    if (!out.empty())
    {
      out += ';';
    }
    out += phase + ":" + std::to_string(counters.honest_messages) + "/" + std::to_string(counters.honest_bits);
  }
  return out;
}

/// Dispute-graph discipline on top of the BB properties.
std::string discipline_failure(BbOutcome const &outcome, FaultOracle const &faulty, int t)
{
  for (auto const &[a, b] : outcome.dispute_graph.pairs())
  {
    if (faulty.count(a) == 0 && faulty.count(b) == 0)
    {
      return "dispute between fault-free nodes " + std::to_string(a.value) + " and " + std::to_string(b.value);
    }
  }
  if (outcome.dispute_control_invocations > t * (t + 1))
  {
    return "dispute control ran " + std::to_string(outcome.dispute_control_invocations) + " times";
  }
  return {};
}

void fill_bounds(MetricsRecord &r, Scenario const &s, bool honest_strategy)
{
  auto const &cfg  = s.config;
  auto const total = bounds::total_bb_cost_bits(cfg.n, cfg.t, cfg.L);
  r.total_bb_cost_bits = bounds::to_string(total);
  if (s.algorithm == Algorithm::kDisputeBb && r.failure.empty())
  {
    bounds::Rational const measured{static_cast<std::int64_t>(r.db_honest_bits)};
    r.total_bb_cost_satisfied = yes_no(honest_strategy ? measured == total : measured <= total);
  }
  else
  {
    r.total_bb_cost_satisfied = "n/a";
  }
  r.message_lower_bound           = bounds::message_lower_bound(cfg.t);
  r.message_lower_bound_satisfied = yes_no(static_cast<std::int64_t>(r.honest_messages) >= r.message_lower_bound);
  auto const stat                 = bounds::static_db_lower_bound_bits(cfg.n, cfg.t, cfg.L);
  r.static_db_lower_bound         = bounds::to_string(stat);
  r.static_db_lower_bound_satisfied =
      yes_no(bounds::Rational{static_cast<std::int64_t>(r.honest_bits)} >= stat);
  r.input_bits_satisfied = yes_no(static_cast<std::int64_t>(r.honest_bits) >= cfg.L);
}

}  // namespace

std::string to_string(Algorithm algorithm)
{
  return algorithm == Algorithm::kDisputeBb ? "dispute_bb" : "algo2";
}

std::string to_string(ChannelMode mode)
{
  return mode == ChannelMode::kSelectiveBroadcast ? "selective_broadcast" : "point_to_point";
}

Scenario scenario_from_json(json const &j)
{
  if (!j.is_object())
  {
    throw ConfigError("scenario must be a JSON object");
  }
  for (char const *key : {"n", "t"})
  {
    if (!j.contains(key))
    {
      throw ConfigError(std::string{"scenario is missing '"} + key + "'");
    }
  }
  Scenario   s;
  int const  n = get_or<int>(j, "n", 0);
  int const  t = get_or<int>(j, "t", 0);
  int const  c = get_or<int>(j, "c", SystemConfig::min_symbol_width(n));
  s.algorithm  = algorithm_from(get_or<std::string>(j, "algorithm", "dispute_bb"));
  s.mode       = mode_from(get_or<std::string>(j, "mode", "selective_broadcast"));
  s.repetitions = get_or<int>(j, "repetitions", 1);
  s.seed        = get_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("strategy"))
  {
    s.strategy = strategy_from_json(j.at("strategy"));
  }

  std::int64_t L = 0;
  if (j.contains("L"))
  {
    L = get_or<std::int64_t>(j, "L", 0);
  }
  else if (j.contains("generations"))
  {
    L = get_or<std::int64_t>(j, "generations", 0) * static_cast<std::int64_t>(c) * (n - 2 * t);
  }
  else
  {
    throw ConfigError("scenario needs 'L' or 'generations'");
  }
  s.config = SystemConfig::make(n, t, c, L, s.seed);
  return s;
}

nlohmann::ordered_json scenario_to_json(Scenario const &s)
{
  nlohmann::ordered_json j;
  j["n"]           = s.config.n;
  j["t"]           = s.config.t;
  j["c"]           = s.config.c;
  j["L"]           = s.config.L;
  j["algorithm"]   = to_string(s.algorithm);
  j["strategy"]    = strategy_to_json(s.strategy);
  j["repetitions"] = s.repetitions;
  j["seed"]        = s.seed;
  j["mode"]        = to_string(s.mode);
  return j;
}

void validate_scenario(Scenario const &s)
{
  if (s.algorithm == Algorithm::kDisputeBb)
  {
    s.config.validate_coding();
  }
  else
  {
    s.config.validate_model();
  }
  if (s.repetitions < 1)
  {
    throw ConfigError("repetitions must be at least 1");
  }
  make_strategy(s.strategy.name, repetition_config(s, 0), s.strategy.options);
}

SystemConfig repetition_config(Scenario const &s, int repetition)
{
  SystemConfig config = s.config;
  config.seed         = s.seed + static_cast<std::uint64_t>(repetition);
  return config;
}

BitString scenario_input(SystemConfig const &config)
{
  Rng rng{mix_seed(config.seed ^ 0x1badb002ULL)};
  return rng.bits(static_cast<std::size_t>(config.L));
}

RunResult run_once(Scenario const &s, int scenario_index, int repetition)
{
  SystemConfig const config = repetition_config(s, repetition);
  RunResult          result;
  result.input = scenario_input(config);

  StrategyOptions options = s.strategy.options;
  if (s.algorithm == Algorithm::kAlgorithm2 && options.pool.empty())
  {
    options.pool = CommitteeLayout::make(config).active;
  }
  auto strategy = make_strategy(s.strategy.name, config, options);
  result.faulty = strategy->corrupt_set();

  MetricsRecord &r = result.record;
  r.scenario_index = scenario_index;
  r.repetition     = repetition;
  r.algorithm      = to_string(s.algorithm);
  r.strategy       = s.strategy.name;
  r.mode           = to_string(s.mode);
  r.n              = config.n;
  r.t              = config.t;
  r.c              = config.c;
  r.D              = config.D;
  r.L              = config.L;
  r.seed           = config.seed;

  try
  {
    result.outcome = s.algorithm == Algorithm::kDisputeBb
                         ? run_byzantine_broadcast(result.input, config, *strategy, s.mode)
                         : run_algorithm2(result.input, config, *strategy, s.mode);
    auto const verdict = check_bb_properties(result.outcome, result.input, result.faulty);
    r.failure          = verdict ? discipline_failure(result.outcome, result.faulty, config.t)
                                 : to_string(verdict.property) + ": " + verdict.reason;
  }
  catch (InvariantViolation const &e)
  {
    r.failure = std::string{"invariant: "} + e.what();
  }
  catch (ModelViolation const &e)
  {
    r.failure = std::string{"model: "} + e.what();
  }
  r.pass = r.failure.empty();
  r.failure = csv_safe(r.failure);

  auto const &meter             = result.outcome.meter;
  r.honest_messages             = meter.honest_messages();
  r.honest_bits                 = meter.honest_bits();
  r.adversary_messages          = meter.adversary_messages();
  r.adversary_bits              = meter.adversary_bits();
  r.phase_breakdown             = breakdown(meter);
  r.dispute_control_invocations = result.outcome.dispute_control_invocations;
  r.db_honest_bits              = meter.phase(kPhaseDetectable).honest_bits;
  fill_bounds(r, s, result.faulty.empty());
  result.trace = result.outcome.phase_trace;
  return result;
}

std::vector<MetricsRecord> run_scenarios(std::vector<Scenario> const &scenarios, RunOptions const &options)
{
  for (auto const &s : scenarios)
  {
    validate_scenario(s);
  }
  std::vector<std::pair<int, int>> tasks;
  for (std::size_t i = 0; i < scenarios.size(); ++i)
  {
    for (int rep = 0; rep < scenarios[i].repetitions; ++rep)
    {
      tasks.emplace_back(static_cast<int>(i), rep);
    }
  }
  if (options.trace_dir)
  {
    std::filesystem::create_directories(*options.trace_dir);
  }

  std::vector<MetricsRecord> records(tasks.size());
  std::atomic<std::size_t>   next{0};
  auto                       worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++)
    {
      auto const [index, rep] = tasks[k];
      RunResult result        = run_once(scenarios[index], index, rep);
      if (options.trace_dir)
      {
        std::ofstream out{*options.trace_dir / trace_file_name(index, rep), std::ios::binary};
        out << trace_document(scenarios[index], rep, result.trace);
      }
      records[k] = std::move(result.record);
    }
  };

  int const                jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j)
  {
    threads.emplace_back(worker);
  }
  worker();
  for (auto &th : threads)
  {
    th.join();
  }
  return records;
}

std::vector<MetricsRecord> run_scenario(Scenario const &s, RunOptions const &options)
{
  return run_scenarios({s}, options);
}

SweepPlan expand_grid(json const &grid)
{
  if (!grid.is_object())
  {
    throw ConfigError("grid must be a JSON object");
  }
  auto values = [&](char const *key, json fallback) {
    json v = grid.contains(key) ? grid.at(key) : fallback;
    return v.is_array() ? v : json::array({v});
  };
  json const ns          = values("n", json{});
  json const ts          = values("t", "max");
  json const cs          = values("c", "auto");
  json const algorithms  = values("algorithm", "dispute_bb");
  json const strategies  = values("strategy", "honest");
  json const modes       = values("mode", "selective_broadcast");
  bool const by_gens     = !grid.contains("L") && grid.contains("generations");
  json const lengths     = values(by_gens ? "generations" : "L", json{});
  if (ns.front().is_null() || lengths.front().is_null())
  {
    throw ConfigError("grid needs 'n' and 'L' or 'generations'");
  }

  SweepPlan plan;
  for (auto const &n : ns)
    for (auto const &t : ts)
      for (auto const &c : cs)
        for (auto const &len : lengths)
          for (auto const &algorithm : algorithms)
            for (auto const &strategy : strategies)
              for (auto const &mode : modes)
              {
                json point;
                point["n"] = n;
                point["t"] = t.is_string() && t.get<std::string>() == "max" && n.is_number_integer()
                                 ? json((n.get<int>() - 1) / 3)
                                 : t;
                if (!(c.is_string() && c.get<std::string>() == "auto"))
                {
                  point["c"] = c;
                }
                point[by_gens ? "generations" : "L"] = len;
                point["algorithm"]                    = algorithm;
                point["strategy"]                     = strategy;
                point["mode"]                         = mode;
                point["repetitions"]                  = grid.value("repetitions", 1);
                point["seed"]                         = grid.value("seed", std::uint64_t{0});
                try
                {
                  Scenario s = scenario_from_json(point);
                  validate_scenario(s);
                  plan.scenarios.push_back(std::move(s));
                }
                catch (std::exception const &e)
                {
                  plan.rejected.push_back(point.dump() + ": " + e.what());
                }
              }
  return plan;
}

std::string csv_header()
{
  return "scenario_index,repetition,algorithm,strategy,mode,n,t,c,D,L,seed,verdict,failure,honest_messages,"
         "honest_bits,adversary_messages,adversary_bits,phase_breakdown,dispute_control_invocations,db_honest_bits,"
         "total_bb_cost_bits,total_bb_cost_satisfied,message_lower_bound,message_lower_bound_satisfied,"
         "static_db_lower_bound,static_db_lower_bound_satisfied,input_bits_satisfied";
}

std::string csv_row(MetricsRecord const &r)
{
  std::ostringstream out;
  out << r.scenario_index << ',' << r.repetition << ',' << r.algorithm << ',' << r.strategy << ',' << r.mode << ','
      << r.n << ',' << r.t << ',' << r.c << ',' << r.D << ',' << r.L << ',' << r.seed << ','
      << (r.pass ? "pass" : "fail") << ',' << r.failure << ',' << r.honest_messages << ',' << r.honest_bits << ','
      << r.adversary_messages << ',' << r.adversary_bits << ',' << r.phase_breakdown << ','
      << r.dispute_control_invocations << ',' << r.db_honest_bits << ',' << r.total_bb_cost_bits << ','
      << r.total_bb_cost_satisfied << ',' << r.message_lower_bound << ',' << r.message_lower_bound_satisfied << ','
      << r.static_db_lower_bound << ',' << r.static_db_lower_bound_satisfied << ',' << r.input_bits_satisfied;
  return out.str();
}

std::string to_csv(std::vector<MetricsRecord> const &records)
{
  std::string out = csv_header() + "\n";
  for (auto const &r : records)
  {
    out += csv_row(r) + "\n";
  }
  return out;
}

std::string trace_file_name(int scenario_index, int repetition)
{
  return "s" + std::to_string(scenario_index) + "_r" + std::to_string(repetition) + ".jsonl";
}

std::string trace_document(Scenario const &s, int repetition, std::vector<TraceEntry> const &trace)
{
  nlohmann::ordered_json header;
  header["scenario"]   = scenario_to_json(s);
  header["repetition"] = repetition;
  std::string out      = header.dump() + "\n";
  for (auto const &entry : trace)
  {
    out += entry.to_json() + "\n";
  }
  return out;
}

ReplayReport replay_trace(std::string const &document)
{
  std::istringstream in{document};
  std::string        line;
  if (!std::getline(in, line))
  {
    throw ConfigError("trace is empty");
  }
  json header;
  try
  {
    header = json::parse(line);
  }
  catch (json::exception const &e)
  {
    throw ConfigError(std::string{"trace header is not JSON: "} + e.what());
  }
  if (!header.contains("scenario") || !header.contains("repetition"))
  {
    throw ConfigError("trace header lacks scenario or repetition");
  }
  Scenario const s   = scenario_from_json(header.at("scenario"));
  int const      rep = header.at("repetition").get<int>();
  validate_scenario(s);

  std::vector<std::string> recorded;
  while (std::getline(in, line))
  {
    if (!line.empty())
    {
      recorded.push_back(line);
    }
  }
  auto const fresh = run_once(s, 0, rep).trace;

  ReplayReport report;
  report.slots = fresh.size();
  for (std::size_t i = 0; i < std::max(fresh.size(), recorded.size()); ++i)
  {
    if (i >= fresh.size() || i >= recorded.size() || fresh[i].to_json() != recorded[i])
    {
      report.detail = "first difference at slot line " + std::to_string(i + 1) + " (recorded " +
                      std::to_string(recorded.size()) + " lines, replay " + std::to_string(fresh.size()) + ")";
      return report;
    }
  }
  report.match  = true;
  report.detail = std::to_string(fresh.size()) + " slot lines identical";
  return report;
}

BoundsReport verify_bounds(json const &params)
{
  BoundsReport report;
  auto         check = [&](bool ok, std::string const &line) {
    report.pass = report.pass && ok;
    report.lines.push_back((ok ? "ok    " : "FAIL  ") + line);
  };
  auto info = [&](std::string const &line) { report.lines.push_back("info  " + line); };

  int const          n = get_or<int>(params, "n", 0);
  int const          t = get_or<int>(params, "t", 0);
  int const          c = get_or<int>(params, "c", SystemConfig::min_symbol_width(n));
  std::int64_t const L = get_or<std::int64_t>(params, "L", 0);
  int const          f = get_or<int>(params, "f", t);

  SystemConfig const config = SystemConfig::make(n, t, c, L, get_or<std::uint64_t>(params, "seed", 0));
  config.validate_coding();

  auto const per_gen = bounds::detectable_cost_bits(n, t, config.D);
  auto const total   = bounds::total_bb_cost_bits(n, t, L);
  auto const ratio   = bounds::cost_ratio(n, t);
  info("detectable_cost_bits(" + std::to_string(n) + "," + std::to_string(t) + "," + std::to_string(config.D) +
       ") = " + bounds::to_string(per_gen));
  info("total_bb_cost_bits = " + bounds::to_string(total));
  check(per_gen * bounds::Rational{config.generations()} == total,
        "detectable_cost_bits x L/D = total_bb_cost_bits");
  if (t >= 1)
  {
    check(ratio > 2 && ratio < 4, "ratio " + bounds::to_string(ratio) + " lies in (2, 4)");
  }

  auto strategy = make_strategy("honest", config);
  auto const x  = scenario_input(config);
  auto const outcome  = run_byzantine_broadcast(x, config, *strategy);
  auto const db_bits  = outcome.meter.phase(kPhaseDetectable).honest_bits;
  check(bounds::Rational{static_cast<std::int64_t>(db_bits)} == total,
        "measured DB bits " + std::to_string(db_bits) + " = total_bb_cost_bits");
  check(static_cast<std::int64_t>(outcome.meter.honest_messages()) >= bounds::message_lower_bound(t),
        "honest messages " + std::to_string(outcome.meter.honest_messages()) + " >= " +
            std::to_string(bounds::message_lower_bound(t)));
  check(static_cast<std::int64_t>(outcome.meter.honest_bits()) >= L,
        "honest bits " + std::to_string(outcome.meter.honest_bits()) + " >= L");
  auto const stat = bounds::static_db_lower_bound_bits(n, f, L);
  info("static_db_lower_bound_bits(f=" + std::to_string(f) + ") = " + bounds::to_string(stat) +
       (bounds::Rational{static_cast<std::int64_t>(db_bits)} >= stat ? " (DB bits at or above)" : " (DB bits below)"));

  if (params.contains("modular"))
  {
    auto const &m = params.at("modular");
    bounds::ModularBoundParams p;
    p.B                     = get_or<std::int64_t>(m, "B", 2);
    p.i                     = get_or<std::int64_t>(m, "i", 0);
    p.alpha                 = bounds::Rational{get_or<std::int64_t>(m, "alpha", 1)};
    int const exponent      = get_or<int>(m, "exponent", 3);
    p.m_star                = [exponent](bounds::Rational v) {
      bounds::Rational out{1};
      for (int k = 0; k < exponent; ++k)
      {
        out *= v;
      }
      return out;
    };
    std::int64_t const mt = get_or<std::int64_t>(m, "t", t);
    info("modular_bound(B=" + std::to_string(p.B) + ", i=" + std::to_string(p.i) + ", t=" + std::to_string(mt) +
         ") = " + bounds::to_string(bounds::modular_bound(p, mt)));
  }
  return report;
}

}  // namespace sbb
