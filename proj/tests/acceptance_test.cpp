// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "bb_checks.hpp"
#include "oracles.hpp"

#include "sbb/adversary.hpp"
#include "sbb/bounds.hpp"
#include "sbb/committee_bb.hpp"
#include "sbb/dispute_bb.hpp"
#include "sbb/harness.hpp"
#include "sbb/rng.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace sbb;
using bounds::Rational;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void verdict(int id, bool ok, std::string const &detail)
{
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

constexpr int kSeeds = 100;

struct Run
{
  Algorithm   algorithm;
  std::string strategy;
  int         n;
  int         t;
  BbOutcome   outcome;
  FaultOracle faulty;
  BitString   x;
  std::string error;
};

std::vector<Run> catalog_runs()
{
  std::vector<Run> runs;
  for (auto const [n, t] : {std::pair{4, 1}, std::pair{7, 2}})
  {
    for (auto const algorithm : {Algorithm::kDisputeBb, Algorithm::kAlgorithm2})
    {
      for (auto const &name : strategy_names())
      {
        for (std::uint64_t seed = 0; seed < kSeeds; ++seed)
        {
          SystemConfig const cfg = SystemConfig::make(n, t, 3, 3 * 3 * (n - 2 * t), seed);
          Run                run{algorithm, name, n, t, BbOutcome{}, FaultOracle{}, scenario_input(cfg), std::string{}};
          StrategyOptions    options;
          if (algorithm == Algorithm::kAlgorithm2)
          {
            options.pool = CommitteeLayout::make(cfg).active;
          }
          auto strategy = make_strategy(name, cfg, options);
          run.faulty    = strategy->corrupt_set();
          try
          {
            run.outcome = algorithm == Algorithm::kDisputeBb ? run_byzantine_broadcast(run.x, cfg, *strategy)
                                                             : run_algorithm2(run.x, cfg, *strategy);
          }
          catch (std::exception const &e)
          {
            run.error = name + " seed " + std::to_string(seed) + ": " + e.what();
          }
          runs.push_back(std::move(run));
        }
      }
    }
  }
  return runs;
}

void criterion1()
{
  bool        ok = true;
  std::string detail;
  for (auto const &[n, t, c, L] : {std::tuple{4, 1, 3, 12}, std::tuple{7, 2, 3, 18}, std::tuple{10, 3, 4, 160}})
  {
    auto const         start    = Clock::now();
    SystemConfig const cfg      = SystemConfig::make(n, t, c, L, 1);
    auto               honest   = make_strategy("honest", cfg);
    auto const         out      = run_byzantine_broadcast(scenario_input(cfg), cfg, *honest);
    double const       elapsed  = seconds_since(start);
    auto const         measured = out.meter.phase(kPhaseDetectable).honest_bits;
    auto const         formula  = bounds::total_bb_cost_bits(n, t, L);
    ok = ok && Rational{static_cast<std::int64_t>(measured)} == formula && elapsed < 1.0;
    detail += "(" + std::to_string(n) + "," + std::to_string(t) + "," + std::to_string(c) + "," + std::to_string(L) +
              ") " + std::to_string(measured) + "=" + bounds::to_string(formula) + " ";
  }
  verdict(1, ok, "DB honest bits vs L(2n-2t-1)/(n-2t): " + detail);
}

void criterion2()
{
  int checked = 0;
  int bad     = 0;
  for (int t = 1; t <= 5; ++t)
  {
    for (int n = 3 * t + 1; n <= 3 * t + 10; ++n)
    {
      auto const ratio = bounds::total_bb_cost_bits(n, t, 1);
      bad += ratio > 2 && ratio < 4 ? 0 : 1;
      ++checked;
    }
  }
  verdict(2, bad == 0, std::to_string(checked) + " (n,t) pairs, " + std::to_string(bad) + " outside (2,4)");
}

void criterion3(std::vector<Run> const &runs)
{
  int         generations = 0;
  int         violations  = 0;
  std::string first;
  for (auto const &run : runs)
  {
    if (run.algorithm != Algorithm::kDisputeBb || !run.error.empty())
    {
      violations += run.error.empty() ? 0 : 1;
      continue;
    }
    auto const code = make_code(SystemConfig::make(run.n, run.t, 3, 3 * (run.n - 2 * run.t)));
    auto const v    = checks::lemma1_violations(run.outcome, run.x, run.faulty, code);
    generations += static_cast<int>(run.outcome.generations.size());
    violations += static_cast<int>(v.size());
    if (!v.empty() && first.empty())
    {
      first = run.strategy + ": " + v.front();
    }
  }
  verdict(3, violations == 0,
          std::to_string(generations) + " generations, " + std::to_string(violations) + " violations " + first);
}

void criterion4(std::vector<Run> const &runs, double elapsed)
{
  int         bad = 0;
  std::string first;
  for (auto const &run : runs)
  {
    std::string why = run.error;
    if (why.empty())
    {
      auto const v = check_bb_properties(run.outcome, run.x, run.faulty);
      if (!v)
      {
        why = to_string(run.algorithm) + "/" + run.strategy + ": " + to_string(v.property) + " " + v.reason;
      }
    }
    if (!why.empty())
    {
      ++bad;
      first = first.empty() ? why : first;
    }
  }
  verdict(4, bad == 0 && elapsed < 60.0,
          std::to_string(runs.size()) + " runs, " + std::to_string(bad) + " violations, " +
              std::to_string(elapsed).substr(0, 5) + " s " + first);
}

void criterion5(std::vector<Run> const &runs)
{
  int pairs = 0, stalled = 0, over = 0, invocations = 0;
  for (auto const &run : runs)
  {
    if (run.algorithm != Algorithm::kDisputeBb || !run.error.empty())
    {
      continue;
    }
    auto const d = checks::dispute_discipline(run.outcome, run.faulty, run.t);
    pairs += d.fault_free_pairs;
    stalled += d.stalled_invocations;
    over += d.within_cap ? 0 : 1;
    invocations += run.outcome.dispute_control_invocations;
  }
  verdict(5, pairs == 0 && stalled == 0 && over == 0,
          std::to_string(invocations) + " dispute-control invocations; fault-free pairs " + std::to_string(pairs) +
              ", fault-free-triggered invocations without a new pair " + std::to_string(stalled) +
              ", executions over t(t+1) " + std::to_string(over));
}

void criterion6()
{
  auto const          start = Clock::now();
  ReedSolomonCode const code{GaloisField{gf::FieldSpec::with_default_polynomial(3)}, 4, 1};
  oracle::Field const o{3, gf::default_polynomial(3)};
  Rng                 rng{6};
  int                 cases = 0, disagreements = 0;
  for (std::uint32_t a = 0; a < 8; ++a)
  {
    for (std::uint32_t b = 0; b < 8; ++b)
    {
      auto const word = code.encode(DataBlock{{code.field().element(a), code.field().element(b)}});
      for (int trial = 0; trial < 500; ++trial)
      {
        std::vector<std::optional<std::uint32_t>> raw;
        PartialView                               view;
        int const nulls = static_cast<int>(rng.below(3));
        std::set<std::uint64_t> null_at;
        while (static_cast<int>(null_at.size()) < nulls)
        {
          null_at.insert(rng.below(4));
        }
        for (std::size_t j = 0; j < 4; ++j)
        {
          std::uint32_t s = word.symbols[j].value;
          if (rng.chance(1, 3))
          {
            s ^= static_cast<std::uint32_t>(1 + rng.below(7));
          }
          std::optional<std::uint32_t> entry = null_at.count(j) != 0 ? std::nullopt : std::optional{s};
          raw.push_back(entry);
          view.entries.push_back(entry ? std::optional{code.field().element(*entry)} : std::nullopt);
        }
        auto const expected = oracle::all_subsets_solution(o, raw, 2);
        auto const got      = code.check_consistency(view);
        bool       same     = got.has_value() == expected.has_value();
        if (same && got)
        {
          same = got->symbols[0].value == (*expected)[0] && got->symbols[1].value == (*expected)[1];
        }
        disagreements += same ? 0 : 1;
        ++cases;
      }
    }
  }
  double const elapsed = seconds_since(start);
  verdict(6, disagreements == 0 && elapsed < 5.0,
          std::to_string(cases) + " views, " + std::to_string(disagreements) + " disagreements, " +
              std::to_string(elapsed).substr(0, 5) + " s");
}

void criterion7(std::vector<Run> const &runs)
{
  int mismatched_n = 0, passive_senders = 0, too_few = 0, coalescing = 0, compared = 0;
  for (auto const &name : strategy_names())
  {
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      SystemConfig const small = SystemConfig::make(10, 1, 4, 4, seed);
      SystemConfig const large = SystemConfig::make(25, 1, 5, 4, seed);
      StrategyOptions    os, ol;
      os.pool    = CommitteeLayout::make(small).active;
      ol.pool    = CommitteeLayout::make(large).active;
      auto a     = make_strategy(name, small, os);
      auto b     = make_strategy(name, large, ol);
      auto const x = scenario_input(small);
      auto const r = run_algorithm2(x, small, *a);
      auto const q = run_algorithm2(x, large, *b);
      mismatched_n += r.meter.honest_messages() == q.meter.honest_messages() ? 0 : 1;
      for (auto const *out : {&r, &q})
      {
        auto const layout = CommitteeLayout::make(out == &r ? small : large);
        for (auto const &entry : out->phase_trace)
        {
          passive_senders += layout.is_active(entry.sender) ? 0 : 1;
        }
        too_few += out->meter.honest_messages() > 1U ? 0 : 1;
      }

      auto c        = make_strategy(name, small, os);
      auto const pp = run_algorithm2(x, small, *c, ChannelMode::kPointToPoint);
      coalescing += pp.outputs == r.outputs && r.meter.honest_messages() < pp.meter.honest_messages() ? 0 : 1;
      ++compared;
    }
  }
  for (auto const &run : runs)
  {
    if (run.algorithm == Algorithm::kAlgorithm2 && run.error.empty())
    {
      too_few += static_cast<int>(run.outcome.meter.honest_messages()) > run.t ? 0 : 1;
    }
  }
  verdict(7, mismatched_n == 0 && passive_senders == 0 && too_few == 0 && coalescing == 0,
          std::to_string(compared) + " n=10/n=25 pairs: count mismatches " + std::to_string(mismatched_n) +
              ", passive sends " + std::to_string(passive_senders) + ", runs with <= t honest messages " +
              std::to_string(too_few) + ", coalescing failures " + std::to_string(coalescing));
}

void criterion8(std::vector<Run> const &runs)
{
  int below_l = 0, below_static = 0, counted = 0;
  for (auto const &run : runs)
  {
    if (!run.error.empty())
    {
      continue;
    }
    ++counted;
    auto const bits = static_cast<std::int64_t>(run.outcome.meter.honest_bits());
    below_l += bits >= static_cast<std::int64_t>(run.x.size()) ? 0 : 1;
    below_static += Rational{bits} >= bounds::static_db_lower_bound_bits(run.n, run.t, run.x.size()) ? 0 : 1;
  }

  bounds::ModularBoundParams p;
  p.m_star = [](Rational m) { return m * m * m; };
  bool formulas = bounds::detectable_cost_bits(4, 1, 6) == Rational{15} && bounds::detectable_cost_bits(7, 2, 9) == Rational{27} &&
                  bounds::total_bb_cost_bits(4, 1, 12) == Rational{30} && bounds::total_bb_cost_bits(7, 2, 18) == Rational{54} &&
                  bounds::cost_ratio(4, 1) == Rational(5, 2) && bounds::static_db_lower_bound_bits(4, 1, 6) == Rational{12} &&
                  bounds::static_db_lower_bound_bits(7, 2, 10) == Rational{22} && bounds::message_lower_bound(0) == 1 &&
                  bounds::message_lower_bound(1) == 2 && bounds::message_lower_bound(5) == 6;
  for (auto const [i, expected] : {std::pair{0, 2197}, std::pair{1, 694}, std::pair{2, 272}})
  {
    p.i      = i;
    formulas = formulas && bounds::modular_bound(p, 4) == Rational{expected};
  }
  verdict(8, below_l == 0 && formulas,
          std::to_string(counted) + " runs with honest bits < L: " + std::to_string(below_l) +
              "; below static DB bound (reported only): " + std::to_string(below_static) +
              "; formula examples " + (formulas ? "exact" : "MISMATCH"));
}

std::string slurp(std::filesystem::path const &p)
{
  std::ifstream      in{p, std::ios::binary};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion9()
{
  namespace fs  = std::filesystem;
  auto const root = fs::temp_directory_path() / "sbb_acceptance_determinism";
  fs::remove_all(root);
  std::vector<Scenario> scenarios;
  for (auto const &name : strategy_names())
  {
    for (auto const algorithm : {"dispute_bb", "algo2"})
    {
      scenarios.push_back(scenario_from_json(
          {{"n", 7}, {"t", 2}, {"c", 3}, {"generations", 3}, {"algorithm", algorithm}, {"strategy", name},
           {"repetitions", 3}, {"seed", 42}}));
    }
  }
  auto const a = to_csv(run_scenarios(scenarios, RunOptions{1, root / "a"}));
  auto const b = to_csv(run_scenarios(scenarios, RunOptions{4, root / "b"}));
  int        files = 0, differing = 0;
  for (auto const &entry : fs::directory_iterator(root / "a"))
  {
    ++files;
    differing += slurp(entry.path()) == slurp(root / "b" / entry.path().filename()) ? 0 : 1;
  }
  fs::remove_all(root);
  verdict(9, a == b && differing == 0 && files > 0,
          std::string{"CSV "} + (a == b ? "identical" : "DIFFERS") + ", " + std::to_string(files) + " traces, " +
              std::to_string(differing) + " differing");
}

}  // namespace

int main()
{
  criterion1();
  criterion2();
  auto const start   = Clock::now();
  auto const runs    = catalog_runs();
  double const elapsed = seconds_since(start);
  criterion3(runs);
  criterion4(runs, elapsed);
  criterion5(runs);
  criterion6();
  criterion7(runs);
  criterion8(runs);
  criterion9();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
