#include "sbb/errors.hpp"
#include "sbb/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sbb;
using nlohmann::json;

namespace {

Scenario scenario(json const &j)
{
  return scenario_from_json(j);
}

std::string read_file(std::filesystem::path const &p)
{
  std::ifstream      in{p, std::ios::binary};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Harness, HonestScenario)
{
  auto const records = run_scenario(scenario({{"n", 4}, {"t", 1}, {"c", 3}, {"L", 12}}), {});
  ASSERT_EQ(records.size(), 1U);
  auto const &r = records.front();
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.db_honest_bits, 30U);
  EXPECT_EQ(r.dispute_control_invocations, 0);
  EXPECT_EQ(r.total_bb_cost_bits, "30");
  EXPECT_EQ(r.total_bb_cost_satisfied, "yes");
  EXPECT_EQ(r.message_lower_bound_satisfied, "yes");
}

TEST(Harness, EquivocatingScenario)
{
  auto const records = run_scenario(
      scenario({{"n", 4}, {"t", 1}, {"c", 3}, {"L", 12}, {"strategy", "equivocating_source"}, {"repetitions", 10}}), {});
  ASSERT_EQ(records.size(), 10U);
  for (auto const &r : records)
  {
    EXPECT_TRUE(r.pass) << r.failure;
    EXPECT_GE(r.dispute_control_invocations, 1);
    EXPECT_LE(r.dispute_control_invocations, 2);
  }
}

TEST(Harness, Algorithm2IndependentOfN)
{
  auto const small = run_scenario(scenario({{"n", 10}, {"t", 1}, {"L", 1}, {"algorithm", "algo2"}}), {});
  auto const large = run_scenario(scenario({{"n", 25}, {"t", 1}, {"L", 1}, {"algorithm", "algo2"}}), {});
  EXPECT_EQ(small.front().honest_messages, large.front().honest_messages);
}

TEST(Harness, RejectsInvalidScenariosUpFront)
{
  EXPECT_THROW(run_scenario(scenario({{"n", 3}, {"t", 1}, {"L", 6}}), {}), ConfigError);
  EXPECT_THROW(run_scenario(scenario({{"n", 4}, {"t", 1}, {"c", 3}, {"L", 7}}), {}), ConfigError);
  EXPECT_THROW(run_scenario(scenario({{"n", 4}, {"t", 1}, {"L", 6}, {"strategy", "bogus"}}), {}), ConfigError);
  EXPECT_THROW(scenario({{"n", 4}, {"t", 1}}), ConfigError);
  EXPECT_THROW(scenario({{"n", 4}, {"t", 1}, {"L", 6}, {"algorithm", "pbft"}}), ConfigError);
}

TEST(Harness, ScenarioJsonRoundTrip)
{
  auto const s = scenario({{"n", 7},
                           {"t", 2},
                           {"generations", 2},
                           {"strategy", {{"name", "equivocating_source"}, {"corrupt", {1, 5}}, {"alternate", "0"}}},
                           {"seed", 17},
                           {"mode", "point_to_point"}});
  EXPECT_EQ(s.config.c, 3);
  EXPECT_EQ(s.config.L, 18);
  auto const again = scenario_from_json(json::parse(scenario_to_json(s).dump()));
  EXPECT_EQ(scenario_to_json(again).dump(), scenario_to_json(s).dump());
}

TEST(Harness, SweepSkipsInvalidPoints)
{
  json const grid = {{"n", {4, 7, 10, 5}}, {"t", "max"}, {"generations", 1}, {"c", {3, 4}}};
  auto const plan = expand_grid(grid);
  // c = 3 cannot host n = 10; n = 5 with t = 1 is fine.
  EXPECT_EQ(plan.scenarios.size(), 7U);
  EXPECT_EQ(plan.rejected.size(), 1U);
  auto const records = run_scenarios(plan.scenarios, {});
  for (auto const &r : records)
  {
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.total_bb_cost_satisfied, "yes");
  }
}

TEST(Harness, SweepLengthScalesLinearly)
{
  json const grid    = {{"n", 7}, {"t", 2}, {"c", 3}, {"generations", {1, 10, 100}}};
  auto const records = run_scenarios(expand_grid(grid).scenarios, {});
  ASSERT_EQ(records.size(), 3U);
  EXPECT_EQ(records[1].db_honest_bits, 10 * records[0].db_honest_bits);
  EXPECT_EQ(records[2].db_honest_bits, 100 * records[0].db_honest_bits);
}

TEST(Harness, CsvAndTracesAreReproducibleAcrossJobCounts)
{
  namespace fs  = std::filesystem;
  auto const dir = fs::temp_directory_path() / "sbb_harness_test";
  fs::remove_all(dir);
  std::vector<Scenario> scenarios{
      scenario({{"n", 7}, {"t", 2}, {"c", 3}, {"L", 18}, {"strategy", "randomized_byzantine"}, {"repetitions", 4}}),
      scenario({{"n", 10}, {"t", 2}, {"L", 5}, {"algorithm", "algo2"}, {"strategy", "claim_liar"}, {"repetitions", 3}})};

  auto const one  = to_csv(run_scenarios(scenarios, RunOptions{1, dir / "a"}));
  auto const many = to_csv(run_scenarios(scenarios, RunOptions{4, dir / "b"}));
  EXPECT_EQ(one, many);
  EXPECT_EQ(one.substr(0, one.find('\n')), csv_header());
  for (auto const &entry : fs::directory_iterator(dir / "a"))
  {
    auto const name = entry.path().filename();
    EXPECT_EQ(read_file(entry.path()), read_file(dir / "b" / name)) << name;
  }
  auto const report = replay_trace(read_file(dir / "a" / trace_file_name(0, 2)));
  EXPECT_TRUE(report.match) << report.detail;
  EXPECT_GT(report.slots, 0U);

  auto tampered = read_file(dir / "a" / trace_file_name(1, 1));
  tampered.insert(tampered.find('\n') + 1, R"({"round":0})" "\n");
  EXPECT_FALSE(replay_trace(tampered).match);
  fs::remove_all(dir);
}

TEST(Harness, VerifyBounds)
{
  auto const report = verify_bounds(json{{"n", 4}, {"t", 1}, {"c", 3}, {"L", 12},
                                         {"modular", {{"B", 2}, {"i", 1}, {"t", 4}}}});
  EXPECT_TRUE(report.pass);
  bool saw_modular = false;
  for (auto const &line : report.lines)
  {
    saw_modular = saw_modular || line.find("= 694") != std::string::npos;
  }
  EXPECT_TRUE(saw_modular);
}
