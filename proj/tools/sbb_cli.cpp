#include "sbb/errors.hpp"
#include "sbb/harness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(fs::path const &path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
  {
    throw sbb::ConfigError("cannot read " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

json parse_json(std::string const &text, std::string const &what)
{
  try
  {
    return json::parse(text);
  }
  catch (json::exception const &e)
  {
    throw sbb::ConfigError(what + " is not valid JSON: " + e.what());
  }
}

struct Common
{
  std::string                  out;
  std::string                  trace;
  std::optional<std::uint64_t> seed;
  int                          jobs = 1;
};

void add_common(CLI::App *cmd, Common &common)
{
  cmd->add_option("--out", common.out, "CSV output path (default: stdout)");
  cmd->add_option("--trace", common.trace, "directory for JSONL slot logs");
  cmd->add_option("--seed", common.seed, "base seed, overriding the file");
  cmd->add_option("--jobs", common.jobs, "parallel repetitions")->check(CLI::PositiveNumber);
}

int report(std::vector<sbb::Scenario> const &scenarios, Common const &common)
{
  sbb::RunOptions options;
  options.jobs = common.jobs;
  if (!common.trace.empty())
  {
    options.trace_dir = common.trace;
  }
  auto const records = sbb::run_scenarios(scenarios, options);
  auto const csv     = sbb::to_csv(records);
  if (common.out.empty())
  {
    std::cout << csv;
  }
  else
  {
    std::ofstream{common.out, std::ios::binary} << csv;
  }

  int failures = 0;
  for (auto const &r : records)
  {
    if (r.pass)
    {
      continue;
    }
    ++failures;
    fs::path const dir  = options.trace_dir.value_or(fs::path{"sbb_failures"});
    fs::path const path = dir / sbb::trace_file_name(r.scenario_index, r.repetition);
    if (!options.trace_dir)
    {
      fs::create_directories(dir);
      auto const result = sbb::run_once(scenarios[r.scenario_index], r.scenario_index, r.repetition);
      std::ofstream{path, std::ios::binary}
          << sbb::trace_document(scenarios[r.scenario_index], r.repetition, result.trace);
    }
    std::cerr << "FAIL scenario " << r.scenario_index << " repetition " << r.repetition << " seed " << r.seed << ": "
              << r.failure << "\n  replay: sbb_cli replay " << path.string() << "\n";
  }
  return failures == 0 ? 0 : 1;
}

std::vector<sbb::Scenario> load_scenarios(std::string const &path, std::optional<std::uint64_t> seed)
{
  json const                 doc = parse_json(slurp(path), path);
  std::vector<sbb::Scenario> scenarios;
  for (auto const &item : doc.is_array() ? doc : json::array({doc}))
  {
    scenarios.push_back(sbb::scenario_from_json(item));
  }
  for (auto &s : scenarios)
  {
    if (seed)
    {
      s.seed        = *seed;
      s.config.seed = *seed;
    }
    sbb::validate_scenario(s);
  }
  return scenarios;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Byzantine Broadcast simulator on the selective-broadcast channel"};
  app.require_subcommand(1);

  Common      run_opts;
  std::string scenario_path;
  auto       *run = app.add_subcommand("run", "run a scenario file (one object or an array)");
  run->add_option("scenario", scenario_path)->required();
  add_common(run, run_opts);

  Common      sweep_opts;
  std::string grid_path;
  auto       *sweep = app.add_subcommand("sweep", "run the Cartesian product of a grid file");
  sweep->add_option("grid", grid_path)->required();
  add_common(sweep, sweep_opts);

  std::string bounds_params;
  auto       *verify = app.add_subcommand("verify-bounds", "evaluate the cost formulas and check them against a run");
  verify->add_option("params", bounds_params, "JSON file or inline JSON object")->required();

  std::string trace_path;
  auto       *replay = app.add_subcommand("replay", "re-run a trace and compare it slot by slot");
  replay->add_option("trace", trace_path)->required();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*run)
    {
      return report(load_scenarios(scenario_path, run_opts.seed), run_opts);
    }
    if (*sweep)
    {
      json grid = parse_json(slurp(grid_path), grid_path);
      if (sweep_opts.seed)
      {
        grid["seed"] = *sweep_opts.seed;
      }
      auto const plan = sbb::expand_grid(grid);
      for (auto const &why : plan.rejected)
      {
        std::cerr << "skipped " << why << "\n";
      }
      return report(plan.scenarios, sweep_opts);
    }
    if (*verify)
    {
      std::string const text = fs::exists(bounds_params) ? slurp(bounds_params) : bounds_params;
      auto const        rep  = sbb::verify_bounds(parse_json(text, "bounds parameters"));
      for (auto const &line : rep.lines)
      {
        std::cout << line << "\n";
      }
      return rep.pass ? 0 : 1;
    }
    auto const rep = sbb::replay_trace(slurp(trace_path));
    std::cout << (rep.match ? "match: " : "mismatch: ") << rep.detail << "\n";
    return rep.match ? 0 : 1;
  }
  catch (sbb::ConfigError const &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
