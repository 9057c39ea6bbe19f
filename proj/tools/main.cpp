#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "iotsdn/engine.hpp"
#include "iotsdn/errors.hpp"
#include "iotsdn/scenario.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const iotsdn::RunOptions& options,
            const std::string& out_dir) {
  iotsdn::Scenario scenario = iotsdn::load_scenario(scenario_path);
  iotsdn::CsvSink sink{std::filesystem::path(out_dir)};
  iotsdn::RunResult result = iotsdn::run(scenario, options, &sink);
  iotsdn::write_summary(std::filesystem::path(out_dir) / "summary.txt",
                        result.summary);
  std::cout << iotsdn::format_summary(result.summary);
  return 0;
}

int cmd_compare(const std::string& scenario_path, const std::string& out_dir) {
  iotsdn::Scenario scenario = iotsdn::load_scenario(scenario_path);
  iotsdn::CompareResult result = iotsdn::compare(scenario);
  std::filesystem::create_directories(out_dir);
  iotsdn::write_compare_csv(std::filesystem::path(out_dir) / "compare.csv",
                            result);
  std::ofstream summary(std::filesystem::path(out_dir) / "summary.txt",
                        std::ios::binary | std::ios::trunc);
  summary << iotsdn::format_compare(result);
  std::cout << iotsdn::format_compare(result);
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  iotsdn::Scenario scenario = iotsdn::load_scenario(scenario_path);
  std::cout << "scenario " << scenario.name << " valid: "
            << scenario.nodes.size() << " nodes, " << scenario.links.size()
            << " links, " << scenario.events.size() << " events, ends at tick "
            << scenario.end_tick << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IoT pub/sub traffic orchestration over an SDN-managed edge"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  bool integrated = true;
  int tick_ms = 0;
  std::uint64_t seed = 0;

  CLI::App* run_cmd =
      app.add_subcommand("run", "Run a scenario and write CSV metrics");
  run_cmd->add_option("scenario", scenario_path,
                      "Scenario file, or the built-in name 'paper-poc'")
      ->required();
  run_cmd->add_option("--integrated", integrated,
                      "Lend idle TC1/TC2 capacity to IoT traffic");
  run_cmd->add_option("--out", out_dir, "Output directory");
  CLI::Option* tick_opt =
      run_cmd->add_option("--tick", tick_ms, "Tick length in milliseconds");
  CLI::Option* seed_opt =
      run_cmd->add_option("--seed", seed, "Ingest jitter seed");

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Run both modes and write the utilization series");
  compare_cmd
      ->add_option("scenario", scenario_path,
                   "Scenario file, or the built-in name 'paper-poc'")
      ->required();
  compare_cmd->add_option("--out", out_dir, "Output directory");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Parse and validate a scenario");
  validate_cmd
      ->add_option("scenario", scenario_path,
                   "Scenario file, or the built-in name 'paper-poc'")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      iotsdn::RunOptions options;
      options.integrated = integrated;
      if (tick_opt->count() > 0) {
        options.tick_ms = tick_ms;
      }
      if (seed_opt->count() > 0) {
        options.seed = seed;
      }
      return cmd_run(scenario_path, options, out_dir);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(scenario_path, out_dir);
    }
    if (validate_cmd->parsed()) {
      return cmd_validate(scenario_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
