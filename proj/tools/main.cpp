#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scenefuzz/campaign.hpp"

using namespace scenefuzz;

int main(int argc, char** argv) {
  CLI::App app{"scenario fuzzing for a simulated driving stack"};
  app.require_subcommand(1);

  // fuzz
  FuzzCommandOptions fuzz_opt;
  int fuzz_rounds = 0;
  std::uint64_t fuzz_seed = 0;
  std::string fuzz_fitness;
  double fuzz_duration = 0.0;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "run a fuzzing campaign");
  fuzz_cmd->add_option("--config", fuzz_opt.config_path, "campaign config file");
  fuzz_cmd->add_option("--out", fuzz_opt.out_dir,
                       "output directory (default: $SCENEFUZZ_OUT/campaign)");
  fuzz_cmd->add_flag("--force", fuzz_opt.force,
                     "replace an existing output directory");
  auto* rounds_o = fuzz_cmd->add_option("--rounds", fuzz_rounds,
                                        "override the number of rounds");
  auto* seed_o = fuzz_cmd->add_option("--seed", fuzz_seed,
                                      "override the master seed");
  auto* fitness_o = fuzz_cmd->add_option(
      "--fitness", fuzz_fitness, "fitness function: neuron or undetected");
  auto* duration_o = fuzz_cmd->add_option("--duration", fuzz_duration,
                                          "override seconds simulated per round");

  // replay
  ReplayCommandOptions replay_opt;
  auto* replay_cmd =
      app.add_subcommand("replay", "re-simulate a scenario or inspect a trace");
  replay_cmd->add_option("input", replay_opt.input_path, "scenario or trace file")
      ->required();
  replay_cmd->add_option("--profile", replay_opt.profile_path,
                         "detector profile (scenario input only)");
  replay_cmd->add_option("--duration", replay_opt.duration,
                         "seconds to simulate (default 5)");
  replay_cmd->add_option("--rate", replay_opt.frame_rate,
                         "frames per second (default 10)");
  replay_cmd->add_flag("--tracker", replay_opt.tracker,
                       "simulate with the coverage tracker");
  replay_cmd->add_option("--frames", replay_opt.frames,
                         "print per-frame lines for the range A:B");
  replay_cmd->add_option("--out", replay_opt.out_path, "write the trace here");

  // report
  ReportCommandOptions report_opt;
  auto* report_cmd =
      app.add_subcommand("report", "recompute reports from a campaign directory");
  report_cmd->add_option("dir", report_opt.campaign_dir, "campaign directory")
      ->required();

  // seeds
  SeedsCommandOptions seeds_opt;
  auto* seeds_cmd =
      app.add_subcommand("seeds", "generate a set of seed scenarios");
  seeds_cmd->add_option("--out", seeds_opt.out_dir,
                        "output directory (default: $SCENEFUZZ_OUT/seeds)");
  seeds_cmd->add_flag("--force", seeds_opt.force,
                      "replace an existing output directory");
  seeds_cmd->add_option("--map", seeds_opt.map_id, "map id (default two_lane)");
  seeds_cmd->add_option("--count", seeds_opt.count, "how many seeds (default 3)");
  seeds_cmd->add_option("--seed", seeds_opt.seed, "generator seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*fuzz_cmd) {
    if (rounds_o->count()) fuzz_opt.max_rounds = fuzz_rounds;
    if (seed_o->count()) fuzz_opt.master_seed = fuzz_seed;
    if (duration_o->count()) fuzz_opt.round_duration = fuzz_duration;
    if (fitness_o->count()) {
      auto k = fitness_kind_from_string(fuzz_fitness);
      if (!k) {
        std::cerr << "error: unknown fitness '" << fuzz_fitness << "'\n";
        return kExitConfig;
      }
      fuzz_opt.fitness = *k;
    }
    return cmd_fuzz(fuzz_opt, std::cout, std::cerr);
  }
  if (*replay_cmd) return cmd_replay(replay_opt, std::cout, std::cerr);
  if (*report_cmd) return cmd_report(report_opt, std::cout, std::cerr);
  return cmd_seeds(seeds_opt, std::cout, std::cerr);
}
