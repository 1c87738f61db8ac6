#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scenefuzz/fuzzer.hpp"
#include "scenefuzz/outcome.hpp"

namespace scenefuzz {

enum class TrackerMode { automatic, on, off };

const char* to_string(TrackerMode m);
std::optional<TrackerMode> tracker_mode_from_string(std::string_view s);

// Campaign settings as stored in a config file. Everything has a usable
// default, so an empty document is a valid campaign.
struct CampaignConfig {
  std::string map_id = "two_lane";
  FitnessKind fitness = FitnessKind::neuron_novelty;
  int max_rounds = 100;
  std::uint64_t master_seed = 1;
  double round_duration = 5.0;
  double frame_rate = 10.0;
  double gate = kDefaultGate;
  int seed_count = 3;       // generated seeds when no explicit files are listed
  double long_run_duration = 40.0;  // verdict re-runs of the top-ranked
  int long_run_top = 5;
  TrackerMode tracker = TrackerMode::automatic;
  std::string profile_path;             // empty = built-in default profile
  std::vector<std::string> seed_paths;  // explicit seed scenario files
};

CampaignConfig parse_campaign_config(std::string_view text);
std::string format_campaign_config(const CampaignConfig& c);
CampaignConfig load_campaign_config(const std::string& path);
void save_campaign_config(const std::string& path, const CampaignConfig& c);

// Whether the campaign simulates with a coverage tracker: automatic enables
// it exactly when the fitness needs it.
bool tracker_enabled(const CampaignConfig& c);

// Output directory fallback: the SCENEFUZZ_OUT environment variable, then
// the current directory.
std::string resolve_out_dir(const std::string& explicit_dir,
                            const std::string& default_name);

// Command entry points, kept in the library so tests can drive them
// in-process. Exit codes: 0 success, 2 configuration or parse problem,
// 3 filesystem problem, 4 campaign-level failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitCampaign = 4;

struct FuzzCommandOptions {
  std::string config_path;  // empty = defaults
  std::string out_dir;      // empty = resolve_out_dir(.., "campaign")
  bool force = false;       // replace an existing output directory
  std::optional<int> max_rounds;
  std::optional<std::uint64_t> master_seed;
  std::optional<FitnessKind> fitness;
  std::optional<double> round_duration;
};

struct ReplayCommandOptions {
  std::string input_path;    // scenario file, or an existing trace file
  std::string profile_path;  // scenario input only; empty = default profile
  double duration = 5.0;
  double frame_rate = 10.0;
  bool tracker = false;
  std::string frames;    // "A:B" range to print; empty = summary only
  std::string out_path;  // write the (re)produced trace here
};

struct ReportCommandOptions {
  std::string campaign_dir;
};

struct SeedsCommandOptions {
  std::string out_dir;  // empty = resolve_out_dir(.., "seeds")
  bool force = false;
  std::string map_id = "two_lane";
  int count = 3;
  std::uint64_t seed = 1;
};

int cmd_fuzz(const FuzzCommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayCommandOptions& opt, std::ostream& out,
               std::ostream& err);
int cmd_report(const ReportCommandOptions& opt, std::ostream& out,
               std::ostream& err);
int cmd_seeds(const SeedsCommandOptions& opt, std::ostream& out,
              std::ostream& err);

}  // namespace scenefuzz
