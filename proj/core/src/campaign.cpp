#include "scenefuzz/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <set>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/textio.hpp"
#include "scenefuzz/trace_io.hpp"

namespace scenefuzz {

namespace fs = std::filesystem;
using textio::ParseError;

const char* to_string(TrackerMode m) {
  switch (m) {
    case TrackerMode::automatic: return "auto";
    case TrackerMode::on: return "on";
    case TrackerMode::off: return "off";
  }
  return "?";
}

std::optional<TrackerMode> tracker_mode_from_string(std::string_view s) {
  if (s == "auto") return TrackerMode::automatic;
  if (s == "on") return TrackerMode::on;
  if (s == "off") return TrackerMode::off;
  return std::nullopt;
}

CampaignConfig parse_campaign_config(std::string_view text) {
  textio::Node root = textio::parse_document(text);
  textio::check_fields(root,
                       {"map", "fitness", "maxRounds", "masterSeed",
                        "roundDuration", "frameRate", "gate", "seedCount",
                        "longRunDuration", "longRunTop", "tracker", "profile",
                        "seed"},
                       {"seed"});
  CampaignConfig c;
  if (const auto* n = root.find("map")) c.map_id = n->value;
  if (const auto* n = root.find("fitness")) {
    auto k = fitness_kind_from_string(n->value);
    if (!k) throw ParseError(n->line, "unknown fitness '" + n->value + "'");
    c.fitness = *k;
  }
  if (const auto* n = root.find("maxRounds")) {
    c.max_rounds = static_cast<int>(textio::as_i64(*n));
    if (c.max_rounds < 0) throw ParseError(n->line, "maxRounds must be non-negative");
  }
  if (const auto* n = root.find("masterSeed")) c.master_seed = textio::as_u64(*n);
  if (const auto* n = root.find("roundDuration")) {
    c.round_duration = textio::as_double(*n);
    if (!(c.round_duration > 0)) throw ParseError(n->line, "roundDuration must be positive");
  }
  if (const auto* n = root.find("frameRate")) {
    c.frame_rate = textio::as_double(*n);
    if (!(c.frame_rate > 0)) throw ParseError(n->line, "frameRate must be positive");
  }
  if (const auto* n = root.find("gate")) {
    c.gate = textio::as_double(*n);
    if (!(c.gate >= 0)) throw ParseError(n->line, "gate must be non-negative");
  }
  if (const auto* n = root.find("seedCount")) {
    c.seed_count = static_cast<int>(textio::as_i64(*n));
    if (c.seed_count < 1) throw ParseError(n->line, "seedCount must be at least 1");
  }
  if (const auto* n = root.find("longRunDuration")) {
    c.long_run_duration = textio::as_double(*n);
    if (!(c.long_run_duration > 0))
      throw ParseError(n->line, "longRunDuration must be positive");
  }
  if (const auto* n = root.find("longRunTop")) {
    c.long_run_top = static_cast<int>(textio::as_i64(*n));
    if (c.long_run_top < 0) throw ParseError(n->line, "longRunTop must be non-negative");
  }
  if (const auto* n = root.find("tracker")) {
    auto m = tracker_mode_from_string(n->value);
    if (!m) throw ParseError(n->line, "tracker must be auto, on, or off");
    c.tracker = *m;
  }
  if (const auto* n = root.find("profile")) c.profile_path = n->value;
  for (const auto& n : root.children)
    if (n.key == "seed") c.seed_paths.push_back(n.value);
  return c;
}

std::string format_campaign_config(const CampaignConfig& c) {
  textio::Writer w;
  w.field("map", c.map_id);
  w.field("fitness", to_string(c.fitness));
  w.field("maxRounds", c.max_rounds);
  w.field("masterSeed", c.master_seed);
  w.field("roundDuration", c.round_duration);
  w.field("frameRate", c.frame_rate);
  w.field("gate", c.gate);
  w.field("seedCount", c.seed_count);
  w.field("longRunDuration", c.long_run_duration);
  w.field("longRunTop", c.long_run_top);
  w.field("tracker", to_string(c.tracker));
  if (!c.profile_path.empty()) w.field("profile", c.profile_path);
  for (const std::string& s : c.seed_paths) w.field("seed", s);
  return w.str();
}

CampaignConfig load_campaign_config(const std::string& path) {
  return parse_campaign_config(textio::read_file(path));
}

void save_campaign_config(const std::string& path, const CampaignConfig& c) {
  textio::write_file(path, format_campaign_config(c));
}

bool tracker_enabled(const CampaignConfig& c) {
  switch (c.tracker) {
    case TrackerMode::on: return true;
    case TrackerMode::off: return false;
    case TrackerMode::automatic:
      return c.fitness == FitnessKind::neuron_novelty;
  }
  return false;
}

std::string resolve_out_dir(const std::string& explicit_dir,
                            const std::string& default_name) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("SCENEFUZZ_OUT"); env && *env)
    return (fs::path(env) / default_name).string();
  return default_name;
}

namespace {

constexpr const char* kNa = "NA";

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_num(double v) {
  if (!std::isfinite(v)) return kNa;
  return textio::fmt_double(v);
}

std::string csv_opt(const std::optional<double>& v) {
  return v ? csv_num(*v) : kNa;
}

// Seed scenarios and their stable ids. The seed stream is tagged so it can
// never collide with the per-round streams derived from the same master seed.
constexpr std::uint64_t kSeedStreamTag = 0x5eed0000ULL;

std::string seed_id(int i) {  // 1-based
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%02d", i);
  return buf;
}

std::vector<SeedScenario> generate_seed_set(const MapSpec& map, int count,
                                            std::uint64_t master_seed) {
  auto scenarios =
      make_initial_seeds(map, count, hash_combine(master_seed, kSeedStreamTag));
  std::vector<SeedScenario> out;
  for (int i = 0; i < count; ++i)
    out.push_back({seed_id(i + 1), std::move(scenarios[i])});
  return out;
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory '" + p.string() + "': " + ec.message());
}

void prepare_out_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!force)
      throw IoError("output directory '" + dir.string() +
                    "' already exists (pass --force to replace it)");
    fs::remove_all(dir, ec);
    if (ec)
      throw IoError("cannot clear '" + dir.string() + "': " + ec.message());
  }
  ensure_dir(dir);
}

std::string indent_block(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    out += "  ";
    out.append(text.substr(pos, eol - pos));
    out += '\n';
    pos = eol + 1;
  }
  return out;
}

struct SavingObserver final : FuzzObserver {
  fs::path dir;
  std::set<std::string> seed_ids;

  void on_evaluated(const std::string& id, const Scenario& scenario,
                    const RoundTrace& trace, const RoundSummary&) override {
    if (!seed_ids.count(id))
      save_scenario((dir / "scenarios" / (id + ".scn")).string(), scenario);
    save_trace((dir / "traces" / (id + ".trace")).string(), trace);
  }
};

std::string manifest_text(const CampaignConfig& c, bool tracker_on,
                          const DetectorProfile& profile,
                          const std::vector<SeedScenario>& seeds) {
  std::string out = "campaign: v1\n";
  textio::Writer w;
  w.field("map", c.map_id);
  w.field("fitness", to_string(c.fitness));
  w.field("maxRounds", c.max_rounds);
  w.field("masterSeed", c.master_seed);
  w.field("roundDuration", c.round_duration);
  w.field("frameRate", c.frame_rate);
  w.field("gate", c.gate);
  w.field("longRunDuration", c.long_run_duration);
  w.field("longRunTop", c.long_run_top);
  w.field("tracker", tracker_on ? "on" : "off");
  for (const SeedScenario& s : seeds) w.field("seed", s.id);
  out += w.str();
  out += "profile:\n" + indent_block(format_profile(profile));
  return out;
}

std::string rounds_csv(const std::vector<RoundRecord>& records) {
  std::string out =
      "round,parentId,childId,op,fitness,accepted,childFrames,"
      "childAvgUndetected,childDanger,childCaution,error\n";
  for (const RoundRecord& r : records) {
    out += textio::fmt_i64(r.round) + ',' + csv_escape(r.parent_id) + ',' +
           csv_escape(r.child_id) + ',' + csv_escape(r.op) + ',';
    if (r.error.empty()) {
      const RoundSummary& s = *r.child_summary;
      out += csv_num(r.fitness);
      out += ',';
      out += r.accepted ? "1" : "0";
      out += ',' + textio::fmt_i64(s.frames) + ',' +
             csv_num(s.metrics.avg_undetected) + ',' +
             textio::fmt_i64(s.metrics.danger_mismatches) + ',' +
             textio::fmt_i64(s.metrics.caution_mismatches) + ',';
    } else {
      out += kNa;
      out += ",0,";
      out += kNa;
      out += ',';
      out += kNa;
      out += ',';
      out += kNa;
      out += ',';
      out += kNa;
      out += ',';
    }
    out += csv_escape(r.error) + '\n';
  }
  return out;
}

std::string coverage_csv(const CoverageLedger& ledger) {
  std::string out = "round,fresh,cumulative\n";
  for (const auto& e : ledger.entries)
    out += textio::fmt_i64(e.round) + ',' + textio::fmt_i64(e.fresh) + ',' +
           textio::fmt_i64(e.cumulative) + '\n';
  return out;
}

std::string ranking_csv(const std::vector<RankEntry>& ranking) {
  std::string out = "rank,id,danger,caution,minMismatchDistance\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const RankEntry& r = ranking[i];
    out += textio::fmt_i64(static_cast<std::int64_t>(i + 1)) + ',' + r.id + ',' +
           textio::fmt_i64(r.danger) + ',' + textio::fmt_i64(r.caution) + ',' +
           csv_num(r.min_distance) + '\n';
  }
  return out;
}

std::string event_list(const std::vector<Event>& events) {
  std::string out;
  for (const Event& e : events) {
    if (!out.empty()) out += ';';
    out += std::string(to_string(e.kind)) + "=" + textio::fmt_double(e.timestamp);
  }
  return out;
}

std::string evidence_text(const OutcomeReport& o) {
  std::string out;
  for (const Evidence& e : o.evidence) {
    if (!out.empty()) out += "; ";
    out += e.description;
  }
  return out;
}

int run_fuzz_campaign(const CampaignConfig& cfg, const std::string& out_dir,
                      bool force, std::ostream& out) {
  const MapSpec& map = map_by_id(cfg.map_id);
  const bool with_tracker = tracker_enabled(cfg);
  if (cfg.fitness == FitnessKind::neuron_novelty && !with_tracker)
    throw ConfigError("the neuron-novelty fitness needs the tracker enabled");

  DetectorProfile profile = cfg.profile_path.empty()
                                ? DetectorProfile{}
                                : load_profile(cfg.profile_path);
  DetectorStack stack = with_tracker ? DetectorStack::with_tracker(profile)
                                     : DetectorStack::plain(profile);

  std::vector<SeedScenario> seeds;
  if (cfg.seed_paths.empty()) {
    seeds = generate_seed_set(map, cfg.seed_count, cfg.master_seed);
  } else {
    int i = 1;
    for (const std::string& path : cfg.seed_paths) {
      SeedScenario s{seed_id(i++), load_scenario(path)};
      if (s.scenario.map_id != cfg.map_id)
        throw ConfigError("seed '" + path + "' is on map '" + s.scenario.map_id +
                          "' but the campaign uses '" + cfg.map_id + "'");
      if (auto v = validate(s.scenario); !v.empty())
        throw ConfigError("seed '" + path + "' is invalid: " + v.front().message);
      seeds.push_back(std::move(s));
    }
  }

  fs::path dir(out_dir);
  prepare_out_dir(dir, force);
  ensure_dir(dir / "seeds");
  ensure_dir(dir / "scenarios");
  ensure_dir(dir / "traces");

  for (const SeedScenario& s : seeds)
    save_scenario((dir / "seeds" / (s.id + ".scn")).string(), s.scenario);
  textio::write_file((dir / "manifest.txt").string(),
                     manifest_text(cfg, with_tracker, profile, seeds));

  SavingObserver observer;
  observer.dir = dir;
  for (const SeedScenario& s : seeds) observer.seed_ids.insert(s.id);

  FuzzConfig fuzz_cfg;
  fuzz_cfg.max_rounds = cfg.max_rounds;
  fuzz_cfg.master_seed = cfg.master_seed;
  fuzz_cfg.round_duration = cfg.round_duration;
  fuzz_cfg.gate = cfg.gate;
  fuzz_cfg.sim.frame_rate = cfg.frame_rate;

  FuzzResult result = fuzz(seeds, map, stack, fitness_for(cfg.fitness),
                           fuzz_cfg, &observer);

  textio::write_file((dir / "rounds.csv").string(), rounds_csv(result.records));
  textio::write_file((dir / "coverage.csv").string(),
                     coverage_csv(result.ledger));
  auto ranking = rank_generated(result.accepted);
  textio::write_file((dir / "ranking.csv").string(), ranking_csv(ranking));

  // Verdicts come from longer re-runs of the top-ranked scenarios: the short
  // fuzzing rounds rarely give the ego time to reach its destination, so
  // their traces say little about the eventual outcome.
  std::string outcomes =
      "rank,id,verdict,collidedId,collidedRate,distanceToDestination,"
      "leftRoadway,details\n";
  int verdict_counts[4] = {0, 0, 0, 0};
  int long_runs = std::min<int>(cfg.long_run_top,
                                static_cast<int>(ranking.size()));
  for (int i = 0; i < long_runs; ++i) {
    const AcceptedScenario* acc = nullptr;
    for (const AcceptedScenario& a : result.accepted)
      if (a.id == ranking[i].id) acc = &a;
    RoundTrace trace = simulate_round(acc->scenario, map, stack,
                                      cfg.long_run_duration, fuzz_cfg.sim);
    save_trace((dir / "traces" / (acc->id + ".long.trace")).string(), trace);
    RoundMetrics metrics = compute_round_metrics(trace, cfg.gate);
    OutcomeReport o = classify(trace, metrics.frame_matches, map);
    ++verdict_counts[static_cast<int>(o.verdict)];
    outcomes += textio::fmt_i64(i + 1) + ',' + acc->id + ',' +
                to_string(o.verdict) + ',' +
                (o.collided_id ? textio::fmt_i64(*o.collided_id) : kNa) + ',' +
                csv_opt(o.collided_rate) + ',' +
                csv_opt(o.distance_to_destination) + ',' +
                (o.left_roadway ? "1" : "0") + ',' +
                csv_escape(evidence_text(o)) + '\n';
  }
  textio::write_file((dir / "outcomes.csv").string(), outcomes);

  out << "campaign written to " << out_dir << "\n";
  out << "rounds run: " << result.rounds_run << "\n";
  out << "scenarios accepted: " << result.accepted.size() << "\n";
  if (with_tracker)
    out << "neurons covered: " << result.ledger.cumulative.size() << "/"
        << NeuralTracker::kNeuronCount << "\n";
  if (long_runs > 0)
    out << "long-run verdicts: collision=" << verdict_counts[0]
        << " unnecessaryStop=" << verdict_counts[1]
        << " wrongDestination=" << verdict_counts[2]
        << " nominal=" << verdict_counts[3] << "\n";
  return kExitOk;
}

template <class Fn>
int run_command(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCampaign;
  }
}

}  // namespace

int cmd_fuzz(const FuzzCommandOptions& opt, std::ostream& out,
             std::ostream& err) {
  return run_command(err, [&] {
    CampaignConfig cfg;
    if (!opt.config_path.empty()) cfg = load_campaign_config(opt.config_path);
    if (opt.max_rounds) {
      if (*opt.max_rounds < 0) throw ConfigError("rounds must be non-negative");
      cfg.max_rounds = *opt.max_rounds;
    }
    if (opt.master_seed) cfg.master_seed = *opt.master_seed;
    if (opt.fitness) cfg.fitness = *opt.fitness;
    if (opt.round_duration) {
      if (!(*opt.round_duration > 0))
        throw ConfigError("duration must be positive");
      cfg.round_duration = *opt.round_duration;
    }
    return run_fuzz_campaign(cfg, resolve_out_dir(opt.out_dir, "campaign"),
                             opt.force, out);
  });
}

namespace {

std::pair<int, int> parse_frame_range(const std::string& spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
    throw ConfigError("frame range must look like A:B");
  int a, b;
  try {
    a = std::stoi(spec.substr(0, colon));
    b = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("frame range must look like A:B");
  }
  if (a < 0 || b < a) throw ConfigError("frame range must satisfy 0 <= A <= B");
  return {a, b};
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

int cmd_replay(const ReplayCommandOptions& opt, std::ostream& out,
               std::ostream& err) {
  return run_command(err, [&] {
    if (opt.input_path.empty()) throw ConfigError("replay needs an input file");
    std::string text = textio::read_file(opt.input_path);

    RoundTrace trace;
    if (text.rfind("trace: v1", 0) == 0) {
      trace = parse_trace(text);
    } else {
      Scenario scenario = parse_scenario(text);
      DetectorProfile profile = opt.profile_path.empty()
                                    ? DetectorProfile{}
                                    : load_profile(opt.profile_path);
      DetectorStack stack = opt.tracker ? DetectorStack::with_tracker(profile)
                                        : DetectorStack::plain(profile);
      SimParams params;
      params.frame_rate = opt.frame_rate;
      trace = simulate_round(scenario, map_by_id(scenario.map_id), stack,
                             opt.duration, params);
    }

    if (!opt.out_path.empty()) save_trace(opt.out_path, trace);

    out << "frames: " << trace.gt_frames.size() << "\n";
    out << "duration: " << textio::fmt_double(trace.duration) << "\n";
    for (const Event& e : trace.events)
      out << "event: " << to_string(e.kind) << " t="
          << textio::fmt_double(e.timestamp) << " id=" << e.id << "\n";

    RoundMetrics metrics = compute_round_metrics(trace);
    OutcomeReport o =
        classify(trace, metrics.frame_matches, map_by_id(trace.scenario.map_id));
    out << "verdict: " << to_string(o.verdict) << "\n";
    for (const Evidence& e : o.evidence) out << "  " << e.description << "\n";

    if (!opt.frames.empty()) {
      auto [a, b] = parse_frame_range(opt.frames);
      for (int k = a; k <= b && k < static_cast<int>(trace.gt_frames.size());
           ++k) {
        const Frame& f = trace.gt_frames[k];
        const EgoState& e = trace.ego_states[k];
        out << "frame " << f.index << " t=" << textio::fmt_double(f.timestamp)
            << " ego=(" << fixed2(e.position.x) << ", " << fixed2(e.position.y)
            << ") speed=" << fixed2(e.speed) << " brake=" << (e.brake ? 1 : 0)
            << " gt=" << f.obstacles.size()
            << " lidar=" << trace.lidar_frames[k].detections.size()
            << " camera=" << trace.camera_frames[k].detections.size()
            << " fusion=" << trace.fusion_frames[k].detections.size() << "\n";
      }
    }
    return kExitOk;
  });
}

int cmd_report(const ReportCommandOptions& opt, std::ostream& out,
               std::ostream& err) {
  return run_command(err, [&] {
    fs::path dir(opt.campaign_dir);
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
      throw IoError("campaign directory '" + dir.string() + "' not found");
    fs::path traces_dir = dir / "traces";
    if (!fs::is_directory(traces_dir, ec))
      throw IoError("'" + traces_dir.string() + "' not found");

    double gate = kDefaultGate;
    if (fs::exists(dir / "manifest.txt", ec)) {
      textio::Node root =
          textio::parse_document(textio::read_file((dir / "manifest.txt").string()));
      if (const auto* n = root.find("gate")) gate = textio::as_double(*n);
    }

    std::vector<fs::path> trace_files;
    for (const auto& entry : fs::directory_iterator(traces_dir))
      if (entry.path().extension() == ".trace")
        trace_files.push_back(entry.path());
    std::sort(trace_files.begin(), trace_files.end());

    std::string summary =
        "id,frames,duration,avgPrecision,avgRecall,avgUndetected,"
        "dangerMismatches,cautionMismatches,minMismatchDistance,"
        "ratePedestrian,rateVehicle,rateAnimal,events,verdict\n";
    for (const fs::path& p : trace_files) {
      std::string id = p.stem().string();
      RoundTrace trace = load_trace(p.string());
      RoundMetrics m = compute_round_metrics(trace, gate);
      OutcomeReport o =
          classify(trace, m.frame_matches, map_by_id(trace.scenario.map_id));
      summary += csv_escape(id) + ',' +
                 textio::fmt_i64(static_cast<std::int64_t>(trace.gt_frames.size())) +
                 ',' + textio::fmt_double(trace.duration) + ',' +
                 csv_opt(m.avg_precision) + ',' + csv_opt(m.avg_recall) + ',' +
                 csv_num(m.avg_undetected) + ',' +
                 textio::fmt_i64(m.danger_mismatches) + ',' +
                 textio::fmt_i64(m.caution_mismatches) + ',' +
                 csv_num(m.min_mismatch_distance) + ',' +
                 csv_opt(m.rate_pedestrian) + ',' + csv_opt(m.rate_vehicle) +
                 ',' + csv_opt(m.rate_animal) + ',' +
                 csv_escape(event_list(trace.events)) + ',' +
                 to_string(o.verdict) + '\n';
    }

    std::vector<fs::path> scenario_files;
    for (const char* sub : {"seeds", "scenarios"}) {
      fs::path d = dir / sub;
      if (!fs::is_directory(d, ec)) continue;
      for (const auto& entry : fs::directory_iterator(d))
        if (entry.path().extension() == ".scn")
          scenario_files.push_back(entry.path());
    }
    std::sort(scenario_files.begin(), scenario_files.end(),
              [](const fs::path& a, const fs::path& b) {
                return a.filename() == b.filename() ? a < b
                                                    : a.filename() < b.filename();
              });

    std::string positions =
        "scenarioId,kind,id,category,prototype,x,y,heading,speed,targetX,"
        "targetY\n";
    for (const fs::path& p : scenario_files) {
      std::string id = p.stem().string();
      Scenario s = load_scenario(p.string());
      positions += csv_escape(id) + ",ego,";
      positions += kNa;
      positions += ",";
      positions += kNa;
      positions += ",";
      positions += kNa;
      positions += ',' + textio::fmt_double(s.ego.position.x) + ',' +
                   textio::fmt_double(s.ego.position.y) + ',' +
                   textio::fmt_double(s.ego.heading) + ',' +
                   textio::fmt_double(s.ego.speed) + ',' +
                   textio::fmt_double(s.ego.destination.x) + ',' +
                   textio::fmt_double(s.ego.destination.y) + '\n';
      for (const ObstacleSpec& o : s.obstacles) {
        positions += csv_escape(id) + ",obstacle," + textio::fmt_i64(o.id) +
                     ',' + to_string(o.category) + ',' + o.prototype + ',' +
                     textio::fmt_double(o.position.x) + ',' +
                     textio::fmt_double(o.position.y) + ',' +
                     textio::fmt_double(o.heading) + ',' +
                     textio::fmt_double(o.speed) + ',';
        if (o.target)
          positions += textio::fmt_double(o.target->x) + ',' +
                       textio::fmt_double(o.target->y);
        else {
          positions += kNa;
          positions += ',';
          positions += kNa;
        }
        positions += '\n';
      }
    }

    ensure_dir(dir / "report");
    textio::write_file((dir / "report" / "summary.csv").string(), summary);
    textio::write_file((dir / "report" / "positions.csv").string(), positions);
    out << "report written to " << (dir / "report").string() << "\n";
    out << "traces summarised: " << trace_files.size() << "\n";
    out << "scenarios listed: " << scenario_files.size() << "\n";
    return kExitOk;
  });
}

int cmd_seeds(const SeedsCommandOptions& opt, std::ostream& out,
              std::ostream& err) {
  return run_command(err, [&] {
    if (opt.count < 1) throw ConfigError("count must be at least 1");
    const MapSpec& map = map_by_id(opt.map_id);
    std::string dir_str = resolve_out_dir(opt.out_dir, "seeds");
    fs::path dir(dir_str);
    prepare_out_dir(dir, opt.force);
    auto seeds = generate_seed_set(map, opt.count, opt.seed);
    for (const SeedScenario& s : seeds)
      save_scenario((dir / (s.id + ".scn")).string(), s.scenario);
    out << "wrote " << seeds.size() << " seed scenarios to " << dir_str << "\n";
    for (const SeedScenario& s : seeds)
      out << "  " << s.id << ": " << s.scenario.obstacles.size()
          << " obstacles\n";
    return kExitOk;
  });
}

}  // namespace scenefuzz
