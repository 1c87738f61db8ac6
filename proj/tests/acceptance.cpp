// End-to-end acceptance checks for the scenefuzz library and commands.
// Each criterion prints one [PASS]/[FAIL] line; details of any failure go
// to stderr. Exit status is nonzero when anything failed.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "scenefuzz/campaign.hpp"
#include "scenefuzz/errors.hpp"
#include "scenefuzz/textio.hpp"

using namespace scenefuzz;
namespace fs = std::filesystem;

namespace {

struct Check {
  int criterion;
  bool ok = true;
  explicit Check(int n) : criterion(n) {}
  void operator()(bool cond, const char* what) {
    if (cond) return;
    ok = false;
    std::fprintf(stderr, "  criterion %d failed: %s\n", criterion, what);
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

const MapSpec& two_lane() { return map_by_id("two_lane"); }

// ---------------------------------------------------------------------------
// criterion 1: the canonical two-of-four frame scores as exact rationals

bool criterion1() {
  Check check(1);

  std::vector<Frame> gts(3);
  std::vector<DetectionFrame> dets(3);
  for (int k = 0; k < 3; ++k) {
    gts[k].index = k;
    gts[k].timestamp = 0.1 * k;
    dets[k].sensor = Sensor::fusion;
    dets[k].source_frame_index = k;
    dets[k].timestamp = 0.1 * k + 0.02;
  }
  auto gt_obstacle = [](int id, Category c, Vec2 p) {
    FrameObstacle o;
    o.id = id;
    o.category = c;
    o.position = p;
    o.half_len = 1.0;
    o.half_wid = 1.0;
    return o;
  };
  // Frame 0: four obstacles, two of them detected.
  gts[0].obstacles = {gt_obstacle(1, Category::vehicle, {10.0, 0.0}),
                      gt_obstacle(2, Category::vehicle, {20.0, 0.0}),
                      gt_obstacle(3, Category::pedestrian, {5.0, 3.0}),
                      gt_obstacle(4, Category::animal, {40.0, -2.0})};
  dets[0].detections = {{11, Category::vehicle, {10.5, 0.5}, 0.0},
                        {12, Category::vehicle, {20.0, 0.0}, 0.0}};
  // Frames 1 and 2 track obstacle 1 only; it is missed in the last one.
  gts[1].obstacles = {gt_obstacle(1, Category::vehicle, {11.0, 0.0})};
  dets[1].detections = {{21, Category::vehicle, {11.0, 0.0}, 0.0}};
  gts[2].obstacles = {gt_obstacle(1, Category::vehicle, {12.0, 0.0})};

  std::vector<FrameMatch> matches;
  for (int k = 0; k < 3; ++k)
    matches.push_back(match_frame_pair(gts[k], dets[k]));

  check(matches[0].pairs.size() == 2, "two pairs expected in the first frame");
  check(matches[0].unmatched_gt.size() == 2, "two misses expected");
  check(matches[0].unmatched_det.empty(), "no false detections expected");
  auto p = precision(matches[0]);
  auto r = recall(matches[0]);
  check(p.has_value() && *p == 1.0, "precision must be exactly 2/2");
  check(r.has_value() && *r == 0.5, "recall must be exactly 2/4");
  double rate = perception_rate(gts, matches, 1);
  check(rate == 2.0 / 3.0, "perception rate must be exactly 2/3");
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 2: per-category assignments match an exhaustive oracle

// Independent reference: try every complete assignment of the smaller side.
struct BruteResult {
  double total = 0.0;
};

void brute_recurse(const std::vector<std::vector<double>>& cost, size_t row,
                   std::vector<int>& col_of, std::vector<bool>& used,
                   double so_far, double& best) {
  size_t rows = cost.size();
  if (row == rows) {
    best = std::min(best, so_far);
    return;
  }
  size_t cols = cost[0].size();
  for (size_t c = 0; c < cols; ++c) {
    if (used[c]) continue;
    used[c] = true;
    col_of[row] = static_cast<int>(c);
    brute_recurse(cost, row + 1, col_of, used, so_far + cost[row][c], best);
    used[c] = false;
  }
}

double brute_minimum(std::vector<std::vector<double>> cost) {
  if (cost.empty() || cost[0].empty()) return 0.0;
  if (cost.size() > cost[0].size()) {
    // Transpose so rows are the smaller side.
    std::vector<std::vector<double>> t(cost[0].size(),
                                       std::vector<double>(cost.size()));
    for (size_t r = 0; r < cost.size(); ++r)
      for (size_t c = 0; c < cost[0].size(); ++c) t[c][r] = cost[r][c];
    cost = std::move(t);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> col_of(cost.size(), -1);
  std::vector<bool> used(cost[0].size(), false);
  brute_recurse(cost, 0, col_of, used, 0.0, best);
  return best;
}

bool criterion2() {
  Check check(2);
  double t0 = now_seconds();
  std::mt19937_64 rng(2024);
  auto grid = [&](int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return 0.25 * d(rng);
  };
  const Category cats[] = {Category::pedestrian, Category::vehicle,
                           Category::animal};

  for (int trial = 0; trial < 200 && check.ok; ++trial) {
    Frame gt;
    DetectionFrame det;
    det.sensor = Sensor::fusion;
    det.timestamp = 0.02;
    std::map<Category, std::vector<Vec2>> gt_pos, det_pos;
    int next_gt = 1, next_det = 101;
    std::uniform_int_distribution<int> size_d(0, 6);
    for (Category c : cats) {
      int n = size_d(rng), m = size_d(rng);
      for (int i = 0; i < n; ++i) {
        Vec2 p{grid(0, 240), grid(-32, 32)};
        gt_pos[c].push_back(p);
        FrameObstacle o;
        o.id = next_gt++;
        o.category = c;
        o.position = p;
        o.half_len = o.half_wid = 0.5;
        gt.obstacles.push_back(o);
      }
      for (int i = 0; i < m; ++i) {
        Vec2 p{grid(0, 240), grid(-32, 32)};
        det_pos[c].push_back(p);
        det.detections.push_back({next_det++, c, p, 0.0});
      }
    }
    std::shuffle(det.detections.begin(), det.detections.end(), rng);

    const double huge_gate = 1e18;  // no gating: pure minimum-cost pairing
    FrameMatch m = match_frame_pair(gt, det, huge_gate);

    double got_total = 0.0;
    for (const MatchedPair& p : m.pairs) got_total += p.distance;

    double want_total = 0.0;
    size_t want_pairs = 0;
    for (Category c : cats) {
      const auto& g = gt_pos[c];
      const auto& d = det_pos[c];
      want_pairs += std::min(g.size(), d.size());
      std::vector<std::vector<double>> cost(d.size(),
                                            std::vector<double>(g.size()));
      for (size_t r = 0; r < d.size(); ++r)
        for (size_t col = 0; col < g.size(); ++col)
          cost[r][col] = manhattan(d[r], g[col]);
      want_total += brute_minimum(cost);
    }
    check(m.pairs.size() == want_pairs, "pair count must saturate per category");
    check(got_total == want_total, "assignment total must equal the oracle's");
  }
  check(now_seconds() - t0 < 10.0, "200 oracle comparisons must finish in 10s");
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 3: a flawless detector scores perfectly everywhere

bool criterion3() {
  Check check(3);
  std::vector<Scenario> scenarios = make_initial_seeds(two_lane(), 50, 2025);
  for (const Scenario& s : scenarios) {
    DetectorStack stack = DetectorStack::plain(DetectorProfile::perfect());
    RoundTrace trace = simulate_round(s, two_lane(), stack, 5.0, {});
    RoundMetrics m = compute_round_metrics(trace);
    for (const FrameMatch& fm : m.frame_matches) {
      if (fm.precision) check(*fm.precision == 1.0, "precision must be 1");
      if (fm.recall) check(*fm.recall == 1.0, "recall must be 1");
      check(fm.unmatched_det.empty(), "no phantom detections may appear");
      check(fm.unmatched_gt.empty(), "no in-range obstacle may be missed");
    }
    for (const auto& [id, r] : m.rates)
      if (r.frames_present > 0)
        check(r.rate == 1.0, "every in-range obstacle must be seen every frame");
    if (!check.ok) break;
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// criteria 4 and 8: search semantics, and the long campaign's wall clock

double g_long_campaign_seconds = -1.0;
int g_long_campaign_rounds = 0;

std::vector<SeedScenario> named_seeds(int count, std::uint64_t seed) {
  std::vector<Scenario> raw = make_initial_seeds(two_lane(), count, seed);
  std::vector<SeedScenario> out;
  for (int i = 0; i < count; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "s%02d", i + 1);
    out.push_back({buf, raw[i]});
  }
  return out;
}

bool is_rotation(const std::vector<std::string>& initial,
                 const std::vector<std::string>& final_queue) {
  if (initial.size() != final_queue.size()) return false;
  for (size_t k = 0; k < initial.size(); ++k) {
    bool match = true;
    for (size_t i = 0; i < initial.size(); ++i)
      if (initial[(k + i) % initial.size()] != final_queue[i]) match = false;
    if (match) return true;
  }
  return false;
}

bool criterion4() {
  Check check(4);

  {  // Always-positive fitness: one admitted child per round.
    auto seeds = named_seeds(3, 41);
    DetectorStack stack = DetectorStack::plain(DetectorProfile::perfect());
    FuzzConfig cfg;
    cfg.max_rounds = 40;
    cfg.master_seed = 11;
    cfg.round_duration = 1.0;
    FuzzResult res = fuzz(seeds, two_lane(), stack,
                          [](const RoundSummary&, const RoundSummary&) {
                            return 1.0;
                          },
                          cfg);
    check(static_cast<int>(res.accepted.size()) == cfg.max_rounds,
          "forty rounds of positive fitness must admit forty children");
  }

  {  // Always-negative fitness: nothing admitted, queue merely rotates.
    auto seeds = named_seeds(3, 41);
    std::vector<std::string> initial_ids;
    for (const auto& s : seeds) initial_ids.push_back(s.id);
    DetectorStack stack = DetectorStack::plain(DetectorProfile::perfect());
    FuzzConfig cfg;
    cfg.max_rounds = 31;
    cfg.master_seed = 12;
    cfg.round_duration = 1.0;
    FuzzResult res = fuzz(seeds, two_lane(), stack,
                          [](const RoundSummary&, const RoundSummary&) {
                            return -1.0;
                          },
                          cfg);
    check(res.accepted.empty(), "negative fitness must admit nothing");
    check(is_rotation(initial_ids, res.final_queue),
          "rejections must leave the queue a rotation of the seeds");
  }

  {  // Novelty-driven search, 300 rounds; also timed for criterion 8.
    auto seeds = named_seeds(3, 2026);
    DetectorStack stack = DetectorStack::with_tracker(DetectorProfile());
    FuzzConfig cfg;
    cfg.max_rounds = 300;
    cfg.master_seed = 9;
    cfg.round_duration = 5.0;
    double t0 = now_seconds();
    FuzzResult res = fuzz(seeds, two_lane(), stack,
                          fitness_for(FitnessKind::neuron_novelty), cfg);
    g_long_campaign_seconds = now_seconds() - t0;
    g_long_campaign_rounds = res.rounds_run;

    for (const AcceptedScenario& a : res.accepted)
      check(a.fitness >= 1.0, "every admitted child must light a new neuron");
    check(res.ledger.entries.size() == 300, "the ledger must log every round");
    int prev = 0;
    for (const auto& e : res.ledger.entries) {
      check(e.cumulative >= prev, "cumulative coverage must never shrink");
      prev = e.cumulative;
    }
    check(res.ledger.cumulative == stack.tracker->activated_ever(),
          "the ledger must equal the tracker's lifetime set");
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 5: fixed-rate frame streams with strictly later detections

bool criterion5() {
  Check check(5);
  for (int variant = 0; variant < 10 && check.ok; ++variant) {
    Scenario s = testutil::base_scenario();
    int statics = 1 + variant % 3;
    for (int j = 0; j < statics; ++j)
      s.obstacles.push_back(testutil::make_obstacle(
          j + 1, "sedan", {30.0 + 15.0 * j, 5.0}));
    if (variant == 9)  // one braking round for variety
      s.obstacles.push_back(
          testutil::make_obstacle(9, "pedestrian_adult", {12.0, -1.75}));

    DetectorStack stack = DetectorStack::plain(DetectorProfile());
    RoundTrace t = simulate_round(s, two_lane(), stack, 5.0, {});

    check(t.duration == 5.0, "an uneventful round must use its full budget");
    check(t.gt_frames.size() == 50, "five seconds at 10/s must give 50 frames");
    check(t.lidar_frames.size() == 50, "one lidar frame per tick");
    check(t.camera_frames.size() == 50, "one camera frame per tick");
    check(t.fusion_frames.size() == 50, "one fusion frame per tick");
    for (size_t k = 0; k < t.gt_frames.size(); ++k) {
      check(t.gt_frames[k].index == static_cast<int>(k), "frame indices count up");
      for (const auto* stream : {&t.lidar_frames, &t.camera_frames,
                                 &t.fusion_frames}) {
        const DetectionFrame& d = (*stream)[k];
        check(d.source_frame_index == static_cast<int>(k),
              "each detection frame names its source");
        check(d.timestamp > t.gt_frames[k].timestamp,
              "detections must be strictly later than their source");
      }
    }
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 6: all three adverse verdicts are reachable with evidence

bool criterion6() {
  Check check(6);

  {  // (a) an animal the detector cannot see gets hit.
    Scenario s = testutil::base_scenario();
    s.obstacles.push_back(testutil::make_obstacle(1, "deer", {25.0, -1.75}));
    DetectorProfile blind = DetectorProfile::perfect();
    blind.size_penalty_animal = 1.0;
    DetectorStack stack = DetectorStack::plain(blind);
    RoundTrace t = simulate_round(s, two_lane(), stack, 5.0, {});
    RoundMetrics m = compute_round_metrics(t);
    OutcomeReport o = classify(t, m.frame_matches, two_lane());
    check(o.verdict == Verdict::collision, "blind approach must end in collision");
    check(o.collided_id == 1, "the struck obstacle must be identified");
    check(!o.evidence.empty() && !o.evidence[0].frame_indices.empty(),
          "collision evidence must cite the approach frames");
  }

  {  // (b) phantom detections in the corridor force a pointless stop.
    Scenario s = testutil::base_scenario();
    DetectorProfile haunted = DetectorProfile::perfect();
    haunted.phantom_rate = 1.0;
    DetectorStack stack = DetectorStack::plain(haunted);
    RoundTrace t = simulate_round(s, two_lane(), stack, 5.0, {});
    RoundMetrics m = compute_round_metrics(t);
    OutcomeReport o = classify(t, m.frame_matches, two_lane());
    check(o.verdict == Verdict::unnecessary_stop,
          "phantom braking must classify as an unnecessary stop");
    bool cited = false;
    if (!o.evidence.empty() && !o.evidence[0].frame_indices.empty()) {
      int fidx = o.evidence[0].frame_indices[0];
      const EgoState& braking = t.ego_states[1];
      if (braking.brake_cause &&
          fidx == braking.brake_cause->source_frame_index) {
        for (int id : m.frame_matches[fidx].unmatched_det)
          if (id == braking.brake_cause->detection_id) cited = true;
      }
    }
    check(cited, "the stop's evidence must cite an unmatched detection");
  }

  {  // (c) a pedestrian seen too late strands the ego short of its goal.
    Scenario s = testutil::base_scenario();
    ObstacleSpec ped =
        testutil::make_obstacle(1, "pedestrian_adult", {40.0, -2.6});
    ped.heading = std::numbers::pi / 2.0;
    ped.speed = 0.05;
    ped.target = Vec2{40.0, 3.5};
    s.obstacles.push_back(ped);
    DetectorProfile cutoff = DetectorProfile::perfect();
    cutoff.lidar = {15.0, 60.0};
    cutoff.camera = {15.0, 60.0};
    DetectorStack stack = DetectorStack::plain(cutoff);
    RoundTrace t = simulate_round(s, two_lane(), stack, 5.0, {});
    RoundMetrics m = compute_round_metrics(t);
    OutcomeReport o = classify(t, m.frame_matches, two_lane());
    check(o.verdict == Verdict::wrong_destination,
          "a stranded round must classify as a wrong destination");
    check(o.distance_to_destination.has_value() &&
              *o.distance_to_destination > 0.0,
          "the shortfall distance must be reported");
    check(!o.evidence.empty() && !o.evidence[0].frame_indices.empty(),
          "the verdict must cite the final frame");
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 7: identical campaigns are byte-identical on disk

std::map<std::string, std::string> dir_contents(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file())
      files[fs::relative(entry.path(), root).generic_string()] =
          textio::read_file(entry.path().string());
  return files;
}

bool criterion7() {
  Check check(7);
  fs::path root = fs::temp_directory_path() / "scenefuzz_acceptance_twin";
  std::error_code ec;
  fs::remove_all(root, ec);
  fs::create_directories(root);

  CampaignConfig cfg;
  cfg.max_rounds = 20;
  cfg.master_seed = 77;
  cfg.round_duration = 2.0;
  cfg.seed_count = 3;
  cfg.long_run_top = 2;
  cfg.long_run_duration = 4.0;
  save_campaign_config((root / "c.cfg").string(), cfg);

  for (const char* name : {"one", "two"}) {
    FuzzCommandOptions opt;
    opt.config_path = (root / "c.cfg").string();
    opt.out_dir = (root / name).string();
    std::ostringstream out, err;
    check(cmd_fuzz(opt, out, err) == kExitOk, "the campaign command must succeed");
    ReportCommandOptions ropt;
    ropt.campaign_dir = opt.out_dir;
    std::ostringstream rout, rerr;
    check(cmd_report(ropt, rout, rerr) == kExitOk,
          "the report command must succeed");
  }

  if (check.ok) {
    auto one = dir_contents(root / "one");
    auto two = dir_contents(root / "two");
    check(!one.empty(), "the campaign must write artifacts");
    check(one.size() == two.size(), "both runs must write the same file set");
    for (const auto& [rel, content] : one) {
      auto it = two.find(rel);
      if (it == two.end()) {
        check(false, "both runs must write the same file names");
        break;
      }
      if (content != it->second) {
        std::fprintf(stderr, "  differing file: %s\n", rel.c_str());
        check(false, "every artifact must be byte-identical across runs");
        break;
      }
    }
  }
  fs::remove_all(root, ec);
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 8: the 300-round tracked campaign fits the time budget

bool criterion8() {
  Check check(8);
  check(g_long_campaign_rounds == 300, "the timed campaign must run 300 rounds");
  check(g_long_campaign_seconds >= 0.0, "the timed campaign must have run");
  if (g_long_campaign_seconds >= 300.0)
    std::fprintf(stderr, "  campaign took %.1fs\n", g_long_campaign_seconds);
  check(g_long_campaign_seconds < 300.0,
        "300 tracked rounds must finish inside five minutes");
  return check.ok;
}

// ---------------------------------------------------------------------------
// criterion 9: danger labels with inclusive boundaries

bool criterion9() {
  Check check(9);
  check(danger_label(0.5) == DangerLabel::danger, "0.5m is danger");
  check(danger_label(1.0) == DangerLabel::danger, "1.0m is still danger");
  check(danger_label(1.5) == DangerLabel::caution, "1.5m is caution");
  check(danger_label(2.0) == DangerLabel::caution, "2.0m is still caution");
  check(danger_label(5.0) == DangerLabel::none, "5.0m is unlabelled");
  return check.ok;
}

struct Criterion {
  int number;
  const char* name;
  bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "the two-of-four frame scores exact precision 1, recall 1/2, rate 2/3",
     criterion1},
    {2, "per-category assignments equal an exhaustive oracle on 200 random frames",
     criterion2},
    {3, "a flawless detector yields perfect scores on 50 random scenarios",
     criterion3},
    {4, "acceptance follows the fitness sign and novelty stays non-negative",
     criterion4},
    {5, "every tick yields one strictly-later detection frame per sensor",
     criterion5},
    {6, "collision, unnecessary stop, and wrong destination are all reachable",
     criterion6},
    {7, "equal configurations produce byte-identical campaign artifacts",
     criterion7},
    {8, "a 300-round tracked campaign finishes inside five minutes", criterion8},
    {9, "mismatch distances map to danger and caution with inclusive bounds",
     criterion9},
};

}  // namespace

int main() {
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "  criterion %d threw: %s\n", c.number, e.what());
      ok = false;
    }
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.number,
                c.name);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
