#include "scenefuzz/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenefuzz/assignment.hpp"
#include "scenefuzz/errors.hpp"
#include "scenefuzz/simulator.hpp"

namespace scenefuzz {

std::vector<FramePair> match_frames(const std::vector<Frame>& gt,
                                    const std::vector<DetectionFrame>& det) {
  if (gt.size() != det.size()) {
    int frame = gt.size() > det.size() ? gt[det.size()].index
                                       : det[gt.size()].source_frame_index;
    throw MatchError(frame, "frame streams differ in length: " +
                                std::to_string(gt.size()) + " ground-truth vs " +
                                std::to_string(det.size()) + " detection frames");
  }
  std::vector<FramePair> out;
  out.reserve(gt.size());
  std::vector<const DetectionFrame*> by_index(gt.size(), nullptr);
  for (const DetectionFrame& d : det) {
    bool placed = false;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (gt[i].index != d.source_frame_index) continue;
      if (by_index[i])
        throw MatchError(d.source_frame_index,
                         "duplicate detection frame for ground-truth frame " +
                             std::to_string(d.source_frame_index));
      by_index[i] = &d;
      placed = true;
      break;
    }
    if (!placed)
      throw MatchError(d.source_frame_index,
                       "detection frame references unknown ground-truth frame " +
                           std::to_string(d.source_frame_index));
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!by_index[i])
      throw MatchError(gt[i].index, "no detection frame for ground-truth frame " +
                                        std::to_string(gt[i].index));
    if (!(by_index[i]->timestamp > gt[i].timestamp))
      throw MatchError(gt[i].index,
                       "detection frame not strictly later than ground-truth frame " +
                           std::to_string(gt[i].index));
    out.push_back({&gt[i], by_index[i]});
  }
  return out;
}

FrameMatch match_frame_pair(const Frame& gt, const DetectionFrame& det,
                            double gate) {
  FrameMatch out;
  out.frame_index = gt.index;

  for (Category cat : {Category::pedestrian, Category::vehicle, Category::animal}) {
    std::vector<const FrameObstacle*> gts;
    std::vector<const Detection*> dets;
    for (const FrameObstacle& o : gt.obstacles)
      if (o.category == cat) gts.push_back(&o);
    for (const Detection& d : det.detections)
      if (d.category == cat) dets.push_back(&d);
    std::sort(gts.begin(), gts.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::sort(dets.begin(), dets.end(), [](auto* a, auto* b) { return a->id < b->id; });

    std::vector<std::vector<double>> cost(dets.size(),
                                          std::vector<double>(gts.size(), 0.0));
    for (std::size_t r = 0; r < dets.size(); ++r)
      for (std::size_t c = 0; c < gts.size(); ++c)
        cost[r][c] = manhattan(dets[r]->position, gts[c]->position);

    Assignment a = solve_assignment(cost);
    std::vector<char> gt_matched(gts.size(), 0), det_matched(dets.size(), 0);
    for (auto [r, c] : a.pairs) {
      if (cost[r][c] > gate) continue;  // outside the gate: unmatched on both sides
      out.pairs.push_back({gts[c]->id, dets[r]->id, cost[r][c]});
      gt_matched[c] = 1;
      det_matched[r] = 1;
    }
    for (std::size_t c = 0; c < gts.size(); ++c)
      if (!gt_matched[c]) out.unmatched_gt.push_back(gts[c]->id);
    for (std::size_t r = 0; r < dets.size(); ++r)
      if (!det_matched[r]) out.unmatched_det.push_back(dets[r]->id);
  }

  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) {
              return a.gt_id != b.gt_id ? a.gt_id < b.gt_id : a.det_id < b.det_id;
            });
  std::sort(out.unmatched_gt.begin(), out.unmatched_gt.end());
  std::sort(out.unmatched_det.begin(), out.unmatched_det.end());
  out.precision = precision(out);
  out.recall = recall(out);
  return out;
}

std::optional<double> precision(const FrameMatch& m) {
  double denom = static_cast<double>(m.pairs.size() + m.unmatched_det.size());
  if (denom == 0.0) return std::nullopt;
  return static_cast<double>(m.pairs.size()) / denom;
}

std::optional<double> recall(const FrameMatch& m) {
  double denom = static_cast<double>(m.pairs.size() + m.unmatched_gt.size());
  if (denom == 0.0) return std::nullopt;
  return static_cast<double>(m.pairs.size()) / denom;
}

double perception_rate(const std::vector<Frame>& gt,
                       const std::vector<FrameMatch>& matches, int obstacle_id) {
  int present = 0, detected = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt[i].by_id(obstacle_id)) continue;
    ++present;
    if (i < matches.size())
      for (const MatchedPair& p : matches[i].pairs)
        if (p.gt_id == obstacle_id) {
          ++detected;
          break;
        }
  }
  if (present == 0)
    throw ConfigError("perception_rate: obstacle " + std::to_string(obstacle_id) +
                      " never appears in the round");
  return static_cast<double>(detected) / present;
}

const char* to_string(DangerLabel l) {
  switch (l) {
    case DangerLabel::danger: return "danger";
    case DangerLabel::caution: return "caution";
    case DangerLabel::none: return "none";
  }
  return "?";
}

DangerLabel danger_label(double dist) {
  if (dist <= 1.0) return DangerLabel::danger;
  if (dist <= 2.0) return DangerLabel::caution;
  return DangerLabel::none;
}

RoundMetrics compute_round_metrics(const RoundTrace& trace, double gate) {
  RoundMetrics m;
  m.min_mismatch_distance = std::numeric_limits<double>::infinity();

  std::vector<FramePair> aligned = match_frames(trace.gt_frames, trace.fusion_frames);
  m.frame_matches.reserve(aligned.size());

  double precision_sum = 0.0, recall_sum = 0.0, undetected_sum = 0.0;
  int precision_frames = 0, recall_frames = 0;

  for (std::size_t i = 0; i < aligned.size(); ++i) {
    const Frame& gt = *aligned[i].gt;
    const DetectionFrame& det = *aligned[i].det;
    FrameMatch fm = match_frame_pair(gt, det, gate);

    if (fm.precision) {
      precision_sum += *fm.precision;
      ++precision_frames;
    }
    if (fm.recall) {
      recall_sum += *fm.recall;
      ++recall_frames;
    }
    undetected_sum += static_cast<double>(fm.unmatched_gt.size());

    const EgoState& ego = trace.ego_states[i];
    auto account_mismatch = [&](Vec2 pos) {
      switch (danger_label(distance(pos, ego.position))) {
        case DangerLabel::danger: ++m.danger_mismatches; break;
        case DangerLabel::caution: ++m.caution_mismatches; break;
        case DangerLabel::none: break;
      }
      m.min_mismatch_distance = std::min(
          m.min_mismatch_distance,
          point_polyline_distance(pos, ego.planned_trajectory));
    };
    for (int id : fm.unmatched_gt)
      if (const FrameObstacle* o = gt.by_id(id)) account_mismatch(o->position);
    for (int id : fm.unmatched_det)
      if (const Detection* d = det.by_id(id)) account_mismatch(d->position);

    for (const FrameObstacle& o : gt.obstacles) {
      ObstacleRate& r = m.rates[o.id];
      r.category = o.category;
      ++r.frames_present;
    }
    for (const MatchedPair& p : fm.pairs) ++m.rates[p.gt_id].frames_detected;

    m.frame_matches.push_back(std::move(fm));
  }

  if (precision_frames > 0) m.avg_precision = precision_sum / precision_frames;
  if (recall_frames > 0) m.avg_recall = recall_sum / recall_frames;
  if (!aligned.empty())
    m.avg_undetected = undetected_sum / static_cast<double>(aligned.size());

  double cat_sum[3] = {0.0, 0.0, 0.0};
  int cat_count[3] = {0, 0, 0};
  for (auto& [id, r] : m.rates) {
    r.rate = r.frames_present > 0
                 ? static_cast<double>(r.frames_detected) / r.frames_present
                 : 0.0;
    cat_sum[static_cast<int>(r.category)] += r.rate;
    ++cat_count[static_cast<int>(r.category)];
  }
  auto cat_avg = [&](Category c) -> std::optional<double> {
    int i = static_cast<int>(c);
    if (cat_count[i] == 0) return std::nullopt;
    return cat_sum[i] / cat_count[i];
  };
  m.rate_pedestrian = cat_avg(Category::pedestrian);
  m.rate_vehicle = cat_avg(Category::vehicle);
  m.rate_animal = cat_avg(Category::animal);
  return m;
}

}  // namespace scenefuzz
