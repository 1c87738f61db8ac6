#include "scenefuzz/outcome.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/textio.hpp"

namespace scenefuzz {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::collision: return "collision";
    case Verdict::unnecessary_stop: return "unnecessaryStop";
    case Verdict::wrong_destination: return "wrongDestination";
    case Verdict::nominal: return "nominal";
  }
  return "?";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::collision, Verdict::unnecessary_stop,
                    Verdict::wrong_destination, Verdict::nominal})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

OutcomeReport classify_collision(const RoundTrace& trace,
                                 const std::vector<FrameMatch>& matches,
                                 const Event& ev) {
  OutcomeReport r;
  r.verdict = Verdict::collision;
  r.collided_id = ev.id;

  int present = 0;
  int detected = 0;
  Evidence e;
  e.timestamp = ev.timestamp;
  for (std::size_t k = 0; k < trace.gt_frames.size(); ++k) {
    const Frame& f = trace.gt_frames[k];
    if (f.timestamp < ev.timestamp - kEvidenceWindow ||
        f.timestamp > ev.timestamp)
      continue;
    if (!f.by_id(ev.id)) continue;
    ++present;
    e.frame_indices.push_back(f.index);
    const FrameMatch& m = matches[k];
    if (std::any_of(m.pairs.begin(), m.pairs.end(),
                    [&](const MatchedPair& p) { return p.gt_id == ev.id; }))
      ++detected;
  }
  if (present > 0) r.collided_rate = static_cast<double>(detected) / present;
  e.description = "collision with obstacle " + textio::fmt_i64(ev.id) + " at t=" +
                  fixed2(ev.timestamp) + "s; perceived in " +
                  textio::fmt_i64(detected) + " of " + textio::fmt_i64(present) +
                  " frames over the final " + fixed2(kEvidenceWindow) +
                  "s approach";
  r.evidence.push_back(std::move(e));
  return r;
}

std::optional<OutcomeReport> classify_phantom_stop(
    const RoundTrace& trace, const std::vector<FrameMatch>& matches) {
  OutcomeReport r;
  r.verdict = Verdict::unnecessary_stop;
  for (const Event& ev : trace.events) {
    if (ev.kind != EventKind::brake_start) continue;
    auto tick = static_cast<std::size_t>(
        std::lround(ev.timestamp * trace.frame_rate));
    if (tick >= trace.ego_states.size()) continue;
    const auto& cause = trace.ego_states[tick].brake_cause;
    if (!cause) continue;
    if (cause->source_frame_index < 0 ||
        static_cast<std::size_t>(cause->source_frame_index) >= matches.size())
      continue;
    const FrameMatch& m = matches[cause->source_frame_index];
    bool phantom = std::find(m.unmatched_det.begin(), m.unmatched_det.end(),
                             cause->detection_id) != m.unmatched_det.end();
    if (!phantom) continue;
    Evidence e;
    e.timestamp = ev.timestamp;
    e.frame_indices.push_back(cause->source_frame_index);
    e.description = "braking at t=" + fixed2(ev.timestamp) +
                    "s triggered by detection " +
                    textio::fmt_i64(cause->detection_id) +
                    " with no ground-truth counterpart in frame " +
                    textio::fmt_i64(cause->source_frame_index);
    r.evidence.push_back(std::move(e));
  }
  if (r.evidence.empty()) return std::nullopt;
  return r;
}

}  // namespace

OutcomeReport classify(const RoundTrace& trace,
                       const std::vector<FrameMatch>& matches,
                       const MapSpec& map) {
  if (matches.size() != trace.gt_frames.size())
    throw ConfigError("match reports do not cover the trace");

  if (const Event* ev = trace.first_event(EventKind::collision))
    return classify_collision(trace, matches, *ev);

  if (auto stop = classify_phantom_stop(trace, matches)) return *stop;

  if (!trace.has_event(EventKind::arrived)) {
    OutcomeReport r;
    r.verdict = Verdict::wrong_destination;
    Vec2 final_pos = trace.ego_states.empty()
                         ? trace.scenario.ego.position
                         : trace.ego_states.back().position;
    double dist = distance(final_pos, trace.scenario.ego.destination);
    r.distance_to_destination = dist;
    r.left_roadway = !in_any_lane(map, final_pos);
    Evidence e;
    e.timestamp = trace.duration;
    if (!trace.ego_states.empty())
      e.frame_indices.push_back(trace.gt_frames.back().index);
    e.description =
        "round ended " + fixed2(dist) + "m short of the destination";
    if (r.left_roadway) e.description += "; final position off the roadway";
    r.evidence.push_back(std::move(e));
    return r;
  }

  OutcomeReport r;
  r.verdict = Verdict::nominal;
  const Event* arrived = trace.first_event(EventKind::arrived);
  Evidence e;
  e.timestamp = arrived->timestamp;
  e.description =
      "reached the destination at t=" + fixed2(arrived->timestamp) + "s";
  r.evidence.push_back(std::move(e));
  return r;
}

}  // namespace scenefuzz
