#include "scenefuzz/trace_io.hpp"

#include <string>
#include <vector>

#include "scenefuzz/errors.hpp"
#include "scenefuzz/textio.hpp"

namespace scenefuzz {

namespace {

using textio::fmt_double;
using textio::ParseError;

void append(std::string& out, std::initializer_list<std::string> toks) {
  bool first = true;
  for (const std::string& t : toks) {
    if (!first) out += ' ';
    out += t;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string format_trace(const RoundTrace& trace) {
  std::string out;
  out += "trace: v1\n";
  out += "frameRate: " + fmt_double(trace.frame_rate) + "\n";
  out += "plannedDuration: " + fmt_double(trace.planned_duration) + "\n";
  out += "actualDuration: " + fmt_double(trace.duration) + "\n";
  out += "scenario-begin\n";
  out += format_scenario(trace.scenario);
  out += "scenario-end\n";

  auto write_det = [&](const DetectionFrame& f) {
    append(out, {"det:", to_string(f.sensor), fmt_double(f.timestamp),
                 textio::fmt_i64(f.source_frame_index),
                 textio::fmt_i64(static_cast<std::int64_t>(f.detections.size()))});
    for (const Detection& d : f.detections)
      append(out, {"d:", textio::fmt_i64(d.id), to_string(d.category),
                   fmt_double(d.position.x), fmt_double(d.position.y),
                   fmt_double(d.speed)});
  };

  for (std::size_t i = 0; i < trace.gt_frames.size(); ++i) {
    const Frame& f = trace.gt_frames[i];
    append(out, {"frame:", textio::fmt_i64(f.index), fmt_double(f.timestamp)});
    for (const FrameObstacle& o : f.obstacles)
      append(out, {"obst:", textio::fmt_i64(o.id), to_string(o.category),
                   fmt_double(o.position.x), fmt_double(o.position.y),
                   fmt_double(o.speed), fmt_double(o.heading),
                   fmt_double(o.half_len), fmt_double(o.half_wid)});
    write_det(trace.lidar_frames[i]);
    write_det(trace.camera_frames[i]);
    write_det(trace.fusion_frames[i]);
    const EgoState& e = trace.ego_states[i];
    append(out, {"ego:", fmt_double(e.position.x), fmt_double(e.position.y),
                 fmt_double(e.heading), fmt_double(e.speed),
                 e.brake ? "1" : "0",
                 e.brake_cause ? textio::fmt_i64(e.brake_cause->source_frame_index) : "-",
                 e.brake_cause ? textio::fmt_i64(e.brake_cause->detection_id) : "-"});
    std::string traj = "traj: " +
                       textio::fmt_i64(static_cast<std::int64_t>(e.planned_trajectory.size()));
    for (Vec2 p : e.planned_trajectory)
      traj += " " + fmt_double(p.x) + " " + fmt_double(p.y);
    out += traj + "\n";
  }
  for (const Event& e : trace.events)
    append(out, {"event:", fmt_double(e.timestamp), to_string(e.kind),
                 textio::fmt_i64(e.id)});
  out += "end\n";
  return out;
}

namespace {

struct Line {
  int number = 0;
  std::string_view raw;  // without trailing newline / CR
  std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto toks = textio::split_tokens(raw);
    if (toks.empty()) continue;
    lines.push_back({number, raw, std::move(toks)});
  }
  return lines;
}

class TraceParser {
 public:
  explicit TraceParser(std::string_view text) : lines_(tokenize(text)) {}

  RoundTrace parse() {
    expect_header();
    RoundTrace t;
    t.frame_rate = header_double("frameRate");
    t.planned_duration = header_double("plannedDuration");
    t.duration = header_double("actualDuration");
    t.scenario = parse_embedded_scenario();
    while (!done() && tag() == "frame:") parse_frame(t);
    while (!done() && tag() == "event:") parse_event(t);
    if (done() || tag() != "end")
      throw ParseError(line_number(), "trace truncated: missing 'end'");
    ++idx_;
    if (!done()) throw ParseError(line_number(), "trailing content after 'end'");
    check_shape(t);
    return t;
  }

 private:
  bool done() const { return idx_ >= lines_.size(); }
  const Line& cur() const { return lines_[idx_]; }
  std::string_view tag() const { return cur().tokens[0]; }
  int line_number() const {
    return done() ? (lines_.empty() ? 1 : lines_.back().number + 1)
                  : cur().number;
  }

  void expect_header() {
    if (done() || tag() != "trace:" || cur().tokens.size() != 2 ||
        cur().tokens[1] != "v1")
      throw ParseError(line_number(), "not a trace file (expected 'trace: v1')");
    ++idx_;
  }

  double header_double(std::string_view key) {
    std::string want = std::string(key) + ":";
    if (done() || tag() != want || cur().tokens.size() != 2)
      throw ParseError(line_number(), "expected '" + std::string(key) + ": <value>'");
    double v = textio::parse_double(cur().tokens[1], cur().number);
    ++idx_;
    return v;
  }

  Scenario parse_embedded_scenario() {
    if (done() || tag() != "scenario-begin")
      throw ParseError(line_number(), "expected 'scenario-begin'");
    int begin_line = cur().number;
    ++idx_;
    std::string body;
    while (!done() && tag() != "scenario-end") {
      body += cur().raw;
      body += '\n';
      ++idx_;
    }
    if (done())
      throw ParseError(begin_line, "unterminated scenario block");
    ++idx_;  // scenario-end
    return parse_scenario(body);
  }

  double tok_double(const Line& l, std::size_t i) {
    return textio::parse_double(l.tokens[i], l.number);
  }
  int tok_int(const Line& l, std::size_t i) {
    return static_cast<int>(textio::parse_i64(l.tokens[i], l.number));
  }

  Category tok_category(const Line& l, std::size_t i) {
    auto c = category_from_string(l.tokens[i]);
    if (!c)
      throw ParseError(l.number, "unknown category '" + std::string(l.tokens[i]) + "'");
    return *c;
  }

  DetectionFrame parse_det(Sensor expect_sensor) {
    if (done() || tag() != "det:" || cur().tokens.size() != 5)
      throw ParseError(line_number(), "expected 'det: <sensor> <ts> <source> <count>'");
    const Line& l = cur();
    auto sensor = sensor_from_string(l.tokens[1]);
    if (!sensor || *sensor != expect_sensor)
      throw ParseError(l.number, "expected " + std::string(to_string(expect_sensor)) +
                                     " detection frame");
    DetectionFrame f;
    f.sensor = *sensor;
    f.timestamp = tok_double(l, 2);
    f.source_frame_index = tok_int(l, 3);
    int count = tok_int(l, 4);
    ++idx_;
    for (int i = 0; i < count; ++i) {
      if (done() || tag() != "d:" || cur().tokens.size() != 6)
        throw ParseError(line_number(), "expected 'd: <id> <category> <x> <y> <speed>'");
      const Line& dl = cur();
      Detection d;
      d.id = tok_int(dl, 1);
      d.category = tok_category(dl, 2);
      d.position = {tok_double(dl, 3), tok_double(dl, 4)};
      d.speed = tok_double(dl, 5);
      f.detections.push_back(d);
      ++idx_;
    }
    return f;
  }

  void parse_frame(RoundTrace& t) {
    const Line& fl = cur();
    if (fl.tokens.size() != 3)
      throw ParseError(fl.number, "expected 'frame: <index> <timestamp>'");
    Frame frame;
    frame.index = tok_int(fl, 1);
    frame.timestamp = tok_double(fl, 2);
    ++idx_;
    while (!done() && tag() == "obst:") {
      const Line& l = cur();
      if (l.tokens.size() != 9)
        throw ParseError(l.number, "malformed 'obst:' line");
      FrameObstacle o;
      o.id = tok_int(l, 1);
      o.category = tok_category(l, 2);
      o.position = {tok_double(l, 3), tok_double(l, 4)};
      o.speed = tok_double(l, 5);
      o.heading = tok_double(l, 6);
      o.half_len = tok_double(l, 7);
      o.half_wid = tok_double(l, 8);
      frame.obstacles.push_back(o);
      ++idx_;
    }
    t.lidar_frames.push_back(parse_det(Sensor::lidar));
    t.camera_frames.push_back(parse_det(Sensor::camera));
    t.fusion_frames.push_back(parse_det(Sensor::fusion));

    if (done() || tag() != "ego:" || cur().tokens.size() != 8)
      throw ParseError(line_number(), "expected 'ego:' line");
    const Line& el = cur();
    EgoState ego;
    ego.position = {tok_double(el, 1), tok_double(el, 2)};
    ego.heading = tok_double(el, 3);
    ego.speed = tok_double(el, 4);
    ego.brake = el.tokens[5] == "1";
    if (el.tokens[6] != "-") {
      BrakeCause cause;
      cause.source_frame_index = tok_int(el, 6);
      cause.detection_id = tok_int(el, 7);
      ego.brake_cause = cause;
    }
    ++idx_;

    if (done() || tag() != "traj:" || cur().tokens.size() < 2)
      throw ParseError(line_number(), "expected 'traj:' line");
    const Line& tl = cur();
    int points = tok_int(tl, 1);
    if (static_cast<int>(tl.tokens.size()) != 2 + 2 * points)
      throw ParseError(tl.number, "trajectory point count mismatch");
    for (int i = 0; i < points; ++i)
      ego.planned_trajectory.push_back(
          {tok_double(tl, 2 + 2 * i), tok_double(tl, 3 + 2 * i)});
    ++idx_;

    t.gt_frames.push_back(std::move(frame));
    t.ego_states.push_back(std::move(ego));
  }

  void parse_event(RoundTrace& t) {
    const Line& l = cur();
    if (l.tokens.size() != 4)
      throw ParseError(l.number, "expected 'event: <ts> <kind> <id>'");
    Event e;
    e.timestamp = tok_double(l, 1);
    auto kind = event_kind_from_string(l.tokens[2]);
    if (!kind)
      throw ParseError(l.number, "unknown event kind '" + std::string(l.tokens[2]) + "'");
    e.kind = *kind;
    e.id = tok_int(l, 3);
    t.events.push_back(e);
    ++idx_;
  }

  void check_shape(const RoundTrace& t) {
    std::size_t n = t.gt_frames.size();
    if (t.lidar_frames.size() != n || t.camera_frames.size() != n ||
        t.fusion_frames.size() != n || t.ego_states.size() != n)
      throw ParseError(line_number(), "inconsistent per-frame record counts");
  }

  std::vector<Line> lines_;
  std::size_t idx_ = 0;
};

}  // namespace

RoundTrace parse_trace(std::string_view text) { return TraceParser(text).parse(); }

RoundTrace load_trace(const std::string& path) {
  return parse_trace(textio::read_file(path));
}

void save_trace(const std::string& path, const RoundTrace& trace) {
  textio::write_file(path, format_trace(trace));
}

}  // namespace scenefuzz
