// Copyright 2026 The hyproj Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyproj/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace hyproj::io {

using json = nlohmann::ordered_json;

namespace {

json terms(const std::vector<Term>& ts) {
  json a = json::array();
  for (const Term& t : ts) a.push_back(t.str());
  return a;
}

}  // namespace

std::string timeline_jsonl(const proj::ProjectionResult& r) {
  std::string out;
  const auto& occ = r.timeline.occurrences();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    json j;
    j["i"] = i;
    j["date"] = occ[i].date;
    j["class"] = to_string(occ[i].cls);
    j["event"] = occ[i].event.str();
    j["opened"] = terms(occ[i].opened);
    j["closed"] = terms(occ[i].closed);
    if (i < r.records.size()) {
      j["x"] = r.records[i].position.x();
      j["y"] = r.records[i].position.y();
      j["travel"] = crp::to_string(r.records[i].travel);
      j["mode"] = r.records[i].mode_key;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string summary_json(const proj::ProjectionResult& r) {
  json j;
  j["events"] = r.timeline.occurrences().size();
  j["reschedules"] = r.reschedules;
  j["jumps"] = r.mode_keys.empty() ? 0 : r.mode_keys.size() - 1;
  j["finished"] = r.finished;
  j["horizon_exceeded"] = r.horizon_exceeded;
  j["error"] = r.error;
  j["end_time"] = r.timeline.last_date();
  j["final_position"] = {r.final_position.x(), r.final_position.y()};
  j["final_travel"] = crp::to_string(r.final_travel);
  j["failures"] = r.failures;
  json world;
  for (const auto& [k, v] : r.world.values) world[k] = v;
  j["world"] = world;
  json open = json::array();
  for (const Term& p : r.timeline.open_propositions()) open.push_back(p.str());
  j["final_state"] = open;
  return j.dump(2) + "\n";
}

std::vector<PlotEvent> read_timeline_jsonl(std::string_view text) {
  std::vector<PlotEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      PlotEvent e;
      e.date = j.at("date").get<double>();
      e.event = j.at("event").get<std::string>();
      e.position = {j.value("x", 0.0), j.value("y", 0.0)};
      out.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw Error(fmt::format("timeline line {}: {}", n, e.what()));
    }
  }
  return out;
}

Glyph glyph_for(const Term& e) {
  if (!e.is_compound()) return Glyph::None;
  const std::string& h = e.name();
  if (h == "nav-event" && e.arg(0).is_compound() && e.arg(0).name() == "set-travel-mode") return Glyph::Rhombus;
  if (h == "start-passing-door" || h == "stop-passing-door") return Glyph::Circle;
  if (h == "enter-room" || h == "leave-room") return Glyph::Square;
  if ((h == "begin" || h == "end") && e.arg(0).is_compound() && e.arg(0).name() == "low-level-nav-plan")
    return Glyph::DoubleCircle;
  return Glyph::None;
}

const char* glyph_class(Glyph g) {
  switch (g) {
    case Glyph::Rhombus: return "travel-mode";
    case Glyph::Circle: return "door-passing";
    case Glyph::Square: return "room-transition";
    case Glyph::DoubleCircle: return "nav-start-stop";
    case Glyph::None: return "";
  }
  return "";
}

std::string plot_svg(const world::World& w, const std::vector<PlotEvent>& events) {
  double xmin = w.hallway.xmin, xmax = w.hallway.xmax, ymin = w.hallway.ymin, ymax = w.hallway.ymax;
  for (const world::Room& r : w.rooms) {
    xmin = std::min(xmin, r.rect.xmin);
    xmax = std::max(xmax, r.rect.xmax);
    ymin = std::min(ymin, r.rect.ymin);
    ymax = std::max(ymax, r.rect.ymax);
  }
  constexpr double kMargin = 20.0;
  const double width = xmax - xmin + 2 * kMargin, height = ymax - ymin + 2 * kMargin;
  auto sx = [&](double x) { return x - xmin + kMargin; };
  auto sy = [&](double y) { return ymax - y + kMargin; };
  auto rect = [&](const geom2d::AxisRect& r, const char* cls) {
    return fmt::format("  <rect class=\"{}\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\"/>\n", cls,
                       sx(r.xmin), sy(r.ymax), r.xmax - r.xmin, r.ymax - r.ymin);
  };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} "
      "{1:.0f}\">\n"
      "  <style>.room,.hallway{{fill:none;stroke:#555;stroke-width:3}} .trajectory{{fill:none;stroke:#1f5fbf;"
      "stroke-width:3}} .travel-mode{{fill:#d9822b}} .door-passing{{fill:#2b9d4f}} .room-transition{{fill:#8e44ad}}"
      " .nav-start-stop circle{{fill:none;stroke:#c0392b;stroke-width:3}} text{{font:24px sans-serif}}</style>\n",
      width, height);
  s += "  <g class=\"world\">\n";
  s += rect(w.hallway, "hallway");
  for (const world::Room& r : w.rooms) {
    s += rect(r.rect, "room");
    s += fmt::format("  <text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", sx(r.rect.xmin) + 10,
                     sy(r.rect.ymin < w.hallway.ymin ? r.rect.ymin : r.rect.ymax) +
                         (r.rect.ymin < w.hallway.ymin ? -10 : 30),
                     r.name);
  }
  s += "  </g>\n";
  if (!events.empty()) {
    s += "  <polyline class=\"trajectory\" points=\"";
    for (std::size_t i = 0; i < events.size(); ++i)
      s += fmt::format("{}{:.1f},{:.1f}", i ? " " : "", sx(events[i].position.x()), sy(events[i].position.y()));
    s += "\"/>\n";
  }
  for (const PlotEvent& e : events) {
    const Glyph g = glyph_for(parse_term(e.event));
    const double x = sx(e.position.x()), y = sy(e.position.y());
    switch (g) {
      case Glyph::None: break;
      case Glyph::Rhombus:
        s += fmt::format("  <polygon class=\"travel-mode\" points=\"{:.1f},{:.1f} {:.1f},{:.1f} {:.1f},{:.1f} "
                         "{:.1f},{:.1f}\"/>\n",
                         x, y - 12, x + 12, y, x, y + 12, x - 12, y);
        break;
      case Glyph::Circle:
        s += fmt::format("  <circle class=\"door-passing\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"7\"/>\n", x, y);
        break;
      case Glyph::Square:
        s += fmt::format("  <rect class=\"room-transition\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"16\" height=\"16\"/>\n",
                         x - 8, y - 8);
        break;
      case Glyph::DoubleCircle:
        s += fmt::format(
            "  <g class=\"nav-start-stop\"><circle cx=\"{0:.1f}\" cy=\"{1:.1f}\" r=\"9\"/><circle cx=\"{0:.1f}\" "
            "cy=\"{1:.1f}\" r=\"15\"/></g>\n",
            x, y);
        break;
    }
  }
  s += "</svg>\n";
  return s;
}

std::string automaton_json(const ha::HybridAutomaton& a) {
  json j;
  j["root"] = a.root;
  j["truncated"] = a.truncated;
  json modes = json::array();
  for (const ha::ControlMode& m : a.modes) {
    json o;
    o["id"] = m.id;
    o["key"] = m.key;
    o["travel"] = crp::to_string(m.travel);
    o["flow"] = {m.flow.x(), m.flow.y()};
    if (m.initial_values) o["initial_values"] = {m.initial_values->x(), m.initial_values->y()};
    o["parent"] = m.parent == ha::kNoMode ? json(nullptr) : json(m.parent);
    o["edges"] = m.edges;
    modes.push_back(std::move(o));
  }
  j["modes"] = modes;
  json edges = json::array();
  for (const ha::JumpEdge& e : a.edges) {
    json o;
    o["id"] = e.id;
    o["from"] = e.from;
    o["condition"] = e.condition.kind == ha::EdgeCondition::Kind::Region
                         ? geom2d::to_string(e.condition.region)
                         : (e.condition.kind == ha::EdgeCondition::Kind::Arrival
                                ? fmt::format("(arrive {} {})", e.condition.target.x(), e.condition.target.y())
                                : e.condition.label);
    o["label"] = e.condition.label;
    o["bits"] = e.bits;
    json succ = json::array();
    for (const ha::Successor& s : e.successors) succ.push_back({{"mode", s.mode}, {"lo", s.lo}, {"hi", s.hi}});
    o["successors"] = succ;
    edges.push_back(std::move(o));
  }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("cannot write " + path);
}

}  // namespace hyproj::io
