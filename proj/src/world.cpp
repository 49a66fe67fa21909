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

#include "hyproj/world.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace hyproj::world {

using nlohmann::json;

const Room* World::room(std::string_view name) const {
  for (const Room& r : rooms)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

bool in_rect(const Point& p, const geom2d::AxisRect& r) {
  return p.x() >= r.xmin && p.x() <= r.xmax && p.y() >= r.ymin && p.y() <= r.ymax;
}

bool south_of_hallway(const Room& r, const geom2d::AxisRect& hallway) {
  return r.rect.ymax <= hallway.ymin + 1e-9;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {} file {}", what, path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Point point_of(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

geom2d::AxisRect rect_of(const json& j, std::string label) {
  return {j.at("xmin").get<double>(), j.at("xmax").get<double>(), j.at("ymin").get<double>(),
          j.at("ymax").get<double>(), std::move(label)};
}

crp::TravelMode mode_of(const std::string& s) {
  auto m = crp::travel_mode_from_string(s);
  if (!m) throw Error("unknown travel mode " + s);
  return *m;
}

}  // namespace

const Room* World::room_at(const Point& p) const {
  for (const Room& r : rooms)
    if (in_rect(p, r.rect)) return &r;
  return nullptr;
}

const Letter* World::letter(std::string_view id) const {
  for (const Letter& l : letters)
    if (l.id == id) return &l;
  return nullptr;
}

SensorModel World::sensor(std::string_view name) const {
  auto it = sensors.find(name);
  return it == sensors.end() ? SensorModel{} : it->second;
}

std::optional<Point> World::locate(std::string_view name) const {
  if (const Room* r = room(name)) return r->desk;
  if (const Letter* l = letter(name))
    if (const Room* r = room(l->room)) return r->desk;
  auto it = locations.find(name);
  if (it != locations.end()) return it->second;
  return std::nullopt;
}

Point World::inside_waypoint(const Room& r) const {
  const double dir = south_of_hallway(r, hallway) ? -1.0 : 1.0;
  return {r.door.x(), r.door.y() + dir * waypoint_depth};
}

Point World::outside_waypoint(const Room& r) const { return {r.door.x(), centerline()}; }

std::optional<geom2d::Polyline> World::route(const Point& from, std::string_view to) const {
  const auto target = locate(to);
  if (!target) throw Error(fmt::format("unknown location {}", to));
  const Room* src = room_at(from);
  const Room* dst = room_at(*target);
  std::vector<Point> v{from};
  if (src && src != dst) {
    v.push_back(inside_waypoint(*src));
    v.push_back(outside_waypoint(*src));
  }
  if (dst && dst != src) {
    v.push_back(outside_waypoint(*dst));
    v.push_back(inside_waypoint(*dst));
  }
  v.push_back(*target);
  std::vector<Point> clean;
  for (const Point& p : v)
    if (clean.empty() || geom2d::distance(clean.back(), p) > 1e-6) clean.push_back(p);
  if (clean.size() < 2) return std::nullopt;
  return geom2d::Polyline(std::move(clean));
}

std::vector<ModeRegion> World::mode_regions() const {
  std::vector<ModeRegion> out;
  for (const Room& r : rooms)
    out.push_back({geom2d::disk(r.door, doorway_radius, false, "doorway " + r.name),
                   crp::TravelMode::Doorway, "doorway " + r.name});
  for (const Room& r : rooms)
    out.push_back({geom2d::Region{r.rect}, crp::TravelMode::Office, r.name});
  out.push_back({geom2d::Region{hallway}, crp::TravelMode::Hallway, "hallway"});
  return out;
}

crp::TravelMode World::mode_at(const Point& p, crp::TravelMode fallback) const {
  for (const ModeRegion& m : mode_regions())
    if (geom2d::point_in_region(p, m.region)) return m.mode;
  return fallback;
}

geom2d::AxisRect World::door_front(const Room& r) const {
  return {r.door.x() - door_front_half_width, r.door.x() + door_front_half_width, hallway.ymin,
          hallway.ymax, r.name};
}

std::vector<geom2d::Region> World::room_regions() const {
  std::vector<geom2d::Region> out;
  for (const Room& r : rooms) out.push_back(geom2d::Region{r.rect});
  return out;
}

std::vector<geom2d::Region> World::door_front_regions() const {
  std::vector<geom2d::Region> out;
  for (const Room& r : rooms) out.push_back(geom2d::Region{door_front(r)});
  return out;
}

namespace {

fluents::GatePtr in_box(double xmin, double xmax, double ymin, double ymax) {
  using fluents::CmpOp;
  return fluents::all_of({
      fluents::cmp(CmpOp::Gt, fluents::input("robot-x"), xmin),
      fluents::cmp(CmpOp::Lt, fluents::input("robot-x"), xmax),
      fluents::cmp(CmpOp::Gt, fluents::input("robot-y"), ymin),
      fluents::cmp(CmpOp::Lt, fluents::input("robot-y"), ymax),
  });
}

}  // namespace

crp::InterpreterState::Definitions World::fluent_definitions() const {
  crp::InterpreterState::Definitions d;
  d["in-hallway?"] = in_box(hallway.xmin, hallway.xmax, hallway.ymin, hallway.ymax);
  std::vector<fluents::GatePtr> fronts;
  for (const Room& r : rooms) {
    const geom2d::AxisRect f = door_front(r);
    fronts.push_back(in_box(f.xmin, f.xmax, f.ymin, f.ymax));
    d["in-" + r.name + "?"] = in_box(r.rect.xmin, r.rect.xmax, r.rect.ymin, r.rect.ymax);
    d["near-door-" + r.name + "?"] =
        fluents::cmp(fluents::CmpOp::Lt,
                     fluents::dist(fluents::input("robot-x"), fluents::input("robot-y"), r.door),
                     doorway_radius);
  }
  d["passing-a-door?"] = fluents::any_of(std::move(fronts));
  return d;
}

World parse_world(std::string_view text) {
  World w;
  try {
    const json j = json::parse(text);
    w.hallway = rect_of(j.at("hallway"), "hallway");
    w.doorway_radius = j.value("doorway_radius", w.doorway_radius);
    w.door_front_half_width = j.value("door_front_half_width", w.door_front_half_width);
    w.waypoint_depth = j.value("waypoint_depth", w.waypoint_depth);
    w.look_time = j.value("look_time", w.look_time);
    w.door_scan_time = j.value("door_scan_time", w.door_scan_time);
    w.door_angle_threshold = j.value("door_angle_threshold", w.door_angle_threshold);
    w.open_door_angle = j.value("open_door_angle", w.open_door_angle);
    if (j.contains("speeds"))
      for (const auto& [k, v] : j.at("speeds").items()) w.motion.speeds[mode_of(k)] = v.get<double>();
    if (j.contains("rotations")) {
      w.motion.rotations.clear();
      for (const json& r : j.at("rotations"))
        w.motion.rotations.push_back({r.at("radians").get<double>(), r.at("probability").get<double>()});
    }
    if (j.contains("start")) {
      w.start = point_of(j.at("start"));
      w.start_mode = mode_of(j.at("start").value("mode", "hallway"));
    }
    for (const json& r : j.at("rooms")) {
      Room room;
      room.name = r.at("name").get<std::string>();
      room.rect = rect_of(r, room.name);
      room.door = point_of(r.at("door"));
      room.desk = r.contains("desk") ? point_of(r.at("desk"))
                                     : Point(0.5 * (room.rect.xmin + room.rect.xmax),
                                             0.5 * (room.rect.ymin + room.rect.ymax));
      room.open_probability = r.value("open_probability", 1.0);
      room.observed = r.value("observed", "open");
      w.rooms.push_back(std::move(room));
    }
    if (j.contains("locations"))
      for (const auto& [k, v] : j.at("locations").items()) w.locations[k] = point_of(v);
    if (j.contains("letters"))
      for (const json& l : j.at("letters"))
        w.letters.push_back({l.at("id").get<std::string>(), l.at("room").get<std::string>(),
                             l.value("color", "")});
    if (j.contains("obstacles"))
      for (const json& o : j.at("obstacles")) {
        const std::string name = o.at("name").get<std::string>();
        w.obstacles.push_back({name, rect_of(o, name), o.value("told", true)});
      }
    if (j.contains("sensors"))
      for (const auto& [k, v] : j.at("sensors").items()) {
        SensorModel m;
        m.detection = v.value("detection", m.detection);
        m.false_positive = v.value("false_positive", m.false_positive);
        m.noise = v.value("noise", m.noise);
        m.range = v.value("range", m.range);
        w.sensors[k] = m;
      }
  } catch (const json::exception& e) {
    throw Error(std::string("world: ") + e.what());
  }
  validate_world(w);
  return w;
}

World load_world(const std::string& path) { return parse_world(read_file(path, "world")); }

void validate_world(const World& w) {
  const auto& h = w.hallway;
  if (!(h.xmin < h.xmax && h.ymin < h.ymax)) throw Error("world: hallway rectangle is empty");
  for (std::size_t i = 0; i < w.rooms.size(); ++i) {
    const Room& r = w.rooms[i];
    const auto& q = r.rect;
    if (!(q.xmin < q.xmax && q.ymin < q.ymax)) throw Error("world: room " + r.name + " is empty");
    const bool south = std::abs(q.ymax - h.ymin) < 1e-9;
    const bool north = std::abs(q.ymin - h.ymax) < 1e-9;
    if (!south && !north) throw Error("world: room " + r.name + " does not border the hallway");
    const double edge = south ? q.ymax : q.ymin;
    if (std::abs(r.door.y() - edge) > 1e-9 || r.door.x() <= q.xmin || r.door.x() >= q.xmax)
      throw Error("world: door of " + r.name + " is not on its hallway wall");
    if (!(r.open_probability >= 0.0 && r.open_probability <= 1.0))
      throw Error("world: open probability of " + r.name + " is not in [0,1]");
    if (r.observed != "open" && r.observed != "closed")
      throw Error("world: observed state of " + r.name + " must be open or closed");
    for (std::size_t k = 0; k < i; ++k) {
      const auto& o = w.rooms[k].rect;
      if (q.xmin < o.xmax && o.xmin < q.xmax && q.ymin < o.ymax && o.ymin < q.ymax)
        throw Error("world: rooms " + w.rooms[k].name + " and " + r.name + " overlap");
      if (w.rooms[k].name == r.name) throw Error("world: duplicate room " + r.name);
    }
  }
  for (const Letter& l : w.letters)
    if (!w.room(l.room)) throw Error("world: letter " + l.id + " is in unknown room " + l.room);
  for (const auto& [mode, speed] : w.motion.speeds)
    if (!(speed > 0.0)) throw Error(fmt::format("world: speed of {} mode must be positive", crp::to_string(mode)));
}

Beliefs parse_beliefs(std::string_view text) {
  Beliefs b;
  try {
    const json j = json::parse(text);
    const json& vars = j.contains("variables") ? j.at("variables") : j;
    for (const auto& [name, dist] : vars.items()) {
      auto& values = b.variables[name];
      double total = 0.0;
      for (const auto& [value, p] : dist.items()) {
        const double prob = p.get<double>();
        if (!(prob >= 0.0 && prob <= 1.0))
          throw Error(fmt::format("beliefs: probability of {}={} is not in [0,1]", name, value));
        values.emplace_back(value, prob);
        total += prob;
      }
      if (values.empty() || std::abs(total - 1.0) > 1e-9)
        throw Error(fmt::format("beliefs: distribution of {} does not sum to 1", name));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("beliefs: ") + e.what());
  }
  return b;
}

Beliefs load_beliefs(const std::string& path) { return parse_beliefs(read_file(path, "beliefs")); }

WorldSample sample_world(const World& w, const Beliefs& b, Rng& rng) {
  WorldSample s;
  for (const auto& [name, values] : b.variables) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::string chosen = values.back().first;
    for (const auto& [v, p] : values) {
      acc += p;
      if (u < acc) {
        chosen = v;
        break;
      }
    }
    s.values[name] = chosen;
  }
  for (const Room& r : w.rooms) {
    auto it = s.values.find("open-" + r.name);
    s.door_open[r.name] = it != s.values.end() ? it->second == "true" : bernoulli(rng, r.open_probability);
  }
  for (const Letter& l : w.letters) {
    auto it = s.values.find("color-" + l.id);
    s.colors[l.id] = it != s.values.end() ? it->second : (l.color.empty() ? "unknown" : l.color);
  }
  return s;
}

}  // namespace hyproj::world
