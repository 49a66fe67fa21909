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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyproj/automaton.hpp"
#include "hyproj/geom2d.hpp"
#include "hyproj/interpreter.hpp"
#include "hyproj/plan.hpp"
#include "hyproj/random.hpp"

namespace hyproj::world {

using geom2d::Point;

struct Room {
  std::string name;
  geom2d::AxisRect rect;
  Point door{0, 0};
  Point desk{0, 0};
  double open_probability = 1.0;
  /// What the robot last saw of the door: "open" or "closed".
  std::string observed = "open";
};

struct Letter {
  std::string id;
  std::string room;
  std::string color;  // empty if only the beliefs know it
};

struct Obstacle {
  std::string name;
  geom2d::AxisRect rect;
  bool told = true;  // the robot has been told about it
};

struct SensorModel {
  double detection = 1.0;
  double false_positive = 0.0;
  double noise = 0.0;  // half-width of uniform value noise
  double range = 300.0;
};

/// A region with the travel mode the navigation system uses inside it.
struct ModeRegion {
  geom2d::Region region;
  crp::TravelMode mode;
  std::string label;
};

struct World {
  geom2d::AxisRect hallway{0, 0, 0, 0, "hallway"};
  std::vector<Room> rooms;
  double doorway_radius = 100.0;
  double door_front_half_width = 60.0;
  double waypoint_depth = 120.0;  // inside waypoint distance from the door
  std::map<std::string, Point, std::less<>> locations;
  std::vector<Letter> letters;
  std::vector<Obstacle> obstacles;
  ha::MotionConfig motion;
  std::map<std::string, SensorModel, std::less<>> sensors;
  Point start{0, 0};
  crp::TravelMode start_mode = crp::TravelMode::Hallway;
  double look_time = 2.0;
  double door_scan_time = 0.5;
  double door_angle_threshold = 20.0;  // degrees
  double open_door_angle = 90.0;       // degrees

  const Room* room(std::string_view name) const;
  const Room* room_at(const Point& p) const;
  const Letter* letter(std::string_view id) const;
  SensorModel sensor(std::string_view name) const;
  /// Rooms, letters (at their room's desk) and named locations.
  std::optional<Point> locate(std::string_view name) const;
  /// Inside waypoint of a room's door (office side) and outside waypoint (on
  /// the hallway centerline).
  Point inside_waypoint(const Room& r) const;
  Point outside_waypoint(const Room& r) const;
  double centerline() const { return 0.5 * (hallway.ymin + hallway.ymax); }
  /// Topological path from `from` to the location `to` through door
  /// waypoints; nullopt if already there. Throws Error for unknown locations.
  std::optional<geom2d::Polyline> route(const Point& from, std::string_view to) const;
  /// Travel-mode regions in precedence order: doorways, offices, hallway.
  std::vector<ModeRegion> mode_regions() const;
  /// Travel mode at p according to mode_regions(); `fallback` outside all.
  crp::TravelMode mode_at(const Point& p, crp::TravelMode fallback) const;
  geom2d::AxisRect door_front(const Room& r) const;
  /// Labeled room rectangles.
  std::vector<geom2d::Region> room_regions() const;
  std::vector<geom2d::Region> door_front_regions() const;
  /// Fluent definitions plans may use: in-hallway?, passing-a-door?,
  /// in-ROOM?, near-door-ROOM?.
  crp::InterpreterState::Definitions fluent_definitions() const;
};

World parse_world(std::string_view json_text);
World load_world(const std::string& path);
/// Rooms disjoint and adjacent to the hallway, doors on room boundaries.
/// Throws Error describing the first problem.
void validate_world(const World& w);

/// Distributions over the values of named random variables. `open-ROOM`
/// variables ("true"/"false") decide door states, `color-LETTER` variables
/// decide envelope colors.
struct Beliefs {
  std::map<std::string, std::vector<std::pair<std::string, double>>> variables;
};

Beliefs parse_beliefs(std::string_view json_text);
Beliefs load_beliefs(const std::string& path);

/// One sampled world: a value per random variable, plus world defaults for
/// doors and letters the beliefs do not mention.
struct WorldSample {
  std::map<std::string, bool, std::less<>> door_open;
  std::map<std::string, std::string, std::less<>> colors;
  std::map<std::string, std::string> values;  // every belief variable
};

WorldSample sample_world(const World& w, const Beliefs& b, Rng& rng);

}  // namespace hyproj::world
