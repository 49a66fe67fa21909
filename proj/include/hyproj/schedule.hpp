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

#include <string>
#include <vector>

#include "hyproj/automaton.hpp"
#include "hyproj/fluents.hpp"
#include "hyproj/geom2d.hpp"
#include "hyproj/term.hpp"
#include "hyproj/world.hpp"

namespace hyproj::proj {

using geom2d::Point;

class ZeroSpeedMode : public Error {
 public:
  using Error::Error;
};

/// A positional condition some thread waits for, compiled to a region.
struct Trigger {
  geom2d::Region region;
  std::string fluent;
};

struct ScheduleInput {
  geom2d::Polyline path{{Point(0, 0), Point(1, 0)}};
  /// Travel-mode regions in precedence order; empty keeps `initial_mode`.
  std::vector<world::ModeRegion> mode_regions;
  crp::TravelMode initial_mode = crp::TravelMode::Office;
  std::vector<Trigger> triggers;
  ha::MotionConfig motion;
  /// Labeled rectangles: crossing a room emits enter-room / leave-room.
  std::vector<geom2d::Region> rooms;
  /// Labeled door fronts: a trigger crossing on a door front's boundary also
  /// emits start-passing-door / stop-passing-door.
  std::vector<geom2d::Region> door_fronts;
  /// Labeled obstacle rectangles: entering one emits possible-bump.
  std::vector<geom2d::Region> obstacles;
  std::size_t first_waypoint = 1;  // number of the path's second vertex
};

/// One composite endogenous event: `dt` after the previous entry (or the
/// schedule start) the robot is at `position` and `events` occur.
struct ScheduleEntry {
  double dt = 0.0;
  Point position{0, 0};
  double arclength = 0.0;
  std::vector<Term> events;
  crp::TravelMode mode = crp::TravelMode::Office;  // prevailing after the entry
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  crp::TravelMode initial_mode = crp::TravelMode::Office;
  double duration() const;
};

/// Follows the path and collects travel-mode changes, trigger crossings,
/// room and door-front transitions, obstacles, vertices and the endpoint.
/// Co-located events share one entry. Crossings at the very start of the
/// path are taken to have happened already.
Schedule schedule_endogenous_events(const ScheduleInput& input);

/// A running low-level navigation plan.
struct NavState {
  std::string id;
  ScheduleInput input;  // remaining path and its regions
  std::vector<fluents::FluentNetwork> networks;
  Schedule schedule;
  double start_time = 0.0;  // time at the start of input.path
  std::size_t next = 0;     // next entry to occur

  double entry_time(std::size_t i) const;
  /// Interpolated position on the path; clamps to the endpoint.
  Point position_at(double t) const;
  double arclength_at(double t) const;
  Point velocity_at(double t) const;
  crp::TravelMode mode_at(double t) const;
  bool finished() const { return next >= schedule.entries.size(); }
};

/// Compiles `networks` and schedules the whole path starting at time t.
NavState start_navigation(std::string id, ScheduleInput input,
                          std::vector<fluents::FluentNetwork> networks, double t,
                          const fluents::ChangesModel& changes = fluents::ChangesModel::navigation_default());

/// Truncates the path at the position reached at t and schedules the rest
/// against `networks`. Entries already emitted are unaffected.
NavState reschedule_on_new_trigger(
    const NavState& nav, std::vector<fluents::FluentNetwork> networks, double t,
    const fluents::ChangesModel& changes = fluents::ChangesModel::navigation_default());

}  // namespace hyproj::proj
