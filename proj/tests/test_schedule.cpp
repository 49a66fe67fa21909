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

#include <doctest.h>

#include "hyproj/schedule.hpp"

using namespace hyproj;
using namespace hyproj::proj;
using crp::TravelMode;

namespace {

std::vector<std::string> names(const Schedule& s) {
  std::vector<std::string> out;
  for (const ScheduleEntry& e : s.entries)
    for (const Term& ev : e.events) out.push_back(ev.str());
  return out;
}

ScheduleInput bands() {
  // Office below y = 100, a doorway band up to 200, hallway above.
  ScheduleInput in;
  in.path = geom2d::Polyline({{0, 0}, {0, 300}});
  in.mode_regions = {{geom2d::rect(-50, 50, 100, 200), TravelMode::Doorway, "dw"},
                     {geom2d::rect(-50, 50, 200, 400), TravelMode::Hallway, "hw"}};
  in.initial_mode = TravelMode::Office;
  return in;
}

fluents::FluentNetwork door_front() {
  return fluents::parse_network("(and (>= robot-x 90) (<= robot-x 110) (>= robot-y 0) (<= robot-y 50))",
                                "passing-a-door?");
}

ScheduleInput corridor() {
  ScheduleInput in;
  in.path = geom2d::Polyline({{0, 25}, {150, 25}, {300, 25}});
  in.initial_mode = TravelMode::Hallway;
  in.door_fronts = {geom2d::rect(90, 110, 0, 50, "A-1")};
  return in;
}

}  // namespace

TEST_CASE("travel modes change at band boundaries in path order") {
  const Schedule s = schedule_endogenous_events(bands());
  CHECK(names(s) == std::vector<std::string>{"(nav-event (set-travel-mode doorway))",
                                             "(nav-event (set-travel-mode hallway))",
                                             "(nav-event destination-reached)"});
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[0].dt == doctest::Approx(100 / 30.0));
  CHECK(s.entries[0].position.isApprox(geom2d::Point(0, 100)));
  CHECK(s.entries[0].mode == TravelMode::Doorway);
  CHECK(s.entries[1].dt == doctest::Approx(100 / 20.0));
  CHECK(s.entries[2].dt == doctest::Approx(100 / 80.0));
  CHECK(s.duration() == doctest::Approx(100 / 30.0 + 100 / 20.0 + 100 / 80.0));
}

TEST_CASE("inside one mode region only vertices and the endpoint occur") {
  ScheduleInput in;
  in.path = geom2d::Polyline({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  in.mode_regions = {{geom2d::rect(-100, 100, -100, 100), TravelMode::Office, "all"}};
  const Schedule s = schedule_endogenous_events(in);
  CHECK(names(s) == std::vector<std::string>{"(nav-event (waypoint 1))", "(nav-event (waypoint 2))",
                                             "(nav-event destination-reached)"});
  for (const ScheduleEntry& e : s.entries) CHECK(e.dt == doctest::Approx(10 / 30.0));
}

TEST_CASE("trigger crossings on a door front pass the door") {
  NavState nav = start_navigation("nav-1", corridor(), {door_front()}, 5.0);
  CHECK(names(nav.schedule) == std::vector<std::string>{
                                   "(passive-sensor-update passing-a-door? enter)",
                                   "(start-passing-door A-1)",
                                   "(passive-sensor-update passing-a-door? exit)",
                                   "(stop-passing-door A-1)",
                                   "(nav-event (waypoint 1))",
                                   "(nav-event destination-reached)",
                               });
  CHECK(nav.entry_time(0) == doctest::Approx(5.0 + 90 / 80.0));
  CHECK(nav.position_at(5.0 + 1.0).isApprox(geom2d::Point(80, 25)));
  CHECK(nav.velocity_at(5.5).isApprox(geom2d::Point(80, 0)));
  CHECK(nav.mode_at(5.5) == TravelMode::Hallway);
}

TEST_CASE("a new trigger mid-path adds its crossings to the rest") {
  NavState nav = start_navigation("nav-1", corridor(), {}, 0.0);
  CHECK(names(nav.schedule).size() == 2);
  const NavState again = reschedule_on_new_trigger(nav, {door_front()}, 0.5);
  CHECK(again.input.path.vertices().front().isApprox(geom2d::Point(40, 25)));
  CHECK(names(again.schedule).size() == 6);
  CHECK(again.entry_time(0) == doctest::Approx(0.5 + 50 / 80.0));
  CHECK(again.input.first_waypoint == 1);
}

TEST_CASE("rescheduling without triggers only truncates") {
  const NavState nav = start_navigation("nav-1", bands(), {}, 0.0);
  const double t = 4.0;  // inside the doorway band
  const NavState cut = reschedule_on_new_trigger(nav, {}, t);
  CHECK(names(cut.schedule) == std::vector<std::string>{"(nav-event (set-travel-mode hallway))",
                                                        "(nav-event destination-reached)"});
  CHECK(cut.entry_time(cut.schedule.entries.size() - 1) ==
        doctest::Approx(nav.entry_time(nav.schedule.entries.size() - 1)));
  CHECK(cut.mode_at(t) == TravelMode::Doorway);
}

TEST_CASE("rescheduling twice at once is idempotent") {
  const NavState nav = start_navigation("nav-1", corridor(), {door_front()}, 0.0);
  const NavState a = reschedule_on_new_trigger(nav, {door_front()}, 0.7);
  const NavState b = reschedule_on_new_trigger(a, {door_front()}, 0.7);
  CHECK(names(a.schedule) == names(b.schedule));
  REQUIRE(a.schedule.entries.size() == b.schedule.entries.size());
  for (std::size_t i = 0; i < a.schedule.entries.size(); ++i) {
    CHECK(a.schedule.entries[i].dt == doctest::Approx(b.schedule.entries[i].dt));
    CHECK(a.schedule.entries[i].position.isApprox(b.schedule.entries[i].position));
  }
}

TEST_CASE("rooms and obstacles") {
  ScheduleInput in;
  in.path = geom2d::Polyline({{0, 0}, {100, 0}});
  in.rooms = {geom2d::rect(20, 60, -10, 10, "A-1")};
  in.obstacles = {geom2d::rect(70, 80, -5, 5, "table")};
  CHECK(names(schedule_endogenous_events(in)) == std::vector<std::string>{"(enter-room A-1)", "(leave-room A-1)",
                                                                          "(possible-bump table)",
                                                                          "(nav-event destination-reached)"});
}

TEST_CASE("a mode without speed cannot be scheduled") {
  ScheduleInput in = bands();
  in.motion.speeds[TravelMode::Doorway] = 0.0;
  CHECK_THROWS_AS(schedule_endogenous_events(in), ZeroSpeedMode);
}
