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

#include <cmath>

#include "hyproj/io.hpp"
#include "hyproj/reference_projector.hpp"
#include "hyproj/world.hpp"

using namespace hyproj;
using namespace hyproj::ref;

namespace {

ha::HybridAutomaton single_mode(const ha::Point& start, const ha::Point& target, double speed) {
  ha::HybridAutomaton a;
  ha::ControlMode m;
  m.id = 0;
  m.key = "only";
  m.initial_values = start;
  m.law.target = target;
  m.law.speed = speed;
  a.modes = {m};
  return a;
}

// A robot heading along +x; the one edge fires past x = 100.
ha::HybridAutomaton one_edge(double x0) {
  ha::HybridAutomaton a = single_mode({x0, 0}, {1e4, 0}, 10.0);
  a.modes[0].edges = {0};
  ha::ControlMode leaf;
  leaf.id = 1;
  leaf.key = "past";
  leaf.parent = 0;
  a.modes.push_back(leaf);
  ha::JumpEdge e;
  e.from = 0;
  e.condition.region = geom2d::half_plane(geom2d::Axis::X, 100, geom2d::Side::Above);
  e.successors = {{1, 1, 1}};
  a.edges = {e};
  return a;
}

}  // namespace

TEST_CASE("parameters from the jump bound") {
  const RefParameters unit = choose_ref_parameters(std::exp(-1.0), 2.0);
  CHECK(unit.tau_jump == doctest::Approx(1.0));
  CHECK(unit.dt_clock == doctest::Approx(1.0));
  const RefParameters p = choose_ref_parameters(0.05, 0.5);
  CHECK(p.tau_jump == doctest::Approx(0.5 / (2 * std::log(20.0))));
  CHECK(std::abs(p.tau_jump - 0.08345) < 1e-5);
  CHECK(p.dt_clock == 0.25);
  CHECK(p.warning.empty());
  const RefParameters weak = choose_ref_parameters(0.999, 0.5);
  CHECK(weak.tau_jump > 100);
  CHECK_FALSE(weak.warning.empty());
  CHECK_THROWS_AS(choose_ref_parameters(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(choose_ref_parameters(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(choose_ref_parameters(0.5, 0.0), DomainError);
}

TEST_CASE("a mode without edges only ticks") {
  const ha::HybridAutomaton a = single_mode({0, 0}, {1000, 0}, 3.0);
  RefConfig cfg;
  cfg.dt_clock = 0.5;
  cfg.horizon = 10.0;
  const RefResult r = project_clock_tick(a, {}, cfg);
  CHECK(r.modes.size() == 1);
  CHECK(r.jump_times.empty());
  CHECK_FALSE(r.horizon_exceeded);
  std::size_t ticks = 0;
  for (const Occurrence& o : r.timeline.occurrences())
    if (o.event.name() == "clock-tick") ++ticks;
    else CHECK(o.event.name() == "start");
  CHECK(ticks == 20);
  CHECK(ha::state_var_vals(r.state, 10.0).isApprox(ha::Point(30, 0)));
  CHECK(r.timeline.holds_now(parse_term("(now 10)")));
}

TEST_CASE("jumps come after the condition holds") {
  const RefParameters p = choose_ref_parameters(0.05, 0.5);
  unsigned within = 0;
  for (unsigned i = 0; i < 2000; ++i) {
    RefConfig cfg;
    cfg.dt_clock = p.dt_clock;
    cfg.tau_jump = p.tau_jump;
    cfg.seed = i;
    cfg.record_ticks = false;
    const RefResult r = project_clock_tick(one_edge(37.0), {}, cfg);
    REQUIRE(r.jump_times.size() == 1);
    CHECK(r.jump_times[0] >= 6.3);
    CHECK(r.modes == std::vector<ha::ModeId>{0, 1});
    if (r.jump_times[0] - 6.3 <= 0.5) ++within;
  }
  CHECK(within >= 0.94 * 2000);
}

TEST_CASE("the horizon cuts a run short") {
  RefConfig cfg;
  cfg.horizon = 1.0;
  const RefResult r = project_clock_tick(one_edge(0.0), {}, cfg);
  CHECK(r.horizon_exceeded);
  CHECK(r.jump_times.empty());
}

TEST_CASE("jump effects swap the mode occasions") {
  RefConfig cfg;
  cfg.seed = 3;
  const RefResult r = project_clock_tick(one_edge(95.0), {}, cfg);
  REQUIRE(r.jump_times.size() == 1);
  const double t = r.jump_times[0];
  CHECK(r.timeline.holds_at(parse_term("(mode 0)"), t, Side::Before));
  CHECK_FALSE(r.timeline.holds_at(parse_term("(mode 0)"), t, Side::After));
  CHECK(r.timeline.holds_at(parse_term("(mode 1)"), t, Side::After));
}

TEST_CASE("ticks carry no sampled quantity") {
  RefConfig cfg;
  cfg.seed = 11;
  const RefResult with = project_clock_tick(one_edge(20.0), {}, cfg);
  cfg.record_ticks = false;
  const RefResult without = project_clock_tick(one_edge(20.0), {}, cfg);
  CHECK(with.jump_times == without.jump_times);
  CHECK(with.modes == without.modes);
}

TEST_CASE("invalid configuration") {
  RefConfig cfg;
  cfg.dt_clock = 0.0;
  CHECK_THROWS_AS(project_clock_tick(one_edge(0.0), {}, cfg), DomainError);
}

TEST_CASE("office-leaving automaton runs end in leaves") {
  const std::string data = HYPROJ_DATA_DIR;
  const world::World w = world::load_world(data + "/fig2/world_rotations.json");
  const crp::Plan plan = crp::parse_plan(io::read_file(data + "/fig2/fig2.plan"));
  const ha::HybridAutomaton a = ha::unfold_automaton(plan, w.fluent_definitions(), w.motion, w.start, w.start_mode);
  for (unsigned i = 0; i < 300; ++i) {
    RefConfig cfg;
    cfg.dt_clock = 0.25;
    cfg.tau_jump = 0.25;
    cfg.horizon = 200;
    cfg.seed = i;
    cfg.record_ticks = false;
    const RefResult r = project_clock_tick(a, {}, cfg);
    CHECK_FALSE(r.horizon_exceeded);
    CHECK(ha::is_path(a, r.modes, true));
  }
}
