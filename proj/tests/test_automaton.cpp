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

#include <algorithm>
#include <cmath>

#include "hyproj/automaton.hpp"
#include "hyproj/automaton_projector.hpp"
#include "hyproj/io.hpp"
#include "hyproj/world.hpp"

using namespace hyproj;
using namespace hyproj::ha;

namespace {

const std::string kData = HYPROJ_DATA_DIR;

JumpEdge edge_with(std::vector<Successor> succ, unsigned bits) {
  JumpEdge e;
  e.successors = std::move(succ);
  e.bits = bits;
  return e;
}

double frequency_of_first(const JumpEdge& e, unsigned draws, std::uint64_t seed) {
  Rng rng(seed);
  BitPool bits(rng);
  unsigned first = 0;
  for (unsigned i = 0; i < draws; ++i)
    if (sample_successor_mode(e, bits) == e.successors[0].mode) ++first;
  return static_cast<double>(first) / draws;
}

struct Fig2 {
  world::World world = world::load_world(kData + "/fig2/world.json");
  crp::Plan plan = crp::parse_plan(io::read_file(kData + "/fig2/fig2.plan"));
};

}  // namespace

TEST_CASE("linear flow") {
  AutomatonState s;
  s.t0 = 2.0;
  s.vals0 = {0, 0};
  s.flow = {1, 2};
  CHECK(state_var_vals(s, 5.0).isApprox(Point(3, 6)));
  s.flow = {0, 0};
  s.vals0 = {4, 7};
  for (double t : {2.0, 3.5, 1e6}) CHECK(state_var_vals(s, t) == Point(4, 7));
  CHECK_THROWS_AS(state_var_vals(s, 1.0), TimeBeforeAnchor);
}

TEST_CASE("flow toward a target") {
  FlowLaw law{Point(2300, 800), 50.0, 0.0};
  AutomatonState s;
  s.vals0 = {2400, 600};
  s.flow = law.velocity_at(s.vals0);
  const Point p = state_var_vals(s, 1.0);
  // 50 cm along (-100, 200) / |(-100, 200)|.
  CHECK(p.x() == doctest::Approx(2400 - 50 / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(p.y() == doctest::Approx(600 + 100 / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(std::abs(p.x() - 2377.64) < 1e-2);
  CHECK(std::abs(p.y() - 644.72) < 1e-2);
}

TEST_CASE("successor sampling") {
  CHECK(std::abs(frequency_of_first(edge_with({{1, 1, 12}, {2, 13, 16}}, 4), 100000, 1) - 0.75) <= 0.01);
  CHECK(std::abs(frequency_of_first(edge_with({{1, 1, 8}, {2, 9, 16}}, 4), 100000, 2) - 0.5) <= 0.01);
  Rng rng(3);
  const JumpEdge single = edge_with({{7, 1, 1}}, 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_successor_mode(single, rng) == 7);
}

TEST_CASE("automaton validation") {
  auto check = [](std::vector<Successor> succ, unsigned bits) {
    JumpEdge e = edge_with(std::move(succ), bits);
    return validate_automaton({e}, 3);
  };
  CHECK(check({{1, 1, 12}, {2, 13, 16}}, 4).empty());
  CHECK_FALSE(check({{1, 1, 9}, {2, 9, 16}}, 4).empty());
  CHECK_FALSE(check({{1, 1, 7}, {2, 9, 16}}, 4).empty());
  CHECK_FALSE(check({{1, 1, 12}, {5, 13, 16}}, 4).empty());
  CHECK_FALSE(check({{1, 1, 15}}, 4).empty());
}

TEST_CASE("dyadic quantization") {
  const DyadicRanges exact = quantize_dyadic({0.75, 0.25});
  CHECK(exact.bits == 2);
  CHECK(exact.ranges == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 3}, {4, 4}});
  CHECK_FALSE(exact.rounded);
  const DyadicRanges third = quantize_dyadic({1.0 / 3, 2.0 / 3});
  CHECK(third.rounded);
  CHECK(third.ranges.back().second == (1u << third.bits));
  CHECK(third.ranges[0].second + 1 == third.ranges[1].first);
}

TEST_CASE("initial edges of the office-leaving plan") {
  const Fig2 f;
  crp::InterpreterOptions o;
  o.positional = crp::PositionalPolicy::Symbolic;
  crp::InterpreterState s(f.plan, f.world.fluent_definitions(), o);
  for (const auto& q : s.step(crp::Wakeup{}).started)
    if (std::holds_alternative<crp::SetNavigationMode>(q.action)) s.step(crp::PrimitiveDone{q.id, true, {}});
  const Snapshot snap = build_automaton_from_state(s, f.world.motion, f.world.start, crp::TravelMode::Office);
  REQUIRE(snap.edges.size() == 2);
  CHECK(snap.edges[0].condition.kind == EdgeCondition::Kind::Region);
  CHECK(snap.edges[0].condition.region == geom2d::disk({2300, 817}, 100, false));
  CHECK(snap.edges[1].condition.kind == EdgeCondition::Kind::Arrival);
  CHECK(snap.edges[1].condition.target.isApprox(Point(2300, 800)));
  CHECK(snap.edges[0].successors[0].mode == 1);
  CHECK(snap.edges[1].successors[0].mode == 2);
  CHECK(validate_automaton(snap.edges, 3).empty());
}

TEST_CASE("a lone running primitive gives one completion edge") {
  crp::InterpreterState s(crp::parse_plan("(pick-up L1)"));
  s.step(crp::Wakeup{});
  const Snapshot snap = build_automaton_from_state(s, MotionConfig{}, {0, 0}, crp::TravelMode::Office);
  REQUIRE(snap.edges.size() == 1);
  CHECK(snap.edges[0].condition.kind == EdgeCondition::Kind::Interpreter);
}

TEST_CASE("unfolded office-leaving automaton") {
  const Fig2 f;
  const HybridAutomaton a =
      unfold_automaton(f.plan, f.world.fluent_definitions(), f.world.motion, f.world.start, f.world.start_mode);
  CHECK(a.modes.size() == 19);
  CHECK(a.edges.size() == 18);
  CHECK(a.modes[a.root].edges.size() == 2);
  CHECK_FALSE(a.truncated);
  std::vector<JumpEdge> edges = a.edges;
  CHECK(validate_automaton(edges, a.modes.size()).empty());
  // Every leaf is reached by exactly one root path.
  for (const ControlMode& m : a.modes) {
    if (!a.is_leaf(m.id)) continue;
    std::vector<ModeId> path{m.id};
    while (path.back() != a.root) path.push_back(a.modes[path.back()].parent);
    std::reverse(path.begin(), path.end());
    CHECK(is_path(a, path, true));
    std::vector<std::string> keys;
    for (ModeId id : path) keys.push_back(a.modes[id].key);
    CHECK(path_for_keys(a, keys, true).has_value());
  }
  CHECK_FALSE(is_path(a, {a.root}, true));
  CHECK_FALSE(path_for_keys(a, {"nonsense"}, false).has_value());
}

TEST_CASE("rotation variants branch the automaton") {
  const world::World w = world::load_world(kData + "/fig2/world_rotations.json");
  const Fig2 f;
  const HybridAutomaton a = unfold_automaton(f.plan, w.fluent_definitions(), w.motion, w.start, w.start_mode);
  CHECK(a.modes.size() > 19);
  CHECK(validate_automaton(a.edges, a.modes.size()).empty());
}

TEST_CASE("exact projection follows root-to-leaf paths") {
  const Fig2 f;
  const HybridAutomaton a =
      unfold_automaton(f.plan, f.world.fluent_definitions(), f.world.motion, f.world.start, f.world.start_mode);
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const ExactRun r = project_exact(a, 200.0, rng);
    CHECK_FALSE(r.horizon_exceeded);
    CHECK(is_path(a, r.modes, true));
    CHECK(std::is_sorted(r.jump_times.begin(), r.jump_times.end()));
  }
}

TEST_CASE("edge timing") {
  EdgeCondition c;
  c.kind = EdgeCondition::Kind::Region;
  c.region = geom2d::disk({100, 0}, 10, false);
  CHECK(edge_fire_delay(c, {0, 0}, {10, 0}, {1, 0}, 100) == doctest::Approx(9.0));
  CHECK_FALSE(edge_holds(c, {0, 0}, {1, 0}));
  CHECK(edge_holds(c, {95, 0}, {1, 0}));
  EdgeCondition arrive;
  arrive.kind = EdgeCondition::Kind::Arrival;
  arrive.target = {50, 0};
  CHECK(edge_fire_delay(arrive, {0, 0}, {10, 0}, {1, 0}, 100) == doctest::Approx(5.0));
}
