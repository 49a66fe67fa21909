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

#include "hyproj/fluents.hpp"
#include "hyproj/random.hpp"

using namespace hyproj;
using namespace hyproj::fluents;

namespace {

FluentNetwork in_a120() {
  return parse_network("(and (>= robot-x 860) (<= robot-x 1265) (< robot-y 817))", "in-a-120?");
}

Bindings at(double x, double y) { return {{"robot-x", x}, {"robot-y", y}}; }

}  // namespace

TEST_CASE("room network evaluation") {
  CHECK(eval_network(in_a120(), at(1000, 500)));
  CHECK_FALSE(eval_network(in_a120(), at(859, 500)));
  CHECK_FALSE(eval_network(in_a120(), at(1000, 900)));
}

TEST_CASE("empty conjunction and disjunction") {
  CHECK(eval_network(FluentNetwork("t", all_of({})), Bindings{}));
  CHECK_FALSE(eval_network(FluentNetwork("f", any_of({})), Bindings{}));
}

TEST_CASE("unbound input and type errors") {
  CHECK_THROWS_AS(eval_network(in_a120(), Bindings{{"robot-x", 1000.0}}), UnboundInput);
  CHECK_THROWS_AS(eval_network(parse_network("(and robot-x)"), at(1, 1)), TypeMismatch);
}

TEST_CASE("inputs in first-use order") {
  const auto ins = parse_network("(and (< robot-y 3) door-open (> robot-x 2) (< robot-y 9))").inputs();
  CHECK(ins == std::vector<std::string>{"robot-y", "door-open", "robot-x"});
}

TEST_CASE("pending networks keep only positional conditions") {
  const ChangesModel m = ChangesModel::navigation_default();
  const PendingCondition room{"in-a-120?", in_a120()};
  const PendingCondition timer{"timer", parse_network("(> clock 30)", "timer")};
  const PendingCondition dw{"entering-dw?", parse_network("(< (dist robot-x robot-y 2300 817) 100)", "entering-dw?")};
  const auto nav = "low-level-navigation-plan";
  const auto one = pending_networks({room, timer}, m, nav);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == in_a120());
  CHECK(pending_networks({timer}, m, nav).empty());
  const auto two = pending_networks({dw, timer, room}, m, nav);
  REQUIRE(two.size() == 2);
  CHECK(two[0].output() == "entering-dw?");
  CHECK(two[1].output() == "in-a-120?");
  CHECK(pending_networks({room}, m, "pick-up").empty());
}

TEST_CASE("room network compiles to an intersection of half-planes") {
  using namespace geom2d;
  const Region want = intersection_of({half_plane(Axis::X, 860, Side::Above, false),
                                       half_plane(Axis::X, 1265, Side::Below, false),
                                       half_plane(Axis::Y, 817, Side::Below, true)});
  CHECK(compile_to_region(in_a120()) == want);
}

TEST_CASE("distance bound compiles to a disk") {
  const auto r = compile_to_region(parse_network("(< (dist robot-x robot-y 2300 817) 100)"));
  CHECK(r == geom2d::disk({2300, 817}, 100, false));
}

TEST_CASE("compiled regions agree with evaluation on a grid") {
  const char* nets[] = {"(not (< (dist robot-x robot-y 50 50) 30))",
                        "(or (< robot-x 20) (and (> robot-y 40) (<= (dist robot-x robot-y 0 100) 60)))",
                        "(>= (dist robot-x robot-y 25.5 70) 10)"};
  for (const char* text : nets) {
    const FluentNetwork net = parse_network(text);
    const geom2d::Region r = compile_to_region(net);
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const double x = i + 0.5, y = j + 0.5;
        CHECK(geom2d::point_in_region({x, y}, r) == eval_network(net, at(x, y)));
      }
  }
}

TEST_CASE("non-positional networks do not compile") {
  CHECK_THROWS_AS(compile_to_region(parse_network("(> clock 3)")), NotCompilable);
  CHECK_THROWS_AS(compile_to_region(parse_network("door-open")), NotCompilable);
}

TEST_CASE("expansion of local definitions") {
  const GatePtr dist_dw = parse_network("(dist robot-x robot-y 2300 817)").root();
  const GatePtr near = parse_network("(< distance-to-doorway 100)").root();
  auto scope = [&](std::string_view id) -> GatePtr { return id == "distance-to-doorway" ? dist_dw : nullptr; };
  const FluentNetwork expanded("entering-dw?", expand(near, scope));
  CHECK(eval_network(expanded, at(2300, 750)));
  CHECK_FALSE(eval_network(expanded, at(2300, 600)));
  CHECK(depends_on_process(expanded, ChangesModel::navigation_default(), "low-level-navigation-plan"));
  auto cyclic = [&](std::string_view id) -> GatePtr { return id == "a" ? input("a") : nullptr; };
  CHECK_THROWS_AS(expand(input("a"), cyclic), Error);
}

TEST_CASE("network text round trip") {
  const FluentNetwork n = parse_network("(or (not door-open) (> (dist robot-x robot-y 1 2) 3.5))");
  CHECK(structurally_equal(gate_from_datum(gate_to_datum(n.root())), n.root()));
  CHECK(parse_network(to_string(n.root())) == n);
}
