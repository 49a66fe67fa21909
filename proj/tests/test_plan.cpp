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

#include "hyproj/io.hpp"
#include "hyproj/plan.hpp"

using namespace hyproj;
using namespace hyproj::crp;

namespace {

const std::string kData = HYPROJ_DATA_DIR;

void check_round_trip(const Plan& p) {
  const Plan again = parse_plan(print_plan(p));
  CHECK(structurally_equal(p, again));
  CHECK(print_plan(again) == print_plan(p));
}

}  // namespace

TEST_CASE("sequence of a motion and a wait") {
  const Plan p = parse_plan("(seq (move-to 2300 800) (wait-for (reached 2300 800)))");
  REQUIRE(p.root->kind == NodeKind::Seq);
  REQUIRE(p.root->children.size() == 2);
  const Node& move = *p.root->children[0];
  REQUIRE(move.kind == NodeKind::Primitive);
  const auto* m = std::get_if<MoveTo>(&move.action);
  REQUIRE(m);
  CHECK(m->target.isApprox(geom2d::Point(2300, 800)));
  CHECK(p.root->children[1]->kind == NodeKind::WaitFor);
}

TEST_CASE("office-leaving plan structure") {
  const Plan p = parse_plan(io::read_file(kData + "/fig2/fig2.plan"));
  REQUIRE(p.root->kind == NodeKind::Par);
  REQUIRE(p.root->children.size() == 2);
  const Node& motion = *p.root->children[0];
  CHECK(motion.kind == NodeKind::Seq);
  CHECK(std::holds_alternative<MoveTo>(motion.children[0]->action));
  CHECK(motion.children[1]->kind == NodeKind::WaitFor);
  const Node& modes = *p.root->children[1];
  REQUIRE(modes.kind == NodeKind::WithLocalFluents);
  const Node& body = *modes.body();
  REQUIRE(body.kind == NodeKind::Seq);
  const auto* office = std::get_if<SetNavigationMode>(&body.children[0]->action);
  REQUIRE(office);
  CHECK(office->mode == TravelMode::Office);
  CHECK(body.children[1]->kind == NodeKind::WaitFor);
  const auto* doorway = std::get_if<SetNavigationMode>(&body.children[2]->action);
  REQUIRE(doorway);
  CHECK(doorway->mode == TravelMode::Doorway);
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse_plan("(seq)"), SyntaxError);
  CHECK_THROWS_AS(parse_plan("(seq (move-to 1 2)"), SyntaxError);
  CHECK_THROWS_AS(parse_plan("(set-navigation-mode flying)"), SyntaxError);
  CHECK_THROWS_AS(parse_plan("(frobnicate)"), SyntaxError);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_plan("(seq\n  (move-to 1))");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("2:") != std::string::npos);
  }
}

TEST_CASE("round trips") {
  check_round_trip(parse_plan(io::read_file(kData + "/fig2/fig2.plan")));
  check_round_trip(parse_plan(io::read_file(kData + "/courier/tour.plan")));
  check_round_trip(parse_plan(io::read_file(kData + "/courier/revised.plan")));
  check_round_trip(parse_plan(
      "(with-valve wheels 3 (named deliver (named inner (seq (go-to A-120) (put-down L1)))))"));
  check_round_trip(parse_plan("(loop (seq (look-for (letter ?l yellow) camera) (set done yes)) :until (is done yes))"));
}

TEST_CASE("builders match parsed plans") {
  const Plan parsed = parse_plan("(with-valve wheels 2 (named n (wait-for go)))");
  CHECK(structurally_equal(parsed.root, with_valve("wheels", 2, named("n", wait_for(fluents::input("go"))))));
  CHECK(find_named(parsed.root, "n"));
  CHECK_FALSE(find_named(parsed.root, "m"));
}

TEST_CASE("travel mode names") {
  CHECK(travel_mode_from_string("hallway") == TravelMode::Hallway);
  CHECK_FALSE(travel_mode_from_string("flying"));
  CHECK(std::string(to_string(TravelMode::Doorway)) == "doorway");
}
