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
#include <limits>

#include "hyproj/courier.hpp"
#include "hyproj/flaw.hpp"

using namespace hyproj;
using namespace hyproj::courier;

namespace {

const world::World& fixture() {
  static const world::World w = build_fixture_world();
  return w;
}

bool respects_requests(const TourPlan& t, const std::vector<std::string>& order) {
  for (const DeliveryRequest& r : t.requests) {
    const auto p = std::find(order.begin(), order.end(), "pickup-" + r.id);
    const auto d = std::find(order.begin(), order.end(), "deliver-" + r.id);
    if (p == order.end() || d == order.end() || p > d) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("fixture world") {
  const world::World& w = fixture();
  CHECK_NOTHROW(world::validate_world(w));
  CHECK(w.room("A-113")->observed == "closed");
  CHECK(w.letter("L1")->room == "A-111");
}

TEST_CASE("room fluent matches the room rectangle below the hallway") {
  const world::World& w = fixture();
  const auto defs = w.fluent_definitions();
  const fluents::FluentNetwork in_a120("in-A-120?", defs.at("in-A-120?"));
  const geom2d::Region want =
      geom2d::intersection_of({geom2d::rect(860, 1265, 217, 817), geom2d::half_plane(geom2d::Axis::Y, 817, geom2d::Side::Below)});
  for (double x = 800.5; x < 1300; x += 7)
    for (double y = 150.5; y < 900; y += 7)
      CHECK(fluents::eval_network(in_a120, fluents::Bindings{{"robot-x", x}, {"robot-y", y}}) ==
            geom2d::point_in_region({x, y}, want));
}

TEST_CASE("route from A-117 to A-111 passes both doors") {
  const world::World& w = fixture();
  const auto path = w.route(w.room("A-117")->desk, "A-111");
  REQUIRE(path);
  for (const char* name : {"A-117", "A-111"}) {
    const geom2d::Region doorway = geom2d::disk(w.room(name)->door, w.doorway_radius, false);
    CHECK(geom2d::path_region_crossings(*path, doorway).size() == 2);
  }
  CHECK(w.room_at(path->vertices().back()) == w.room("A-111"));
}

TEST_CASE("heuristic schedule of the fixture requests") {
  const world::World& w = fixture();
  const TourPlan t = heuristic_schedule(fixture_requests(), w.start, w);
  const std::vector<std::string> order = t.order();
  CHECK(order.size() == 4);
  CHECK(respects_requests(t, order));
  // Within twice the best valid order.
  std::vector<std::string> perm = order;
  std::sort(perm.begin(), perm.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    if (respects_requests(t, perm)) best = std::min(best, tour_length(t, perm, w.start, w));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(tour_length(t, order, w.start, w) <= 2 * best);
}

TEST_CASE("closed pickup rooms become opportunities") {
  const world::World& w = fixture();
  const TourPlan t = heuristic_schedule(fixture_requests(), w.start, w);
  REQUIRE(t.opportunities.size() == 1);
  CHECK(t.opportunities[0].request == "cmd-2");
  CHECK(t.opportunities[0].room == "A-113");
  const std::string text = crp::print_plan(t.to_plan());
  CHECK(text.find("(wait-for (fluent door-open-A-113))") != std::string::npos);
}

TEST_CASE("a single request is picked up then delivered") {
  const world::World& w = fixture();
  const TourPlan t = heuristic_schedule({fixture_requests()[0]}, w.start, w);
  CHECK(t.order() == std::vector<std::string>{"pickup-cmd-1", "deliver-cmd-1"});
  CHECK(t.opportunities.empty());
}

TEST_CASE("ordering revisions") {
  const world::World& w = fixture();
  const TourPlan t = heuristic_schedule(fixture_requests(), w.start, w);
  const TourPlan revised = apply_revision_rule(t, AddOrdering{"deliver-cmd-2", "pickup-cmd-1"});
  CHECK(revised.order() ==
        std::vector<std::string>{"pickup-cmd-2", "deliver-cmd-2", "pickup-cmd-1", "deliver-cmd-1"});
  const TourPlan a = apply_revision_rule(t, AddOrdering{"pickup-cmd-1", "pickup-cmd-2"});
  CHECK_THROWS_AS(apply_revision_rule(a, AddOrdering{"pickup-cmd-2", "pickup-cmd-1"}), CycleIntroduced);
  CHECK_THROWS_AS(apply_revision_rule(t, AddOrdering{"deliver-cmd-1", "pickup-cmd-1"}), CycleIntroduced);
  CHECK_THROWS_AS(apply_revision_rule(t, AddOrdering{"nope", "pickup-cmd-1"}), Error);
}

TEST_CASE("dropping the opportunity skips its request") {
  const world::World& w = fixture();
  const TourPlan t = heuristic_schedule(fixture_requests(), w.start, w);
  const TourPlan dropped = apply_revision_rule(t, DropOpportunity{"cmd-2"});
  const TourPlan skip = heuristic_schedule({fixture_requests()[0]}, w.start, w);
  CHECK(dropped.order() == skip.order());
  CHECK(crp::print_plan(dropped.to_plan()) == crp::print_plan(skip.to_plan()));
  CHECK_THROWS_AS(apply_revision_rule(dropped, DropOpportunity{"cmd-2"}), Error);
}

TEST_CASE("scenario categories") {
  const world::World& w = fixture();
  const world::Beliefs beliefs = fixture_beliefs();
  const rules::RuleSet rs = fixture_rules();
  const rules::FlawSpec& f = *rs.flaw("two-same-color");
  const crp::Plan plan = heuristic_schedule(fixture_requests(), w.start, w).to_plan();
  std::map<Category, unsigned> seen;
  for (const auto& r : flaw::sample_scenarios(plan, w, beliefs, rs, 60, 3)) {
    const Category c = classify_scenario(r, "L2", f);
    ++seen[c];
    CHECK(c != Category::Residue);
    if (c == Category::DoorClosed) CHECK_FALSE(r.world.door_open.at("A-113"));
    if (c == Category::TakenFailure) CHECK(flaw::flaw_occurs(f, r.timeline));
    if (c == Category::TakenSuccess) CHECK_FALSE(flaw::flaw_occurs(f, r.timeline));
  }
  CHECK(seen[Category::DoorClosed] > 0);
  CHECK(seen[Category::TakenFailure] > 0);
  CHECK(seen[Category::TakenSuccess] > 0);
  proj::ProjectionResult broken;
  broken.error = "deadlock";
  CHECK(classify_scenario(broken, "L2", f) == Category::Residue);
}

TEST_CASE("the revised tour avoids the mixup") {
  const world::World& w = fixture();
  const rules::RuleSet rs = fixture_rules();
  const TourPlan revised = apply_revision_rule(heuristic_schedule(fixture_requests(), w.start, w),
                                               AddOrdering{"deliver-cmd-2", "pickup-cmd-1"});
  const auto runs = flaw::sample_scenarios(revised.to_plan(), w, fixture_beliefs(), rs, 40, 5);
  for (const auto& r : runs) CHECK((r.ok() && r.finished));
  CHECK(flaw::count_flaw(runs, *rs.flaw("two-same-color")) == 0);
}
