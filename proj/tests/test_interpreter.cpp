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

#include "hyproj/interpreter.hpp"
#include "hyproj/io.hpp"

using namespace hyproj;
using namespace hyproj::crp;

namespace {

template <typename A>
std::vector<A> started(const StepResult& r) {
  std::vector<A> out;
  for (const PrimitiveRequest& q : r.started)
    if (const auto* a = std::get_if<A>(&q.action)) out.push_back(*a);
  return out;
}

FluentChange change(std::string name, fluents::Value v) { return FluentChange{{{std::move(name), v}}, {}}; }

}  // namespace

TEST_CASE("wait-for advances when its condition becomes true") {
  InterpreterState s(parse_plan("(seq (wait-for door-open) (pick-up L1))"));
  s.set_fluent("door-open", false);
  CHECK(s.step(Wakeup{}).started.empty());
  REQUIRE(s.blocked_conditions().size() == 1);
  const StepResult r = s.step(change("door-open", true));
  const auto picks = started<PickUp>(r);
  REQUIRE(picks.size() == 1);
  CHECK(picks[0].object == "L1");
  CHECK(s.blocked_conditions().empty());
  s.step(PrimitiveDone{r.started[0].id, true, {}});
  CHECK(s.finished());
}

TEST_CASE("a pulse starts one instance of a whenever body") {
  InterpreterState s(parse_plan(
      "(with-policy (whenever passing-a-door? (estimate-door-angle)) (wait-for done))"));
  s.set_fluent("passing-a-door?", false);
  s.set_fluent("done", false);
  CHECK(s.step(Wakeup{}).started.empty());
  const StepResult r = s.step(FluentChange{{}, {"passing-a-door?"}});
  CHECK(started<EstimateDoorAngle>(r).size() == 1);
  CHECK(s.step(Wakeup{}).started.empty());
}

TEST_CASE("entering the doorway switches the travel mode") {
  const std::string data = HYPROJ_DATA_DIR;
  InterpreterState s(parse_plan(io::read_file(data + "/fig2/fig2.plan")));
  s.set_fluent("robot-x", 2400.0);
  s.set_fluent("robot-y", 600.0);
  s.set_fluent("go-to-completed?", false);
  const StepResult first = s.step(Wakeup{});
  CHECK(started<MoveTo>(first).size() == 1);
  const auto office = started<SetNavigationMode>(first);
  REQUIRE(office.size() == 1);
  CHECK(office[0].mode == TravelMode::Office);
  const auto set_mode = std::find_if(first.started.begin(), first.started.end(), [](const PrimitiveRequest& q) {
    return std::holds_alternative<SetNavigationMode>(q.action);
  });
  CHECK(s.step(PrimitiveDone{set_mode->id, true, {}}).started.empty());
  const StepResult near = s.step(FluentChange{{{"robot-x", 2300.0}, {"robot-y", 750.0}}, {}});
  const auto doorway = started<SetNavigationMode>(near);
  REQUIRE(doorway.size() == 1);
  CHECK(doorway[0].mode == TravelMode::Doorway);
}

TEST_CASE("valves") {
  auto make = [](int priority) {
    InterpreterState s(parse_plan("(par (with-valve wheels 1 (go-to A-111))"
                                  "     (seq (wait-for urgent) (with-valve wheels " +
                                  std::to_string(priority) + " (go-to A-113))))"));
    s.set_fluent("urgent", false);
    return s;
  };

  SUBCASE("a free valve is owned at once") {
    InterpreterState s = make(5);
    const StepResult r = s.step(Wakeup{});
    REQUIRE(started<GoTo>(r).size() == 1);
    CHECK(s.valve_owner("wheels").has_value());
    CHECK(s.valve_waiters().empty());
  }

  SUBCASE("a higher priority preempts the owner") {
    InterpreterState s = make(5);
    const StepResult r0 = s.step(Wakeup{});
    const auto owner = s.valve_owner("wheels");
    const StepResult r = s.step(change("urgent", true));
    REQUIRE(r.aborted.size() == 1);
    CHECK(r.aborted[0] == r0.started[0].id);
    const auto go = started<GoTo>(r);
    REQUIRE(go.size() == 1);
    CHECK(go[0].location == "A-113");
    CHECK(s.valve_owner("wheels") != owner);
    CHECK(s.interrupt_log().size() == 1);
    // The preempted thread resumes once the valve is released.
    const StepResult back = s.step(PrimitiveDone{r.started[0].id, true, {}});
    const auto again = started<GoTo>(back);
    REQUIRE(again.size() == 1);
    CHECK(again[0].location == "A-111");
  }

  SUBCASE("equal priorities queue without preemption") {
    InterpreterState s = make(1);
    s.step(Wakeup{});
    const StepResult r = s.step(change("urgent", true));
    CHECK(r.aborted.empty());
    CHECK(r.started.empty());
    CHECK(s.valve_waiters().size() == 1);
    CHECK(s.interrupt_log().empty());
  }
}

TEST_CASE("variables, conditionals and loops") {
  InterpreterState s(parse_plan(
      "(seq (set state to-be-acquired)"
      "     (loop (if (is state to-be-acquired) (seq (pick-up L1) (set state loaded))) :until (is state loaded))"
      "     (put-down L1))"));
  const StepResult r = s.step(Wakeup{});
  REQUIRE(started<PickUp>(r).size() == 1);
  CHECK(s.variables().at("state") == "to-be-acquired");
  const StepResult r2 = s.step(PrimitiveDone{r.started[0].id, true, {}});
  CHECK(s.variables().at("state") == "loaded");
  REQUIRE(started<PutDown>(r2).size() == 1);
}

TEST_CASE("failures are recorded") {
  InterpreterState s(parse_plan("(seq (pick-up L1) (put-down L1))"));
  const StepResult r = s.step(Wakeup{});
  s.step(PrimitiveDone{r.started[0].id, false, "two-same-color-letters"});
  REQUIRE(s.failures().size() == 1);
  CHECK(s.failures()[0].second == "two-same-color-letters");
}

TEST_CASE("try-in-parallel ends with its first finished branch") {
  InterpreterState s(parse_plan("(seq (try-in-parallel (wait-for stop) (go-to A-111)) (pick-up L1))"));
  s.set_fluent("stop", false);
  const StepResult r = s.step(Wakeup{});
  REQUIRE(started<GoTo>(r).size() == 1);
  const StepResult r2 = s.step(change("stop", true));
  CHECK(r2.aborted.size() == 1);
  CHECK(started<PickUp>(r2).size() == 1);
}

TEST_CASE("signatures identify control situations") {
  const Plan plan = parse_plan("(seq (wait-for a) (wait-for b))");
  InterpreterState s(plan), t(plan);
  for (InterpreterState* x : {&s, &t}) {
    x->set_fluent("a", false);
    x->set_fluent("b", false);
    x->step(Wakeup{});
  }
  CHECK(s.signature() == t.signature());
  s.step(change("a", true));
  CHECK(s.signature() != t.signature());
}
