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

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyproj/plan.hpp"
#include "hyproj/projector.hpp"
#include "hyproj/rules.hpp"
#include "hyproj/world.hpp"

namespace hyproj::courier {

class CycleIntroduced : public Error {
 public:
  using Error::Error;
};

struct DeliveryRequest {
  std::string id;  // e.g. cmd-1
  std::string object;
  std::string pickup;   // room
  std::string dropoff;  // room
  std::optional<double> deadline;
  std::string color;  // empty if unknown
};

/// One at-location subplan: go to a room and pick up or put down a letter.
struct Step {
  std::string name;  // pickup-REQ or deliver-REQ
  std::string request;
  bool pickup = true;
  std::string object;
  std::string room;
};

/// A request postponed until the door of `room` is seen open.
struct Opportunity {
  std::string request;
  std::string room;
};

struct TourPlan {
  std::vector<DeliveryRequest> requests;
  std::vector<Step> steps;                                 // heuristic order
  std::vector<std::pair<std::string, std::string>> ordering;  // (before, after)
  std::vector<Opportunity> opportunities;

  const Step* step(const std::string& name) const;
  /// Heuristic order refined by the ordering constraints: at each point the
  /// earliest step whose predecessors are placed. Throws CycleIntroduced.
  std::vector<std::string> order() const;
  /// The tour as a plan: a restartable loop over guarded at-location steps
  /// holding the wheels, opportunities that preempt it when their door is
  /// seen open, and a policy estimating door angles while passing doors.
  crp::Plan to_plan() const;
};

/// Pickups in nearest-neighbor order from `start`, then deliveries in
/// nearest-neighbor order from the last pickup. Requests whose pickup room
/// was last observed closed become opportunities.
TourPlan heuristic_schedule(const std::vector<DeliveryRequest>& requests, const world::Point& start,
                            const world::World& w);

struct AddOrdering {
  std::string before;
  std::string after;
};
struct DropOpportunity {
  std::string request;
};
using RevisionRule = std::variant<AddOrdering, DropOpportunity>;

TourPlan apply_revision_rule(const TourPlan& tour, const RevisionRule& rule);

/// Length of the routes visiting `order` from `start`.
double tour_length(const TourPlan& tour, const std::vector<std::string>& order, const world::Point& start,
                   const world::World& w);

/// The fixture world, beliefs, rules and requests shipped under `data_dir`.
world::World build_fixture_world(const std::string& data_dir = HYPROJ_DATA_DIR);
world::Beliefs fixture_beliefs(const std::string& data_dir = HYPROJ_DATA_DIR);
rules::RuleSet fixture_rules(const std::string& data_dir = HYPROJ_DATA_DIR);
std::vector<DeliveryRequest> fixture_requests();

enum class Category { DoorClosed, TakenFailure, TakenSuccess, Residue };
const char* to_string(Category c);

/// Sorts a projected tour by whether the opportunistic letter was picked up
/// and whether the flaw occurred. Unfinished runs are residue.
Category classify_scenario(const proj::ProjectionResult& r, const std::string& opportunistic_object,
                           const rules::FlawSpec& flaw);

}  // namespace hyproj::courier
