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

#include "hyproj/courier.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "hyproj/flaw.hpp"

namespace hyproj::courier {

namespace {

std::string state_var(const std::string& request) { return "execution-state-" + request; }
std::string enabled_var(const std::string& request) { return request + "-enabled"; }

double route_length(const world::World& w, const world::Point& from, const std::string& to) {
  const auto path = w.route(from, to);
  return path ? path->length() : 0.0;
}

world::Point desk(const world::World& w, const std::string& room) {
  const world::Room* r = w.room(room);
  if (!r) throw Error("unknown room " + room);
  return r->desk;
}

/// Nearest-neighbor sweep over `steps` from `at`; updates `at`.
void sweep(std::vector<Step> steps, world::Point& at, const world::World& w, std::vector<Step>& out) {
  while (!steps.empty()) {
    auto best = steps.begin();
    double best_len = std::numeric_limits<double>::infinity();
    for (auto it = steps.begin(); it != steps.end(); ++it) {
      const double len = route_length(w, at, it->room);
      if (len < best_len) {
        best_len = len;
        best = it;
      }
    }
    at = desk(w, best->room);
    out.push_back(*best);
    steps.erase(best);
  }
}

}  // namespace

const Step* TourPlan::step(const std::string& name) const {
  for (const Step& s : steps)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<std::string> TourPlan::order() const {
  std::vector<std::string> out;
  std::set<std::string> placed;
  while (out.size() < steps.size()) {
    bool progress = false;
    for (const Step& s : steps) {
      if (placed.count(s.name)) continue;
      const bool ready = std::all_of(ordering.begin(), ordering.end(), [&](const auto& c) {
        return c.second != s.name || placed.count(c.first);
      });
      if (!ready) continue;
      out.push_back(s.name);
      placed.insert(s.name);
      progress = true;
      break;
    }
    if (!progress) throw CycleIntroduced("ordering constraints are cyclic");
  }
  return out;
}

crp::Plan TourPlan::to_plan() const {
  std::string body;
  for (const std::string& name : order()) {
    const Step& s = *step(name);
    const std::string var = state_var(s.request);
    std::string sub =
        s.pickup ? fmt::format("(if (is {} to-be-acquired) (go-to {}) (pick-up {}) (set {} loaded))", var, s.room,
                               s.object, var)
                 : fmt::format("(if (is {} loaded) (go-to {}) (put-down {}) (set {} delivered))", var, s.room,
                               s.object, var);
    const bool opportunistic = std::any_of(opportunities.begin(), opportunities.end(),
                                           [&](const Opportunity& o) { return o.request == s.request; });
    if (opportunistic && s.pickup) sub = fmt::format("(if (is {} yes) {})", enabled_var(s.request), sub);
    body += fmt::format("\n        (named {} {})", s.name, sub);
  }
  std::string init;
  for (const DeliveryRequest& r : requests) init += fmt::format(" (set {} to-be-acquired)", state_var(r.id));
  for (const Opportunity& o : opportunities) init += fmt::format(" (set {} no)", enabled_var(o.request));

  std::string plan = fmt::format(
      "(with-valve wheels 1\n"
      "  (loop\n"
      "    (try-in-parallel\n"
      "      (wait-for navigation-interrupted?)\n"
      "      (seq{}\n"
      "        (set tour done)))\n"
      "    :until (is tour done)))",
      body);
  for (const Opportunity& o : opportunities)
    plan = fmt::format(
        "(with-policy\n"
        "  (named opportunity-{} (seq (wait-for door-open-{}) (with-valve wheels 2 (set {} yes))))\n"
        "  {})",
        o.request, o.room, enabled_var(o.request), plan);
  plan = fmt::format(
      "(seq{}\n"
      " (with-policy\n"
      "  (loop (seq (wait-for in-hallway?)\n"
      "             (try-in-parallel (wait-for (not in-hallway?))\n"
      "                              (whenever passing-a-door? (estimate-door-angle)))))\n"
      "  {}))",
      init, plan);
  return crp::parse_plan(plan);
}

TourPlan heuristic_schedule(const std::vector<DeliveryRequest>& requests, const world::Point& start,
                            const world::World& w) {
  if (requests.empty()) throw DomainError("no delivery requests");
  TourPlan t;
  t.requests = requests;
  std::vector<Step> pickups, deliveries;
  std::set<std::string> ids;
  for (const DeliveryRequest& r : requests) {
    if (r.pickup == r.dropoff) throw DomainError("request " + r.id + " picks up and delivers in one room");
    if (!ids.insert(r.id).second) throw DomainError("request " + r.id + " is repeated");
    pickups.push_back({"pickup-" + r.id, r.id, true, r.object, r.pickup});
    deliveries.push_back({"deliver-" + r.id, r.id, false, r.object, r.dropoff});
    t.ordering.emplace_back("pickup-" + r.id, "deliver-" + r.id);
    const world::Room* room = w.room(r.pickup);
    if (!room || !w.room(r.dropoff)) throw Error("request " + r.id + " names an unknown room");
    if (room->observed == "closed") t.opportunities.push_back({r.id, r.pickup});
  }
  world::Point at = start;
  sweep(pickups, at, w, t.steps);
  sweep(deliveries, at, w, t.steps);
  return t;
}

TourPlan apply_revision_rule(const TourPlan& tour, const RevisionRule& rule) {
  TourPlan t = tour;
  if (const auto* a = std::get_if<AddOrdering>(&rule)) {
    if (!t.step(a->before) || !t.step(a->after)) throw Error("ordering names an unknown step");
    t.ordering.emplace_back(a->before, a->after);
    t.order();  // throws CycleIntroduced
    return t;
  }
  const auto& d = std::get<DropOpportunity>(rule);
  auto it = std::find_if(t.opportunities.begin(), t.opportunities.end(),
                         [&](const Opportunity& o) { return o.request == d.request; });
  if (it == t.opportunities.end()) throw Error("no opportunity for request " + d.request);
  t.opportunities.erase(it);
  std::erase_if(t.requests, [&](const DeliveryRequest& r) { return r.id == d.request; });
  std::erase_if(t.steps, [&](const Step& s) { return s.request == d.request; });
  std::erase_if(t.ordering, [&](const auto& c) { return !t.step(c.first) || !t.step(c.second); });
  return t;
}

double tour_length(const TourPlan& tour, const std::vector<std::string>& order, const world::Point& start,
                   const world::World& w) {
  double len = 0.0;
  world::Point at = start;
  for (const std::string& name : order) {
    const Step* s = tour.step(name);
    if (!s) throw Error("unknown step " + name);
    len += route_length(w, at, s->room);
    at = desk(w, s->room);
  }
  return len;
}

world::World build_fixture_world(const std::string& data_dir) {
  world::World w = world::load_world(data_dir + "/courier/world.json");
  world::validate_world(w);
  return w;
}

world::Beliefs fixture_beliefs(const std::string& data_dir) {
  return world::load_beliefs(data_dir + "/courier/beliefs.json");
}

rules::RuleSet fixture_rules(const std::string& data_dir) {
  return rules::load_rules(data_dir + "/courier/rules.sexp");
}

std::vector<DeliveryRequest> fixture_requests() {
  return {{"cmd-1", "L1", "A-111", "A-117", std::nullopt, "yellow"},
          {"cmd-2", "L2", "A-113", "A-120", std::nullopt, ""}};
}

const char* to_string(Category c) {
  switch (c) {
    case Category::DoorClosed: return "door-closed";
    case Category::TakenFailure: return "opportunity-taken-failure";
    case Category::TakenSuccess: return "opportunity-taken-success";
    case Category::Residue: return "residue";
  }
  return "?";
}

Category classify_scenario(const proj::ProjectionResult& r, const std::string& opportunistic_object,
                           const rules::FlawSpec& flaw) {
  if (!r.finished || !r.error.empty()) return Category::Residue;
  const Term picked = Term::compound("end", {Term::compound("pick-up", {Term::sym(opportunistic_object)})});
  bool taken = false;
  for (const Occurrence& o : r.timeline.occurrences())
    if (o.event == picked) taken = true;
  const bool failed = flaw::flaw_occurs(flaw, r.timeline);
  if (!taken) return failed ? Category::Residue : Category::DoorClosed;
  return failed ? Category::TakenFailure : Category::TakenSuccess;
}

}  // namespace hyproj::courier
