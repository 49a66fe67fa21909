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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyproj/interpreter.hpp"
#include "hyproj/plan.hpp"
#include "hyproj/rules.hpp"
#include "hyproj/schedule.hpp"
#include "hyproj/timeline.hpp"
#include "hyproj/world.hpp"

namespace hyproj::proj {

struct ProjectionOptions {
  std::uint64_t seed = 0;
  double horizon = 3600.0;
  std::size_t max_events = 100000;
};

/// Continuous and control state at one occurrence.
struct EventRecord {
  Point position{0, 0};
  crp::TravelMode travel = crp::TravelMode::Office;
  std::string mode_key;
};

struct ProjectionResult {
  Timeline timeline;
  std::vector<EventRecord> records;    // one per occurrence
  std::vector<std::string> mode_keys;  // control mode at the start and after each jump
  std::size_t reschedules = 0;
  bool finished = false;               // the plan completed
  bool horizon_exceeded = false;
  std::string error;                   // deadlock or another projection error
  std::vector<std::string> failures;   // primitive failures, in order
  Point final_position{0, 0};
  crp::TravelMode final_travel = crp::TravelMode::Office;
  world::WorldSample world;            // the sampled initial world
  bool ok() const { return error.empty() && !horizon_exceeded; }
};

/// Projects one execution scenario: samples the world from the beliefs at a
/// start event, then repeatedly takes the earliest of the next scheduled
/// navigation event, persist expiry, timed primitive event or predicted
/// exogenous event, applies the effect rules, steps the interpreter and
/// reschedules navigation when the set of positional triggers changes.
ProjectionResult project_plan(const crp::Plan& plan, const world::World& w, const world::Beliefs& beliefs,
                              const rules::RuleSet& rules, const ProjectionOptions& options);

/// Earliest exogenous occurrence in (t_last, t_next) over the rules enabled
/// now (or by `enabled`), or nothing. Each enabled instance occurs with the
/// Poisson probability of at least one event in the window; its date is the
/// first of the sampled arrivals. Rules with a spacing at or below
/// `min_spacing` are skipped.
std::optional<Occurrence> predict_next_exogenous(const Timeline& tl, const rules::RuleSet& rules,
                                                 double t_last, double t_next,
                                                 const rules::ConditionEvaluator& enabled, Rng& rng,
                                                 double min_spacing = 0.0);

/// Mode key of a control situation, as used by the automaton unfolding.
std::string mode_key(const crp::InterpreterState& interp, crp::TravelMode travel, std::size_t variant);

}  // namespace hyproj::proj
