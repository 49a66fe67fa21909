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
#include <string>
#include <vector>

#include "hyproj/automaton.hpp"
#include "hyproj/rules.hpp"
#include "hyproj/timeline.hpp"

namespace hyproj::ref {

/// Discretization of the clock-tick projector.
struct RefConfig {
  double dt_clock = 0.25;
  double tau_jump = 0.08345;
  double horizon = 60.0;
  std::uint64_t seed = 0;
  /// Record clock-tick occurrences and now(t) occasions. Turning this off
  /// changes no sampled quantity; it only keeps long sweeps cheap.
  bool record_ticks = true;
};

struct RefParameters {
  double tau_jump;
  double dt_clock;
  std::string warning;  // set when the bound is too weak to be useful
};

/// tau = delta / (2 ln(1/epsilon)), dt = delta / 2. Throws DomainError
/// unless 0 < epsilon < 1 and delta > 0.
RefParameters choose_ref_parameters(double epsilon, double delta);

struct RefResult {
  Timeline timeline;
  std::vector<ha::ModeId> modes;   // visited modes, root first
  std::vector<double> jump_times;  // one per jump
  bool horizon_exceeded = false;   // the horizon came before a leaf mode
  ha::AutomatonState state;        // final state
  /// Jumps taken along an edge whose condition started holding later than
  /// that of another edge of the same mode.
  std::size_t anomalies = 0;
};

/// Projects the automaton with clock ticks every dt_clock. At each tick every
/// edge whose condition holds draws an exponential delay with mean tau_jump
/// and the earliest delay shorter than dt_clock jumps; exogenous rules are
/// sampled per tick window.
RefResult project_clock_tick(const ha::HybridAutomaton& a, const rules::RuleSet& rules,
                             const RefConfig& cfg);

}  // namespace hyproj::ref
