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

#include <vector>

#include "hyproj/automaton.hpp"
#include "hyproj/random.hpp"

namespace hyproj::ha {

struct ExactRun {
  std::vector<ModeId> modes;
  std::vector<double> jump_times;
  bool horizon_exceeded = false;
  AutomatonState state;
};

/// Follows the automaton with exact jump times: at each mode entry the
/// earliest firing edge (ties in edge order) jumps. Stops at a leaf, when no
/// edge can fire, or at the horizon.
ExactRun project_exact(const HybridAutomaton& a, double horizon, Rng& rng);

}  // namespace hyproj::ha
