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

#include "hyproj/automaton_projector.hpp"

namespace hyproj::ha {

namespace {

Point arrival_normal(const ControlMode& m, const Point& p) {
  if (!m.law.target) return Point::Zero();
  const Point d = *m.law.target - p;
  return d.norm() < 1e-9 ? Point::Zero() : Point(d.normalized());
}

}  // namespace

ExactRun project_exact(const HybridAutomaton& a, double horizon, Rng& rng) {
  ExactRun run;
  BitPool bits(rng);
  AutomatonState& s = run.state;
  s.mode = a.root;
  s.vals0 = a.modes[a.root].initial_values.value_or(Point::Zero());
  s.flow = a.modes[a.root].law.velocity_at(s.vals0);
  Point normal = arrival_normal(a.modes[a.root], s.vals0);
  run.modes.push_back(s.mode);
  while (!a.is_leaf(s.mode)) {
    double best = -1.0;
    const JumpEdge* winner = nullptr;
    for (EdgeId e : a.modes[s.mode].edges) {
      const double d = edge_fire_delay(a.edges[e].condition, s.vals0, s.flow, normal, horizon - s.t0);
      if (d >= 0.0 && (winner == nullptr || d < best)) {
        best = d;
        winner = &a.edges[e];
      }
    }
    if (!winner) {
      run.horizon_exceeded = s.flow.norm() > 0.0;
      break;
    }
    const double t = s.t0 + best;
    if (t > horizon) {
      run.horizon_exceeded = true;
      break;
    }
    const Point p = state_var_vals(s, t);
    s.mode = sample_successor_mode(*winner, bits);
    s.t0 = t;
    s.vals0 = p;
    s.flow = a.modes[s.mode].law.velocity_at(p);
    normal = arrival_normal(a.modes[s.mode], p);
    run.modes.push_back(s.mode);
    run.jump_times.push_back(t);
  }
  s.now = s.t0;
  return run;
}

}  // namespace hyproj::ha
