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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyproj/fluents.hpp"
#include "hyproj/geom2d.hpp"
#include "hyproj/interpreter.hpp"
#include "hyproj/plan.hpp"
#include "hyproj/random.hpp"

namespace hyproj::ha {

using geom2d::Point;
using ModeId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr ModeId kNoMode = ~ModeId{0};

class TimeBeforeAnchor : public Error {
 public:
  using Error::Error;
};

/// Velocity law of a mode: head for `target` at `speed`, rotated by
/// `rotation` radians. Re-evaluated from the actual position at every jump.
struct FlowLaw {
  std::optional<Point> target;
  double speed = 0.0;
  double rotation = 0.0;

  Point velocity_at(const Point& p) const;
};

struct ControlMode {
  ModeId id = kNoMode;
  std::string key;
  std::optional<Point> initial_values;
  Point flow{0, 0};  // nominal velocity at the mode's reference position
  crp::TravelMode travel = crp::TravelMode::Office;
  FlowLaw law;
  ModeId parent = kNoMode;
  std::vector<EdgeId> edges;
};

struct EdgeCondition {
  enum class Kind {
    Region,       // compiled positional fluent network
    Arrival,      // crossing the plane through `target` normal to the entry heading
    Interpreter,  // evaluated by the plan interpreter (non-positional)
  };
  Kind kind = Kind::Region;
  geom2d::Region region;
  Point target{0, 0};
  fluents::FluentNetwork network;
  std::string label;
};

struct Successor {
  ModeId mode = kNoMode;
  std::uint32_t lo = 1;  // inclusive range within [1, 2^bits]
  std::uint32_t hi = 1;
};

struct JumpEdge {
  EdgeId id = 0;
  ModeId from = kNoMode;
  EdgeCondition condition;
  std::vector<Successor> successors;
  unsigned bits = 0;  // range denominator is 2^bits
};

struct HybridAutomaton {
  std::vector<ControlMode> modes;
  std::vector<JumpEdge> edges;
  ModeId root = 0;
  bool truncated = false;

  bool is_leaf(ModeId m) const { return modes[m].edges.empty(); }
};

struct AutomatonState {
  ModeId mode = 0;
  double t0 = 0.0;
  Point vals0{0, 0};
  Point flow{0, 0};
  double now = 0.0;
};

/// vals0 + (t - t0) * flow. Throws TimeBeforeAnchor for t < t0.
Point state_var_vals(const AutomatonState& s, double t);

/// Draws n uniform on [1, 2^bits] from the bit pool and returns the successor
/// whose range contains it.
ModeId sample_successor_mode(const JumpEdge& edge, BitPool& bits);
ModeId sample_successor_mode(const JumpEdge& edge, Rng& rng);

struct Violation {
  EdgeId edge;
  std::string what;
};

/// Range partition, dyadic bounds and successor existence. Empty means ok.
std::vector<Violation> validate_automaton(const std::vector<JumpEdge>& edges, std::size_t mode_count);

/// Probabilities quantized to integer ranges over 2^bits (bits <= 16).
struct DyadicRanges {
  unsigned bits = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;
  bool rounded = false;  // true if some input was not exactly dyadic
};

DyadicRanges quantize_dyadic(const std::vector<double>& probabilities);

struct RotationOutcome {
  double radians;
  double probability;
};

/// Per-world motion parameters used to derive flows.
struct MotionConfig {
  std::map<crp::TravelMode, double> speeds{
      {crp::TravelMode::Office, 30.0},
      {crp::TravelMode::Doorway, 20.0},
      {crp::TravelMode::Hallway, 80.0},
  };
  std::vector<RotationOutcome> rotations{{0.0, 1.0}};

  double speed(crp::TravelMode m) const;
};

/// Where a named location is, for go-to style primitives.
using Locator = std::function<std::optional<Point>(const std::string&)>;

struct Snapshot {
  AutomatonState state;
  std::vector<JumpEdge> edges;
};

/// One edge per blocked wait-for/whenever condition and one per running
/// primitive; successor modes are numbered 1.. in edge order (root is 0).
Snapshot build_automaton_from_state(const crp::InterpreterState& interp, const MotionConfig& motion,
                                    const Point& position, crp::TravelMode travel, double now = 0.0,
                                    const Locator& locate = {});

struct UnfoldOptions {
  std::size_t max_modes = 20000;
};

/// Unfolds the plan into its tree of control modes by satisfying one jump
/// condition at a time, starting at `start` in travel mode `travel`.
HybridAutomaton unfold_automaton(const crp::Plan& plan,
                                 const crp::InterpreterState::Definitions& world_fluents,
                                 const MotionConfig& motion, const Point& start,
                                 crp::TravelMode travel, const UnfoldOptions& options = {});

/// True if `modes` starts at the root and follows edges; `to_leaf` also
/// requires it to end in a leaf.
bool is_path(const HybridAutomaton& a, const std::vector<ModeId>& modes, bool to_leaf);

/// A path from the root whose mode keys are `keys`, if one exists. Keys
/// repeat across branches, so the match follows edges.
std::optional<std::vector<ModeId>> path_for_keys(const HybridAutomaton& a, const std::vector<std::string>& keys,
                                                 bool to_leaf);

/// Lookahead used to decide whether a condition holds just after an instant.
inline constexpr double kLookahead = 1e-5;

/// Time from now until `edge` fires for a robot at `p` moving with `v`, given
/// the arrival normal fixed at mode entry; negative if never (within max_time).
double edge_fire_delay(const EdgeCondition& c, const Point& p, const Point& v,
                       const Point& arrival_normal, double max_time);

/// True if the edge condition holds at `p`.
bool edge_holds(const EdgeCondition& c, const Point& p, const Point& arrival_normal);

}  // namespace hyproj::ha
