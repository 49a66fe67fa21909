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
#include <vector>

#include "hyproj/fluents.hpp"
#include "hyproj/random.hpp"
#include "hyproj/term.hpp"
#include "hyproj/world.hpp"

namespace hyproj::proj {

using geom2d::Point;

/// What a sensing action does to the projection: dated events relative to
/// its start, fluent settings and pulses applied with the last event, and
/// the result signalled to the plan.
struct SensingOutcome {
  std::vector<std::pair<double, Term>> events;
  std::vector<std::pair<std::string, fluents::Value>> fluents;
  std::vector<std::string> pulses;
  bool success = true;
  std::string failure;
  Term value = Term::sym("nil");
};

/// An object the robot could see: id, true feature and position.
struct VisibleObject {
  std::string id;
  std::string color;
  Point position{0, 0};
};

/// Looks for objects matching `description`, a pattern over
/// (letter ID COLOR). Each object is detected with the camera's detection
/// probability; a detected object's color is misperceived as "unknown" with
/// its false-positive probability.
SensingOutcome look_for(const Term& description, const std::string& camera,
                        const std::vector<VisibleObject>& objects, const Point& robot,
                        const world::World& w, Rng& rng);

/// Estimates the opening angle of the nearest door within the laser's range:
/// the true angle plus uniform noise, classified open above the world's
/// threshold. Sets door-open-ROOM and door-angle.
SensingOutcome estimate_door_angle(const Point& robot, const world::World& w,
                                   const world::WorldSample& sample, Rng& rng);

/// A told-about obstacle on the path: with the sonar off the robot bumps
/// into it, with the sonar on the navigation plan fails with "path blocked".
SensingOutcome possible_bump(const std::string& obstacle, bool sonar_on);

}  // namespace hyproj::proj
