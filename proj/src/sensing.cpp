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

#include "hyproj/sensing.hpp"

#include <limits>

namespace hyproj::proj {

SensingOutcome look_for(const Term& description, const std::string& camera,
                        const std::vector<VisibleObject>& objects, const Point& robot,
                        const world::World& w, Rng& rng) {
  const world::SensorModel model = w.sensor(camera);
  const Term action = Term::compound("look-for", {description, Term::sym(camera)});
  SensingOutcome out;
  out.events.emplace_back(0.0, Term::compound("begin", {action}));
  std::vector<Term> seen;
  for (const VisibleObject& o : objects) {
    if (geom2d::distance(o.position, robot) > model.range) continue;
    if (!bernoulli(rng, model.detection)) continue;
    const std::string color = bernoulli(rng, model.false_positive) ? "unknown" : o.color;
    const Term designator = Term::compound("letter", {Term::sym(o.id), Term::sym(color)});
    Bindings b;
    if (!match(description, designator, b)) continue;
    seen.push_back(designator);
    out.events.emplace_back(w.look_time, Term::compound("obj-seen", {Term::sym(o.id), Term::sym(color)}));
  }
  out.events.emplace_back(w.look_time, Term::compound("end", {action}));
  out.fluents.emplace_back("obs-pos-x", robot.x());
  out.fluents.emplace_back("obs-pos-y", robot.y());
  out.fluents.emplace_back("objects-seen", static_cast<double>(seen.size()));
  out.pulses.push_back("visual-inputs");
  out.value = Term::compound("designators", std::move(seen));
  return out;
}

SensingOutcome estimate_door_angle(const Point& robot, const world::World& w,
                                   const world::WorldSample& sample, Rng& rng) {
  const world::SensorModel laser = w.sensor("laser");
  const Term action = Term::sym("estimate-door-angle");
  SensingOutcome out;
  out.events.emplace_back(0.0, Term::compound("begin", {action}));
  const world::Room* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const world::Room& r : w.rooms) {
    const double d = geom2d::distance(r.door, robot);
    if (d <= laser.range && d < best_d) {
      best = &r;
      best_d = d;
    }
  }
  if (!best) {
    out.success = false;
    out.failure = "no door in range";
    out.events.emplace_back(w.door_scan_time, Term::compound("end", {action}));
    return out;
  }
  auto it = sample.door_open.find(best->name);
  const bool open = it == sample.door_open.end() || it->second;
  const double angle = (open ? w.open_door_angle : 0.0) + uniform(rng, -laser.noise, laser.noise);
  const bool seen_open = angle > w.door_angle_threshold;
  out.events.emplace_back(w.door_scan_time,
                          Term::compound("door-angle-estimated",
                                         {Term::sym(best->name), Term::num(angle)}));
  out.events.emplace_back(w.door_scan_time, Term::compound("end", {action}));
  out.fluents.emplace_back("door-angle", angle);
  out.fluents.emplace_back("door-open-" + best->name, seen_open);
  out.value = Term::num(angle);
  return out;
}

SensingOutcome possible_bump(const std::string& obstacle, bool sonar_on) {
  SensingOutcome out;
  if (sonar_on) {
    out.success = false;
    out.failure = "path blocked";
    out.events.emplace_back(0.0, Term::compound("path-blocked", {Term::sym(obstacle)}));
  } else {
    out.events.emplace_back(0.0, Term::compound("bump", {Term::sym(obstacle)}));
  }
  return out;
}

}  // namespace hyproj::proj
