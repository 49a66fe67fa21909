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

#include "hyproj/schedule.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hyproj::proj {

namespace {

constexpr double kMergeTolerance = 1e-6;  // cm
constexpr double kStartSkip = 1e-6;       // cm

struct Mark {
  double s;
  std::vector<Term> events;
};

Term sym(const std::string& s) { return Term::sym(s); }

crp::TravelMode mode_at(const ScheduleInput& in, const Point& p) {
  for (const world::ModeRegion& m : in.mode_regions)
    if (geom2d::point_in_region(p, m.region)) return m.mode;
  return in.initial_mode;
}

bool on_boundary(const geom2d::AxisRect& r, const Point& p) {
  const double tol = 1e-6;
  const bool in_x = p.x() >= r.xmin - tol && p.x() <= r.xmax + tol;
  const bool in_y = p.y() >= r.ymin - tol && p.y() <= r.ymax + tol;
  return (in_x && in_y) && (std::abs(p.x() - r.xmin) < tol || std::abs(p.x() - r.xmax) < tol ||
                            std::abs(p.y() - r.ymin) < tol || std::abs(p.y() - r.ymax) < tol);
}

const char* kind_name(geom2d::CrossingKind k) {
  return k == geom2d::CrossingKind::Enter ? "enter" : "exit";
}

}  // namespace

double Schedule::duration() const {
  double t = 0.0;
  for (const ScheduleEntry& e : entries) t += e.dt;
  return t;
}

Schedule schedule_endogenous_events(const ScheduleInput& in) {
  const geom2d::Polyline& path = in.path;
  std::vector<Mark> marks;
  auto add = [&](double s, Term ev) { marks.push_back({s, {std::move(ev)}}); };

  // Boundaries of mode regions only split the path; the events come from
  // comparing the prevailing modes on either side.
  std::vector<double> splits;
  for (const world::ModeRegion& m : in.mode_regions)
    for (const auto& c : geom2d::path_region_crossings(path, m.region))
      if (c.arclength > kStartSkip) splits.push_back(c.arclength);

  for (const Trigger& t : in.triggers) {
    for (const auto& c : geom2d::path_region_crossings(path, t.region)) {
      if (c.arclength <= kStartSkip) continue;
      add(c.arclength, Term::compound("passive-sensor-update", {sym(t.fluent), sym(kind_name(c.kind))}));
      for (const geom2d::Region& f : in.door_fronts) {
        const auto* r = std::get_if<geom2d::AxisRect>(&f.node);
        if (!r || !on_boundary(*r, c.point)) continue;
        const Point probe = path.point_at(std::min(path.length(), c.arclength + kMergeTolerance));
        const bool inside_after = geom2d::point_in_region(probe, f);
        if (inside_after != (c.kind == geom2d::CrossingKind::Enter)) continue;
        Term ev = Term::compound(inside_after ? "start-passing-door" : "stop-passing-door", {sym(r->label)});
        // Several triggers may share this boundary point.
        const bool dup = std::any_of(marks.begin(), marks.end(), [&](const Mark& m) {
          return std::abs(m.s - c.arclength) <= kMergeTolerance && m.events.front() == ev;
        });
        if (!dup) add(c.arclength, std::move(ev));
      }
    }
  }
  for (const geom2d::Region& r : in.rooms)
    for (const auto& c : geom2d::path_region_crossings(path, r))
      if (c.arclength > kStartSkip)
        add(c.arclength, Term::compound(c.kind == geom2d::CrossingKind::Enter ? "enter-room" : "leave-room",
                                        {sym(c.label)}));
  for (const geom2d::Region& r : in.obstacles)
    for (const auto& c : geom2d::path_region_crossings(path, r))
      if (c.arclength > kStartSkip && c.kind == geom2d::CrossingKind::Enter)
        add(c.arclength, Term::compound("possible-bump", {sym(c.label)}));
  for (std::size_t i = 1; i + 1 < path.vertices().size(); ++i)
    add(path.arclength_at_vertex(i),
        Term::compound("nav-event", {Term::compound("waypoint", {Term::num(in.first_waypoint + i - 1)})}));
  add(path.length(), Term::compound("nav-event", {sym("destination-reached")}));

  // Piece boundaries: every mark and split, merged within tolerance.
  std::vector<double> cuts{0.0};
  for (const Mark& m : marks) cuts.push_back(m.s);
  cuts.insert(cuts.end(), splits.begin(), splits.end());
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> uniq;
  for (double s : cuts)
    if (uniq.empty() || s - uniq.back() > kMergeTolerance) uniq.push_back(std::min(s, path.length()));
  if (uniq.back() < path.length() - kMergeTolerance) uniq.push_back(path.length());

  auto snap = [&](double s) {
    auto it = std::lower_bound(uniq.begin(), uniq.end(), s - kMergeTolerance);
    return static_cast<std::size_t>(it - uniq.begin());
  };
  std::vector<std::vector<Term>> at(uniq.size());
  std::stable_sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) { return a.s < b.s; });
  for (Mark& m : marks) {
    auto& bucket = at[snap(m.s)];
    for (Term& e : m.events) bucket.push_back(std::move(e));
  }

  Schedule out;
  out.initial_mode = in.initial_mode;
  crp::TravelMode prev = in.initial_mode;
  double pending_dt = 0.0;
  for (std::size_t k = 0; k < uniq.size(); ++k) {
    std::vector<Term> events;
    crp::TravelMode next = prev;
    if (k + 1 < uniq.size()) {
      next = in.mode_regions.empty() ? in.initial_mode
                                     : mode_at(in, path.point_at(0.5 * (uniq[k] + uniq[k + 1])));
      if (next != prev)
        events.push_back(Term::compound(
            "nav-event", {Term::compound("set-travel-mode", {sym(crp::to_string(next))})}));
    }
    for (Term& e : at[k]) events.push_back(std::move(e));
    if (!events.empty()) {
      out.entries.push_back({pending_dt, path.point_at(uniq[k]), uniq[k], std::move(events), next});
      pending_dt = 0.0;
    }
    if (k + 1 < uniq.size()) {
      const double speed = in.motion.speed(next);
      if (!(speed > 0.0))
        throw ZeroSpeedMode(fmt::format("travel mode {} has no positive speed", crp::to_string(next)));
      pending_dt += (uniq[k + 1] - uniq[k]) / speed;
    }
    prev = next;
  }
  return out;
}

double NavState::entry_time(std::size_t i) const {
  double t = start_time;
  for (std::size_t k = 0; k <= i && k < schedule.entries.size(); ++k) t += schedule.entries[k].dt;
  return t;
}

namespace {

/// Index of the entry ending the piece that contains time t, and that
/// piece's start time.
std::pair<std::size_t, double> piece_at(const NavState& nav, double t) {
  double t0 = nav.start_time;
  for (std::size_t i = 0; i < nav.schedule.entries.size(); ++i) {
    const double t1 = t0 + nav.schedule.entries[i].dt;
    if (t < t1) return {i, t0};
    t0 = t1;
  }
  return {nav.schedule.entries.size(), t0};
}

}  // namespace

double NavState::arclength_at(double t) const {
  const auto [i, t0] = piece_at(*this, t);
  if (i >= schedule.entries.size()) return input.path.length();
  const ScheduleEntry& e = schedule.entries[i];
  const double s0 = i == 0 ? 0.0 : schedule.entries[i - 1].arclength;
  if (e.dt <= 0.0) return e.arclength;
  return s0 + (e.arclength - s0) * std::clamp((t - t0) / e.dt, 0.0, 1.0);
}

Point NavState::position_at(double t) const { return input.path.point_at(arclength_at(t)); }

crp::TravelMode NavState::mode_at(double t) const {
  const auto [i, t0] = piece_at(*this, t);
  if (i == 0) return schedule.initial_mode;
  return schedule.entries[i - 1].mode;
}

Point NavState::velocity_at(double t) const {
  const auto [i, t0] = piece_at(*this, t);
  if (i >= schedule.entries.size()) return Point::Zero();
  const ScheduleEntry& e = schedule.entries[i];
  const double s0 = i == 0 ? 0.0 : schedule.entries[i - 1].arclength;
  if (e.dt <= 0.0 || e.arclength <= s0) return Point::Zero();
  const double s = arclength_at(t);
  const std::size_t seg = input.path.segment_at(std::min(s, input.path.length() - 1e-9));
  const Point dir = (input.path.vertices()[seg + 1] - input.path.vertices()[seg]).normalized();
  return dir * ((e.arclength - s0) / e.dt);
}

namespace {

std::vector<Trigger> compile(const std::vector<fluents::FluentNetwork>& nets,
                             const fluents::ChangesModel& changes) {
  std::vector<Trigger> out;
  for (const fluents::FluentNetwork& n : nets) out.push_back({fluents::compile_to_region(n, changes), n.output()});
  return out;
}

}  // namespace

NavState start_navigation(std::string id, ScheduleInput input, std::vector<fluents::FluentNetwork> networks,
                          double t, const fluents::ChangesModel& changes) {
  NavState nav;
  nav.id = std::move(id);
  input.triggers = compile(networks, changes);
  nav.input = std::move(input);
  nav.networks = std::move(networks);
  nav.schedule = schedule_endogenous_events(nav.input);
  nav.start_time = t;
  return nav;
}

NavState reschedule_on_new_trigger(const NavState& nav, std::vector<fluents::FluentNetwork> networks, double t,
                                   const fluents::ChangesModel& changes) {
  std::vector<Trigger> triggers = compile(networks, changes);
  const double s = nav.arclength_at(t);
  NavState out = nav;
  out.networks = std::move(networks);
  out.input.triggers = std::move(triggers);
  const geom2d::Polyline& path = nav.input.path;
  const auto& v = path.vertices();
  std::vector<Point> rest{path.point_at(std::min(s, path.length()))};
  std::size_t first_kept = v.size() - 1;
  for (std::size_t i = v.size() - 1; i >= 1; --i)
    if (path.arclength_at_vertex(i) > s + kMergeTolerance) first_kept = i;
  for (std::size_t i = first_kept; i < v.size(); ++i)
    if (geom2d::distance(v[i], rest.back()) > kMergeTolerance) rest.push_back(v[i]);
  if (rest.size() < 2) {
    // At the endpoint: keep a vanishing last piece so the arrival still occurs.
    rest.front() = path.point_at(std::max(0.0, path.length() - 2 * kMergeTolerance));
    rest.push_back(v.back());
  }
  out.input.first_waypoint = nav.input.first_waypoint + first_kept - 1;
  out.input.path = geom2d::Polyline(std::move(rest));
  out.input.initial_mode = nav.mode_at(t);
  out.schedule = schedule_endogenous_events(out.input);
  out.start_time = t;
  out.next = 0;
  return out;
}

}  // namespace hyproj::proj
