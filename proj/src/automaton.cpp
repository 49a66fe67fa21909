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

#include "hyproj/automaton.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>

namespace hyproj::ha {

Point FlowLaw::velocity_at(const Point& p) const {
  if (!target) return Point::Zero();
  const Point d = *target - p;
  const double len = d.norm();
  if (len < 1e-9) return Point::Zero();
  return speed * geom2d::rotated(Point(d / len), rotation);
}

Point state_var_vals(const AutomatonState& s, double t) {
  if (t < s.t0) throw TimeBeforeAnchor(fmt::format("time {} precedes anchor {}", t, s.t0));
  return s.vals0 + (t - s.t0) * s.flow;
}

ModeId sample_successor_mode(const JumpEdge& edge, BitPool& bits) {
  const auto n = static_cast<std::uint32_t>(bits.take(edge.bits)) + 1;
  for (const Successor& s : edge.successors)
    if (s.lo <= n && n <= s.hi) return s.mode;
  return edge.successors.back().mode;
}

ModeId sample_successor_mode(const JumpEdge& edge, Rng& rng) {
  BitPool pool(rng);
  return sample_successor_mode(edge, pool);
}

std::vector<Violation> validate_automaton(const std::vector<JumpEdge>& edges,
                                          std::size_t mode_count) {
  std::vector<Violation> out;
  for (const JumpEdge& e : edges) {
    if (e.bits > 31) {
      out.push_back({e.id, "range denominator exceeds 2^31"});
      continue;
    }
    const std::uint64_t max = std::uint64_t{1} << e.bits;
    if (e.successors.empty()) out.push_back({e.id, "edge has no successor"});
    auto s = e.successors;
    std::sort(s.begin(), s.end(), [](const Successor& a, const Successor& b) { return a.lo < b.lo; });
    std::uint64_t next = 1;
    for (const Successor& r : s) {
      if (r.lo > r.hi) out.push_back({e.id, fmt::format("empty range [{},{}]", r.lo, r.hi)});
      if (r.lo < 1 || r.hi > max)
        out.push_back({e.id, fmt::format("range [{},{}] outside [1,{}]", r.lo, r.hi, max)});
      if (r.lo < next)
        out.push_back({e.id, fmt::format("range [{},{}] overlaps a previous range", r.lo, r.hi)});
      else if (r.lo > next)
        out.push_back({e.id, fmt::format("values {}..{} are not covered", next, r.lo - 1)});
      next = std::max<std::uint64_t>(next, std::uint64_t{r.hi} + 1);
      if (r.mode >= mode_count)
        out.push_back({e.id, fmt::format("successor mode {} does not exist", r.mode)});
    }
    if (!s.empty() && next <= max)
      out.push_back({e.id, fmt::format("values {}..{} are not covered", next, max)});
  }
  return out;
}

DyadicRanges quantize_dyadic(const std::vector<double>& probabilities) {
  constexpr unsigned kBits = 16;
  constexpr double kScale = 1 << kBits;
  DyadicRanges out;
  if (probabilities.empty()) return out;
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("probability must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");
  std::vector<std::int64_t> counts;
  std::int64_t sum = 0;
  for (double p : probabilities) {
    const double scaled = p * kScale;
    const auto c = static_cast<std::int64_t>(std::llround(scaled));
    if (std::abs(scaled - static_cast<double>(c)) > 1e-6) out.rounded = true;
    counts.push_back(c);
    sum += c;
  }
  auto largest = std::max_element(counts.begin(), counts.end());
  *largest += static_cast<std::int64_t>(kScale) - sum;
  unsigned bits = kBits;
  while (bits > 0 && std::all_of(counts.begin(), counts.end(), [](std::int64_t c) { return c % 2 == 0; })) {
    for (auto& c : counts) c /= 2;
    --bits;
  }
  out.bits = bits;
  std::uint32_t next = 1;
  for (std::int64_t c : counts) {
    out.ranges.emplace_back(next, next + static_cast<std::uint32_t>(c) - 1);
    next += static_cast<std::uint32_t>(c);
  }
  return out;
}

double MotionConfig::speed(crp::TravelMode m) const {
  auto it = speeds.find(m);
  return it == speeds.end() ? 0.0 : it->second;
}

bool edge_holds(const EdgeCondition& c, const Point& p, const Point& arrival_normal) {
  switch (c.kind) {
    case EdgeCondition::Kind::Region:
      return geom2d::point_in_region(p, c.region);
    case EdgeCondition::Kind::Arrival:
      if (arrival_normal.isZero()) return true;
      return (p - c.target).dot(arrival_normal) >= 0.0;
    case EdgeCondition::Kind::Interpreter: {
      fluents::Bindings b{{"robot-x", p.x()}, {"robot-y", p.y()}};
      try {
        return fluents::eval_network(c.network, b);
      } catch (const fluents::UnboundInput&) {
        return false;
      }
    }
  }
  return false;
}

double edge_fire_delay(const EdgeCondition& c, const Point& p, const Point& v,
                       const Point& arrival_normal, double max_time) {
  const double speed = v.norm();
  const Point ahead = speed > 0 ? Point(p + v / speed * kLookahead) : p;
  switch (c.kind) {
    case EdgeCondition::Kind::Region: {
      if (geom2d::point_in_region(ahead, c.region)) return 0.0;
      if (speed == 0.0) return -1.0;
      const geom2d::Polyline ray({p, p + v * max_time});
      for (const auto& x : geom2d::path_region_crossings(ray, c.region))
        if (x.kind == geom2d::CrossingKind::Enter && x.arclength > kLookahead)
          return x.arclength / speed;
      return -1.0;
    }
    case EdgeCondition::Kind::Arrival: {
      if (arrival_normal.isZero()) return 0.0;
      const double gap = (c.target - p).dot(arrival_normal);
      if (gap <= 0.0) return 0.0;
      const double rate = v.dot(arrival_normal);
      if (rate <= 0.0) return -1.0;
      const double t = gap / rate;
      return t <= max_time ? t : -1.0;
    }
    case EdgeCondition::Kind::Interpreter:
      return edge_holds(c, p, arrival_normal) ? 0.0 : -1.0;
  }
  return -1.0;
}

namespace {

struct Motion {
  crp::RequestId request;
  Point target;
};

/// Interpreter plus the continuous context the unfolding tracks symbolically.
struct Situation {
  crp::InterpreterState interp;
  crp::TravelMode travel;
  std::optional<Motion> motion;
};

std::optional<Point> motion_target(const crp::PrimitiveAction& a, const Locator& locate) {
  if (const auto* m = std::get_if<crp::MoveTo>(&a)) return m->target;
  std::string where;
  if (const auto* g = std::get_if<crp::GoTo>(&a)) where = g->location;
  if (const auto* l = std::get_if<crp::LowLevelNavPlan>(&a)) where = l->dest;
  if (where.empty() || !locate) return std::nullopt;
  return locate(where);
}

/// Applies primitive requests: navigation-mode switches and non-motion
/// primitives complete at once, motions stay running.
void settle(Situation& s, crp::StepResult r, const Locator& locate) {
  for (int guard = 0; guard < 10000; ++guard) {
    for (crp::RequestId a : r.aborted)
      if (s.motion && s.motion->request == a) s.motion.reset();
    std::vector<crp::RequestId> done;
    for (const auto& req : r.started) {
      if (crp::is_motion(req.action)) {
        auto target = motion_target(req.action, locate);
        if (!target) throw Error("cannot locate the destination of " + crp::to_string(req.action));
        s.motion = Motion{req.id, *target};
        continue;
      }
      if (const auto* m = std::get_if<crp::SetNavigationMode>(&req.action)) s.travel = m->mode;
      done.push_back(req.id);
    }
    if (done.empty()) return;
    crp::StepResult next;
    for (crp::RequestId id : done) {
      crp::StepResult part = s.interp.step(crp::PrimitiveDone{id, true, {}});
      next.aborted.insert(next.aborted.end(), part.aborted.begin(), part.aborted.end());
      next.started.insert(next.started.end(), part.started.begin(), part.started.end());
    }
    r = std::move(next);
  }
  throw Error("primitive requests do not settle");
}

struct EdgePlan {
  EdgeCondition condition;
  std::optional<crp::TaskId> force;   // condition edge
  std::optional<crp::RequestId> done; // completion edge
};

std::vector<EdgePlan> edges_of(const Situation& s, bool symbolic) {
  std::vector<EdgePlan> out;
  for (const crp::BlockedCondition& b : s.interp.blocked_conditions()) {
    EdgePlan e;
    e.condition.label = b.network.output();
    e.condition.network = b.network;
    e.force = b.task;
    if (s.interp.is_positional(b.network)) {
      try {
        e.condition.region = fluents::compile_to_region(b.network, s.interp.options().changes);
        e.condition.kind = EdgeCondition::Kind::Region;
      } catch (const fluents::NotCompilable&) {
        e.condition.kind = EdgeCondition::Kind::Interpreter;
      }
    } else {
      e.condition.kind = EdgeCondition::Kind::Interpreter;
    }
    out.push_back(std::move(e));
  }
  if (s.motion) {
    EdgePlan e;
    e.condition.kind = EdgeCondition::Kind::Arrival;
    e.condition.target = s.motion->target;
    e.condition.label = fmt::format("arrive {} {}", s.motion->target.x(), s.motion->target.y());
    e.done = s.motion->request;
    out.push_back(std::move(e));
  }
  if (!symbolic) {
    for (const crp::RunningPrimitive& p : s.interp.running_primitives()) {
      if (crp::is_motion(p.action)) continue;
      EdgePlan e;
      e.condition.kind = EdgeCondition::Kind::Interpreter;
      e.condition.network = fluents::FluentNetwork("completion@" + p.path, fluents::constant(false));
      e.condition.label = "complete " + crp::to_string(p.action);
      e.done = p.id;
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string mode_key(const Situation& s, std::size_t variant) {
  return fmt::format("{}|{}|{}", s.interp.signature(), crp::to_string(s.travel), variant);
}

}  // namespace

Snapshot build_automaton_from_state(const crp::InterpreterState& interp, const MotionConfig& motion,
                                    const Point& position, crp::TravelMode travel, double now,
                                    const Locator& locate) {
  Situation s{interp, travel, std::nullopt};
  for (const crp::RunningPrimitive& p : interp.running_primitives()) {
    if (!crp::is_motion(p.action)) continue;
    if (auto target = motion_target(p.action, locate)) {
      s.motion = Motion{p.id, *target};
      break;
    }
  }
  FlowLaw law;
  if (s.motion) {
    law.target = s.motion->target;
    law.speed = motion.speed(travel);
  }
  Snapshot snap;
  snap.state.mode = 0;
  snap.state.t0 = now;
  snap.state.now = now;
  snap.state.vals0 = position;
  snap.state.flow = law.velocity_at(position);
  const DyadicRanges q = quantize_dyadic([&] {
    std::vector<double> p;
    for (const auto& r : motion.rotations) p.push_back(r.probability);
    return p;
  }());
  ModeId next = 1;
  for (EdgePlan& e : edges_of(s, false)) {
    JumpEdge je;
    je.id = static_cast<EdgeId>(snap.edges.size());
    je.from = 0;
    je.condition = std::move(e.condition);
    je.bits = q.bits;
    for (const auto& [lo, hi] : q.ranges) je.successors.push_back({next++, lo, hi});
    snap.edges.push_back(std::move(je));
  }
  return snap;
}

HybridAutomaton unfold_automaton(const crp::Plan& plan,
                                 const crp::InterpreterState::Definitions& world_fluents,
                                 const MotionConfig& motion, const Point& start,
                                 crp::TravelMode travel, const UnfoldOptions& options) {
  crp::InterpreterOptions io;
  io.positional = crp::PositionalPolicy::Symbolic;
  Situation root{crp::InterpreterState(plan, world_fluents, io), travel, std::nullopt};
  settle(root, root.interp.step(crp::Wakeup{}), {});

  std::vector<double> probs;
  for (const auto& r : motion.rotations) probs.push_back(r.probability);
  const DyadicRanges q = quantize_dyadic(probs);

  HybridAutomaton a;
  struct Pending {
    ModeId id;
    Situation s;
    Point reference;  // nominal entry position
  };
  std::deque<Pending> work;

  auto add_mode = [&](const Situation& s, std::size_t variant, ModeId parent, const Point& reference) {
    ControlMode m;
    m.id = static_cast<ModeId>(a.modes.size());
    m.key = mode_key(s, variant);
    m.travel = s.travel;
    m.parent = parent;
    if (s.motion) {
      m.law.target = s.motion->target;
      m.law.speed = motion.speed(s.travel);
      m.law.rotation = motion.rotations[variant].radians;
    }
    m.flow = m.law.velocity_at(reference);
    a.modes.push_back(std::move(m));
    return a.modes.back().id;
  };

  a.root = add_mode(root, 0, kNoMode, start);
  a.modes[a.root].initial_values = start;
  work.push_back({a.root, std::move(root), start});

  while (!work.empty()) {
    Pending cur = std::move(work.front());
    work.pop_front();
    const Point v = a.modes[cur.id].law.velocity_at(cur.reference);
    const Point normal = a.modes[cur.id].law.target
                             ? Point((*a.modes[cur.id].law.target - cur.reference).normalized())
                             : Point::Zero();
    for (EdgePlan& plan_edge : edges_of(cur.s, true)) {
      if (a.modes.size() + motion.rotations.size() > options.max_modes) {
        a.truncated = true;
        break;
      }
      Situation next = cur.s;
      if (plan_edge.force) {
        settle(next, next.interp.step(crp::ForceCondition{*plan_edge.force}), {});
      } else {
        if (next.motion && next.motion->request == *plan_edge.done) next.motion.reset();
        settle(next, next.interp.step(crp::PrimitiveDone{*plan_edge.done, true, {}}), {});
      }
      // nominal entry position of the successor, for reference flows only
      Point reference = cur.reference;
      const double delay = edge_fire_delay(plan_edge.condition, cur.reference, v, normal, 1e6);
      if (delay > 0) reference = cur.reference + delay * v;
      if (plan_edge.done) reference = plan_edge.condition.target;

      JumpEdge je;
      je.id = static_cast<EdgeId>(a.edges.size());
      je.from = cur.id;
      je.condition = std::move(plan_edge.condition);
      if (next.motion) {
        je.bits = q.bits;
        for (std::size_t k = 0; k < q.ranges.size(); ++k) {
          const ModeId m = add_mode(next, k, cur.id, reference);
          je.successors.push_back({m, q.ranges[k].first, q.ranges[k].second});
          work.push_back({m, next, reference});
        }
      } else {
        je.bits = 0;
        const ModeId m = add_mode(next, 0, cur.id, reference);
        je.successors.push_back({m, 1, 1});
        work.push_back({m, std::move(next), reference});
      }
      a.modes[cur.id].edges.push_back(je.id);
      a.edges.push_back(std::move(je));
    }
  }
  return a;
}

bool is_path(const HybridAutomaton& a, const std::vector<ModeId>& modes, bool to_leaf) {
  if (modes.empty() || modes.front() != a.root) return false;
  for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
    if (modes[i] >= a.modes.size()) return false;
    bool found = false;
    for (EdgeId e : a.modes[modes[i]].edges)
      for (const Successor& s : a.edges[e].successors)
        found = found || s.mode == modes[i + 1];
    if (!found) return false;
  }
  return !to_leaf || (modes.back() < a.modes.size() && a.is_leaf(modes.back()));
}

namespace {

bool match_keys(const HybridAutomaton& a, const std::vector<std::string>& keys, std::size_t i, bool to_leaf,
                std::vector<ModeId>& path) {
  const ModeId cur = path.back();
  if (i + 1 == keys.size()) return !to_leaf || a.is_leaf(cur);
  for (EdgeId e : a.modes[cur].edges)
    for (const Successor& s : a.edges[e].successors) {
      if (a.modes[s.mode].key != keys[i + 1]) continue;
      path.push_back(s.mode);
      if (match_keys(a, keys, i + 1, to_leaf, path)) return true;
      path.pop_back();
    }
  return false;
}

}  // namespace

std::optional<std::vector<ModeId>> path_for_keys(const HybridAutomaton& a, const std::vector<std::string>& keys,
                                                 bool to_leaf) {
  if (keys.empty() || a.modes.empty() || a.modes[a.root].key != keys.front()) return std::nullopt;
  std::vector<ModeId> path{a.root};
  if (!match_keys(a, keys, 0, to_leaf, path)) return std::nullopt;
  return path;
}

}  // namespace hyproj::ha
