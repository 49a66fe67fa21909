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

#include "hyproj/projector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hyproj/sensing.hpp"

namespace hyproj::proj {

std::optional<Occurrence> predict_next_exogenous(const Timeline& tl, const rules::RuleSet& rules,
                                                 double t_last, double t_next,
                                                 const rules::ConditionEvaluator& enabled, Rng& rng,
                                                 double min_spacing) {
  if (!(t_last < t_next)) return std::nullopt;
  const double window = t_next - t_last;
  std::optional<Occurrence> best;
  for (const rules::ExoRule& r : rules.exogenous) {
    if (r.tau <= min_spacing) continue;
    const auto instances = enabled ? enabled(r.condition) : rules::solve(tl, r.condition);
    std::set<std::string> seen;
    for (const Bindings& b : instances) {
      Term ev = substitute(r.event, b);
      if (!seen.insert(ev.str()).second) continue;
      const std::uint64_t n = poisson(rng, window / r.tau);
      if (n == 0) continue;
      // First of n uniform arrivals; expm1 keeps it off t_last when n is huge.
      double date = t_last - window * std::expm1(std::log(uniform01(rng)) / static_cast<double>(n));
      if (date <= t_last) date = std::nextafter(t_last, t_next);
      if (date >= t_next) continue;
      if (!best || date < best->date) best = Occurrence{std::move(ev), date, EventClass::Physical, {}, {}};
    }
  }
  return best;
}

std::string mode_key(const crp::InterpreterState& interp, crp::TravelMode travel, std::size_t variant) {
  return fmt::format("{}|{}|{}", interp.signature(), crp::to_string(travel), variant);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Term sym(const std::string& s) { return Term::sym(s); }

void collect_inputs(const fluents::GatePtr& g, std::set<std::string>& out) {
  if (!g) return;
  if (g->kind == fluents::GateKind::Input) out.insert(g->input);
  for (const auto& c : g->children) collect_inputs(c, out);
}

void collect_inputs(const crp::NodePtr& n, std::set<std::string>& out, std::set<std::string>& local) {
  if (!n) return;
  collect_inputs(n->condition, out);
  if (n->guard) collect_inputs(n->guard->network, out);
  for (const auto& [name, g] : n->defs) {
    local.insert(name);
    collect_inputs(g, out);
  }
  for (const auto& c : n->children) collect_inputs(c, out, local);
}

struct Completion {
  crp::RequestId id;
  bool success = true;
  std::string failure;
  std::vector<std::pair<std::string, fluents::Value>> fluents;
  std::vector<std::string> pulses;
};

struct Timed {
  double date;
  EventClass cls;
  std::uint64_t seq;
  Term event;
  crp::RequestId request;
  std::optional<Completion> done;
};

struct ActiveNav {
  NavState state;
  crp::RequestId request;
  Term action;  // (low-level-nav-plan DEST ID)
  Term dest;
  bool move_to = false;
  Point target{0, 0};
  std::size_t segment = 0;
};

class Projection {
 public:
  Projection(const crp::Plan& plan, const world::World& w, const world::Beliefs& beliefs,
             const rules::RuleSet& rules, const ProjectionOptions& options)
      : w_(w),
        beliefs_(beliefs),
        rules_(rules),
        options_(options),
        rng_(options.seed),
        bits_(rng_),
        interp_(plan, w.fluent_definitions()),
        travel_(w.start_mode),
        rest_(w.start) {
    std::vector<double> probs;
    for (const auto& r : w.motion.rotations) probs.push_back(r.probability);
    rotation_bits_ = ha::quantize_dyadic(probs);
  }

  ProjectionResult run() {
    try {
      start();
      loop();
    } catch (const crp::DeadlockDetected& e) {
      out_.error = std::string("deadlock: ") + e.what();
    } catch (const Error& e) {
      out_.error = e.what();
    }
    out_.final_position = position();
    out_.final_travel = travel_;
    out_.failures.clear();
    for (const auto& [id, why] : interp_.failures()) out_.failures.push_back(why);
    return std::move(out_);
  }

 private:
  // ---- bookkeeping ----------------------------------------------------

  Point position() const { return nav_ ? nav_->state.position_at(now_) : rest_; }

  /// Position as the sensors read it just after now.
  Point measured() const {
    if (!nav_) return rest_;
    const Point v = nav_->state.velocity_at(now_);
    const double speed = v.norm();
    return speed > 0 ? Point(position() + v / speed * ha::kLookahead) : position();
  }

  std::size_t occur(Term ev, double date, EventClass cls) {
    Timeline& tl = out_.timeline;
    if (tl.occurrences().size() >= options_.max_events)
      throw Error(fmt::format("projection exceeded {} events", options_.max_events));
    const std::size_t i = tl.add_occurrence(std::move(ev), date, cls);
    now_ = date;
    rules::apply_effect_rules(tl, i, rules_, rng_);
    out_.records.push_back({position(), travel_, mode_key(interp_, travel_, variant_)});
    return i;
  }

  void step(const crp::InterpreterEvent& e) { handle(interp_.step(e)); }

  void sense(std::vector<std::pair<std::string, fluents::Value>> extra = {},
             std::vector<std::string> pulses = {}) {
    const Point p = measured();
    crp::FluentChange fc;
    fc.values = {{"robot-x", p.x()}, {"robot-y", p.y()}};
    for (auto& v : extra) fc.values.push_back(std::move(v));
    fc.pulses = std::move(pulses);
    step(fc);
  }

  // ---- start ----------------------------------------------------------

  void start() {
    Rng world_rng(derive_seed(options_.seed, 0));
    out_.world = world::sample_world(w_, beliefs_, world_rng);
    Timeline& tl = out_.timeline;
    tl.add_occurrence(sym("start"), 0.0);
    const std::size_t i = 0;
    tl.assert_prop(Term::compound("travel-mode", {sym(crp::to_string(travel_))}), 0.0);
    if (travel_ != crp::TravelMode::Doorway)
      tl.assert_prop(Term::compound("obstacle-avoidance-with", {sym("sonar")}), 0.0);
    if (const world::Room* r = w_.room_at(rest_)) tl.assert_prop(Term::compound("robot-in", {sym(r->name)}), 0.0);
    for (const auto& [room, open] : out_.world.door_open)
      tl.assert_prop(Term::compound(open ? "door-open" : "door-closed", {sym(room)}), 0.0);
    for (const world::Letter& l : w_.letters) {
      tl.assert_prop(Term::compound("object-at", {sym(l.id), sym(l.room)}), 0.0);
      tl.assert_prop(Term::compound("color", {sym(l.id), sym(out_.world.colors.at(l.id))}), 0.0);
    }
    for (const auto& [var, value] : out_.world.values)
      tl.assert_prop(Term::compound("value", {sym(var), sym(value)}), 0.0);
    rules::apply_effect_rules(tl, i, rules_, rng_);
    out_.records.push_back({rest_, travel_, ""});

    // Fluents the plan reads but nothing defines start out false; door
    // fluents reflect what the robot last observed.
    std::set<std::string> inputs, local;
    collect_inputs(interp_.plan().root, inputs, local);
    const auto defs = w_.fluent_definitions();
    for (const world::Room& r : w_.rooms) interp_.set_fluent("door-open-" + r.name, r.observed != "closed");
    for (const std::string& name : inputs)
      if (!local.count(name) && !defs.count(name) && !interp_.fluent(name) && name != "robot-x" &&
          name != "robot-y" && name.rfind("navigation-interrupted?", 0) != 0)
        interp_.set_fluent(name, false);
    sense();
    after_event();
    out_.records.back().mode_key = out_.mode_keys.empty() ? "" : out_.mode_keys.front();
  }

  // ---- main loop --------------------------------------------------------

  void loop() {
    Timeline& tl = out_.timeline;
    while (true) {
      if (interp_.finished() && !nav_ && queue_.empty()) {
        out_.finished = true;
        return;
      }
      const double t_queue = queue_.empty() ? kInf : queue_.front().date;
      const auto expiry = tl.next_expiry();
      const double t_exp = expiry ? expiry->first : kInf;
      const double t_next = std::min(t_queue, t_exp);
      const double end = std::min(t_next, options_.horizon);
      if (end > now_) {
        auto exo = predict_next_exogenous(tl, rules_, now_, end, {}, rng_, rules::kImmediateSpacing);
        if (exo) {
          occur(exo->event, exo->date, EventClass::Physical);
          after_event();
          continue;
        }
      }
      if (t_next > options_.horizon) {
        out_.horizon_exceeded = true;
        return;
      }
      const bool expiry_first =
          t_exp < t_queue || (t_exp == t_queue && queue_.front().cls == EventClass::Physical);
      if (expiry && expiry_first) {
        on_expiry(expiry->first, expiry->second);
      } else {
        Timed t = std::move(queue_.front());
        queue_.erase(queue_.begin());
        on_timed(std::move(t));
      }
    }
  }

  void enqueue(double date, EventClass cls, Term ev, crp::RequestId req, std::optional<Completion> done) {
    Timed t{date, cls, seq_++, std::move(ev), req, std::move(done)};
    auto pos = std::upper_bound(queue_.begin(), queue_.end(), t, [](const Timed& a, const Timed& b) {
      if (a.date != b.date) return a.date < b.date;
      if (a.cls != b.cls) return a.cls < b.cls;
      return a.seq < b.seq;
    });
    queue_.insert(pos, std::move(t));
  }

  void on_timed(Timed t) {
    occur(t.event, t.date, t.cls);
    if (t.done) {
      if (!t.done->fluents.empty() || !t.done->pulses.empty()) sense(t.done->fluents, t.done->pulses);
      step(crp::PrimitiveDone{t.done->id, t.done->success, t.done->failure});
    }
    after_event();
  }

  void on_expiry(double date, const Term& p) {
    occur(Term::compound("lapse", {p}), date, EventClass::Physical);
    out_.timeline.clip(p, date);
    if (nav_ && p == sleeping()) {
      in_entry_ = true;
      advance_nav();
      in_entry_ = false;
      if (nav_ && !nav_->state.finished()) begin_segment();
    }
    after_event();
  }

  // ---- navigation -----------------------------------------------------

  Term sleeping() const { return Term::compound("sleeping", {sym(nav_->state.id)}); }
  Term running_segment() const {
    return Term::compound("running", {Term::compound("follow-path", {sym(nav_->state.id),
                                                                     Term::num(nav_->segment)})});
  }

  void begin_segment() {
    ++nav_->segment;
    occur(Term::compound("begin", {Term::compound("follow-path", {sym(nav_->state.id), Term::num(nav_->segment)})}),
          now_, EventClass::Computational);
    out_.timeline.assert_prop(running_segment(), now_);
    persist_sleep();
  }

  void persist_sleep() {
    const double until = nav_->state.entry_time(nav_->state.next);
    out_.timeline.persist(sleeping(), now_, std::max(0.0, until - now_));
  }

  void advance_nav() {
    const std::string id = nav_->state.id;
    occur(Term::compound("end", {Term::compound("follow-path", {sym(id), Term::num(nav_->segment)})}), now_,
          EventClass::Computational);
    out_.timeline.clip(running_segment(), now_);
    const ScheduleEntry entry = nav_->state.schedule.entries[nav_->state.next++];
    std::vector<Term> events = entry.events;
    std::stable_sort(events.begin(), events.end(), [](const Term& a, const Term& b) {
      return (a.name() == "passive-sensor-update") < (b.name() == "passive-sensor-update");
    });
    for (const Term& ev : events) {
      const bool sensor = ev.name() == "passive-sensor-update";
      occur(ev, now_, sensor ? EventClass::Sensor : EventClass::Physical);
      const bool mine = nav_ && nav_->state.id == id;
      if (ev.name() == "nav-event" && ev.arg(0).name() == "set-travel-mode") {
        if (auto m = crp::travel_mode_from_string(ev.arg(0).arg(0).name())) travel_ = *m;
      } else if (sensor) {
        sense();
      } else if (ev.name() == "possible-bump" && mine) {
        const bool sonar = out_.timeline.holds_now(Term::compound("obstacle-avoidance-with", {sym("sonar")}));
        const SensingOutcome o = possible_bump(ev.arg(0).name(), sonar);
        for (const auto& [dt, e] : o.events) occur(e, now_, EventClass::Physical);
        if (!o.success) {
          fail_nav(o.failure);
          return;
        }
      } else if (ev.name() == "nav-event" && ev.arg(0).name() == "destination-reached" && mine) {
        finish_nav();
        return;
      }
      after_event();
    }
  }

  void stop_nav() {
    rest_ = position();
    Timeline& tl = out_.timeline;
    tl.clip(sleeping(), now_);
    tl.clip(running_segment(), now_);
    tl.clip(Term::compound("running", {Term::compound("robot-goto", {nav_->dest, sym(nav_->state.id)})}), now_);
    nav_.reset();
  }

  void finish_nav() {
    const crp::RequestId req = nav_->request;
    occur(Term::compound("end", {nav_->action}), now_, EventClass::Physical);
    stop_nav();
    if (const world::Room* r = w_.room_at(rest_); r && !out_.timeline.holds_now(Term::compound("robot-in", {sym(r->name)})))
      out_.timeline.assert_prop(Term::compound("robot-in", {sym(r->name)}), now_);
    step(crp::PrimitiveDone{req, true, {}});
  }

  void fail_nav(const std::string& why) {
    const crp::RequestId req = nav_->request;
    occur(Term::compound("fail", {nav_->action, sym(why)}), now_, EventClass::Physical);
    stop_nav();
    step(crp::PrimitiveDone{req, false, why});
  }

  std::vector<fluents::FluentNetwork> pending() const {
    return crp::pending_networks(interp_, interp_.options().changes, interp_.options().motion_process);
  }

  ScheduleInput base_input() const {
    ScheduleInput in;
    in.motion = w_.motion;
    in.initial_mode = travel_;
    in.rooms = w_.room_regions();
    in.door_fronts = w_.door_front_regions();
    for (const world::Obstacle& o : w_.obstacles)
      if (o.told) in.obstacles.push_back(geom2d::Region{o.rect});
    return in;
  }

  /// Straight path toward `target`, rotated by the current variant, ending
  /// where it crosses the plane through the target.
  std::optional<geom2d::Polyline> aim(const Point& from, const Point& target) const {
    const Point d = target - from;
    if (d.norm() < 1e-6) return std::nullopt;
    const Point n = d.normalized();
    const Point dir = geom2d::rotated(n, w_.motion.rotations[variant_].radians);
    const double along = dir.dot(n);
    if (along <= 1e-9) return std::nullopt;
    return geom2d::Polyline({from, from + dir * (d.norm() / along)});
  }

  void start_nav(const crp::PrimitiveRequest& req) {
    if (nav_) {
      // one navigation process at a time: the newer request supersedes
      const crp::RequestId old = nav_->request;
      fail_nav("superseded");
      (void)old;
    }
    const Point p = position();
    ScheduleInput in = base_input();
    std::optional<geom2d::Polyline> path;
    Term dest;
    bool move_to = false;
    Point target = p;
    if (const auto* m = std::get_if<crp::MoveTo>(&req.action)) {
      move_to = true;
      target = m->target;
      dest = crp::to_term(req.action);
      path = aim(p, target);
    } else {
      std::string where;
      if (const auto* g = std::get_if<crp::GoTo>(&req.action)) where = g->location;
      if (const auto* l = std::get_if<crp::LowLevelNavPlan>(&req.action)) where = l->dest;
      dest = sym(where);
      path = w_.route(p, where);
      in.mode_regions = w_.mode_regions();
      const auto loc = w_.locate(where);
      if (loc) target = *loc;
      if (const world::Room* r = w_.room_at(target); r && r != w_.room_at(p)) {
        auto it = out_.world.door_open.find(r->name);
        if (it != out_.world.door_open.end() && !it->second) {
          const std::string id = fmt::format("nav-{}", req.id);
          const Term action = Term::compound("low-level-nav-plan", {dest, sym(id)});
          occur(Term::compound("begin", {action}), now_, EventClass::Physical);
          occur(Term::compound("fail", {action, sym("door-closed")}), now_, EventClass::Physical);
          step(crp::PrimitiveDone{req.id, false, "door closed"});
          return;
        }
      }
    }
    const std::string id = fmt::format("nav-{}", req.id);
    const Term action = Term::compound("low-level-nav-plan", {dest, sym(id)});
    occur(Term::compound("begin", {action}), now_, EventClass::Physical);
    if (!path) {
      occur(Term::compound("end", {action}), now_, EventClass::Physical);
      step(crp::PrimitiveDone{req.id, true, {}});
      return;
    }
    in.path = *path;
    out_.timeline.assert_prop(Term::compound("running", {Term::compound("robot-goto", {dest, sym(id)})}), now_);
    armed_ = pending();
    nav_ = ActiveNav{start_navigation(id, std::move(in), armed_, now_), req.id, action, dest, move_to, target, 0};
    if (nav_->state.finished()) {
      finish_nav();
      return;
    }
    begin_segment();
  }

  void abort_request(crp::RequestId id) {
    if (nav_ && nav_->request == id) {
      occur(Term::compound("abort-nav", {sym(nav_->state.id)}), now_, EventClass::Computational);
      stop_nav();
    }
    queue_.erase(std::remove_if(queue_.begin(), queue_.end(), [&](const Timed& t) { return t.request == id; }),
                 queue_.end());
  }

  // ---- primitives -------------------------------------------------------

  void enqueue_outcome(crp::RequestId id, SensingOutcome o) {
    auto cls_of = [](const Term& ev) {
      return ev.name() == "begin" || ev.name() == "end" ? EventClass::Physical : EventClass::Sensor;
    };
    std::stable_sort(o.events.begin(), o.events.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return cls_of(a.second) < cls_of(b.second);
    });
    for (std::size_t k = 0; k < o.events.size(); ++k) {
      const bool last = k + 1 == o.events.size();
      const Term& ev = o.events[k].second;
      const EventClass cls = cls_of(ev);
      std::optional<Completion> done;
      if (last) done = Completion{id, o.success, o.failure, o.fluents, o.pulses};
      enqueue(now_ + o.events[k].first, cls, ev, id, std::move(done));
    }
  }

  std::vector<VisibleObject> visible_objects() const {
    std::vector<VisibleObject> out;
    const world::Room* here = w_.room_at(position());
    if (!here) return out;
    for (const world::Letter& l : w_.letters)
      if (out_.timeline.holds_now(Term::compound("object-at", {sym(l.id), sym(here->name)})))
        out.push_back({l.id, out_.world.colors.at(l.id), here->desk});
    return out;
  }

  SensingOutcome project_rule_outcome(const crp::PrimitiveAction& a) {
    const Term head = crp::to_term(a);
    SensingOutcome o;
    for (const rules::ProjectRule& r : rules_.project) {
      Bindings b;
      if (!match(r.head, head, b)) continue;
      const auto sols = rules::solve(out_.timeline, r.condition, b);
      if (sols.empty()) continue;
      for (const auto& [delay, ev] : r.events) o.events.emplace_back(delay.sample(rng_), substitute(ev, sols[0]));
      if (r.failure) {
        o.success = false;
        o.failure = substitute(*r.failure, sols[0]).str();
      }
      if (o.events.empty()) o.events.emplace_back(0.0, Term::compound("end", {head}));
      return o;
    }
    o.events.emplace_back(0.0, Term::compound("begin", {head}));
    o.events.emplace_back(0.0, Term::compound("end", {head}));
    return o;
  }

  void start_primitive(const crp::PrimitiveRequest& req) {
    if (const auto* m = std::get_if<crp::SetNavigationMode>(&req.action)) {
      occur(Term::compound("nav-event", {Term::compound("set-travel-mode", {sym(crp::to_string(m->mode))})}),
            now_, EventClass::Physical);
      travel_ = m->mode;
      if (nav_ && nav_->move_to) retime();
      step(crp::PrimitiveDone{req.id, true, {}});
      return;
    }
    if (crp::is_motion(req.action)) {
      start_nav(req);
      return;
    }
    if (std::holds_alternative<crp::EstimateDoorAngle>(req.action)) {
      enqueue_outcome(req.id, estimate_door_angle(position(), w_, out_.world, rng_));
      return;
    }
    if (const auto* l = std::get_if<crp::LookFor>(&req.action)) {
      enqueue_outcome(req.id, look_for(l->description, l->camera, visible_objects(), position(), w_, rng_));
      return;
    }
    enqueue_outcome(req.id, project_rule_outcome(req.action));
  }

  void handle(const crp::StepResult& r) {
    for (crp::RequestId id : r.aborted) abort_request(id);
    for (const crp::PrimitiveRequest& req : r.started) start_primitive(req);
  }

  /// Re-plans a straight move after a speed or heading change.
  void retime() {
    const Point p = position();
    auto path = aim(p, nav_->target);
    if (!path) return;
    NavState& s = nav_->state;
    s.input.path = *path;
    s.input.initial_mode = travel_;
    s.schedule = schedule_endogenous_events(s.input);
    s.start_time = now_;
    s.next = 0;
    if (!in_entry_) persist_sleep();
  }

  // ---- after every occurrence ----------------------------------------------

  void after_event() {
    fire_immediate();
    if (nav_) {
      // A wait that starts on a positional condition forces a reschedule.
      // Triggers that lapse stay in the schedule; their crossings become
      // plain sensor updates.
      std::vector<fluents::FluentNetwork> now_pending = pending();
      bool started = false;
      std::vector<fluents::FluentNetwork> nets = nav_->state.networks;
      for (const fluents::FluentNetwork& n : now_pending) {
        if (std::find(armed_.begin(), armed_.end(), n) == armed_.end()) started = true;
        if (std::find(nets.begin(), nets.end(), n) == nets.end()) nets.push_back(n);
      }
      armed_ = std::move(now_pending);
      if (started) {
        nav_->state = reschedule_on_new_trigger(nav_->state, std::move(nets), now_, interp_.options().changes);
        if (nav_->move_to) nav_->state.input.initial_mode = travel_;
        ++out_.reschedules;
        if (!in_entry_) persist_sleep();
      }
    }
    const std::string sig = fmt::format("{}|{}", interp_.signature(), crp::to_string(travel_));
    if (sig != last_sig_) {
      last_sig_ = sig;
      if (nav_ && w_.motion.rotations.size() > 1 && !out_.mode_keys.empty()) {
        const ha::JumpEdge e = rotation_edge();
        variant_ = ha::sample_successor_mode(e, bits_);
        if (nav_->move_to) retime();
      } else if (!nav_) {
        variant_ = 0;
      }
      out_.mode_keys.push_back(mode_key(interp_, travel_, variant_));
    }
  }

  ha::JumpEdge rotation_edge() const {
    ha::JumpEdge e;
    e.bits = rotation_bits_.bits;
    for (std::size_t k = 0; k < rotation_bits_.ranges.size(); ++k)
      e.successors.push_back({static_cast<ha::ModeId>(k), rotation_bits_.ranges[k].first,
                              rotation_bits_.ranges[k].second});
    return e;
  }

  /// Rules with a vanishing spacing fire once at each onset of their
  /// condition.
  void fire_immediate() {
    for (std::size_t k = 0; k < rules_.exogenous.size(); ++k) {
      const rules::ExoRule& r = rules_.exogenous[k];
      if (r.tau > rules::kImmediateSpacing) continue;
      std::set<std::string> now_on;
      std::vector<Term> fire;
      for (const Bindings& b : rules::solve(out_.timeline, r.condition)) {
        Term ev = substitute(r.event, b);
        const std::string key = fmt::format("{}#{}", k, ev.str());
        if (!now_on.insert(key).second) continue;
        if (!immediate_on_.count(key)) fire.push_back(std::move(ev));
      }
      for (auto it = immediate_on_.begin(); it != immediate_on_.end();) {
        if (it->rfind(fmt::format("{}#", k), 0) == 0 && !now_on.count(*it))
          it = immediate_on_.erase(it);
        else
          ++it;
      }
      immediate_on_.insert(now_on.begin(), now_on.end());
      for (Term& ev : fire) {
        occur(std::move(ev), now_, EventClass::Physical);
        after_event();
      }
    }
  }

  const world::World& w_;
  const world::Beliefs& beliefs_;
  const rules::RuleSet& rules_;
  const ProjectionOptions& options_;
  Rng rng_;
  BitPool bits_;
  crp::InterpreterState interp_;
  crp::TravelMode travel_;
  Point rest_;
  std::optional<ActiveNav> nav_;
  std::vector<Timed> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  bool in_entry_ = false;
  std::size_t variant_ = 0;
  ha::DyadicRanges rotation_bits_;
  std::string last_sig_;
  std::set<std::string> immediate_on_;
  std::vector<fluents::FluentNetwork> armed_;  // positional triggers pending at the last check
  ProjectionResult out_;
};

}  // namespace

ProjectionResult project_plan(const crp::Plan& plan, const world::World& w, const world::Beliefs& beliefs,
                              const rules::RuleSet& rules, const ProjectionOptions& options) {
  if (!(options.horizon > 0.0)) throw DomainError("horizon must be positive");
  return Projection(plan, w, beliefs, rules, options).run();
}

}  // namespace hyproj::proj
