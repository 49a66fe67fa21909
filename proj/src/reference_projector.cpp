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

#include "hyproj/reference_projector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hyproj::ref {

RefParameters choose_ref_parameters(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  RefParameters p{delta / (2.0 * std::log(1.0 / epsilon)), delta / 2.0, {}};
  if (epsilon > 0.5)
    p.warning = fmt::format("epsilon {} gives tau {} longer than delta; the bound is vacuous", epsilon,
                            p.tau_jump);
  return p;
}

namespace {

using ha::Point;

Term point_term(const char* name, const Point& p) {
  return Term::compound(name, {Term::num(p.x()), Term::num(p.y())});
}

Point arrival_normal(const ha::ControlMode& m, const Point& p) {
  if (!m.law.target) return Point::Zero();
  const Point d = *m.law.target - p;
  return d.norm() < 1e-9 ? Point::Zero() : Point(d.normalized());
}

class Run {
 public:
  Run(const ha::HybridAutomaton& a, const rules::RuleSet& rules, const RefConfig& cfg)
      : a_(a), rules_(rules), cfg_(cfg), rng_(cfg.seed), bits_(rng_) {}

  RefResult go() {
    ha::AutomatonState& s = out_.state;
    s.mode = a_.root;
    s.vals0 = a_.modes[a_.root].initial_values.value_or(Point::Zero());
    s.flow = a_.modes[a_.root].law.velocity_at(s.vals0);
    normal_ = arrival_normal(a_.modes[a_.root], s.vals0);
    out_.modes.push_back(s.mode);
    first_hold_.assign(a_.modes[s.mode].edges.size(), kNever);

    Timeline& tl = out_.timeline;
    const std::size_t start = tl.add_occurrence(Term::sym("start"), 0.0);
    assert_state(0.0);
    tl.assert_prop(Term::compound("now", {Term::num(0.0)}), 0.0);
    rules::apply_effect_rules(tl, start, rules_, rng_);

    double t = 0.0;
    std::size_t tick = 0;
    // The clock runs to the horizon; a leaf mode keeps its flow.
    while (t < cfg_.horizon) {
      const double t_next = std::min(cfg_.horizon, cfg_.dt_clock * static_cast<double>(tick + 1));
      window(t, t_next, tick);
      t = t_next;
      ++tick;
      if (cfg_.record_ticks) {
        const std::size_t i = tl.add_occurrence(Term::compound("clock-tick", {Term::num(t)}), t,
                                                EventClass::Computational);
        tl.clip(Term::compound("now", {Term::num(last_now_)}), t);
        tl.assert_prop(Term::compound("now", {Term::num(t)}), t);
        last_now_ = t;
        rules::apply_effect_rules(tl, i, rules_, rng_);
      }
    }
    s.now = t;
    out_.horizon_exceeded = !a_.is_leaf(s.mode);
    return std::move(out_);
  }

 private:
  static constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

  void assert_state(double t) {
    const ha::AutomatonState& s = out_.state;
    Timeline& tl = out_.timeline;
    tl.assert_prop(Term::compound("mode", {Term::num(s.mode)}), t);
    tl.assert_prop(point_term("flow", s.flow), t);
    tl.assert_prop(Term::compound("values-at", {Term::num(t), Term::num(s.vals0.x()), Term::num(s.vals0.y())}),
                   t);
  }

  void clip_state(double t) {
    const ha::AutomatonState& s = out_.state;
    Timeline& tl = out_.timeline;
    tl.clip(Term::compound("mode", {Term::num(s.mode)}), t);
    tl.clip(point_term("flow", s.flow), t);
    tl.clip(Term::compound("values-at", {Term::num(s.t0), Term::num(s.vals0.x()), Term::num(s.vals0.y())}),
            t);
  }

  /// One tick window [t, t_next): conditions are read at t.
  void window(double t, double t_next, std::size_t tick) {
    ha::AutomatonState& s = out_.state;
    const Point p = ha::state_var_vals(s, t);
    const double dt = t_next - t;
    std::optional<std::pair<double, std::size_t>> jump;  // (date, edge slot)
    const auto& edges = a_.modes[s.mode].edges;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (!ha::edge_holds(a_.edges[edges[k]].condition, p, normal_)) continue;
      if (first_hold_[k] == kNever) first_hold_[k] = tick;
      const double d = exponential(rng_, cfg_.tau_jump);
      if (d < dt && (!jump || t + d < jump->first)) jump = std::make_pair(t + d, k);
    }
    std::vector<Occurrence> exo;
    if (!rules_.exogenous.empty())
      exo = rules::sample_exogenous_occurrences(out_.timeline, rules_, t, t_next, {}, rng_);
    std::size_t e = 0;
    auto flush_exo = [&](double until) {
      for (; e < exo.size() && exo[e].date < until; ++e) {
        const std::size_t i = out_.timeline.add_occurrence(exo[e].event, exo[e].date, exo[e].cls);
        rules::apply_effect_rules(out_.timeline, i, rules_, rng_);
      }
    };
    if (jump) {
      flush_exo(jump->first);
      take(jump->first, jump->second);
    }
    flush_exo(std::numeric_limits<double>::infinity());
  }

  void take(double t, std::size_t slot) {
    ha::AutomatonState& s = out_.state;
    const ha::JumpEdge& edge = a_.edges[a_.modes[s.mode].edges[slot]];
    for (std::size_t k = 0; k < first_hold_.size(); ++k)
      if (first_hold_[k] < first_hold_[slot]) {
        ++out_.anomalies;
        break;
      }
    Timeline& tl = out_.timeline;
    const Point p = ha::state_var_vals(s, t);
    const std::size_t i = tl.add_occurrence(Term::compound("jump", {Term::num(edge.id)}), t);
    clip_state(t);
    s.mode = ha::sample_successor_mode(edge, bits_);
    s.t0 = t;
    s.vals0 = p;
    s.flow = a_.modes[s.mode].law.velocity_at(p);
    normal_ = arrival_normal(a_.modes[s.mode], p);
    assert_state(t);
    rules::apply_effect_rules(tl, i, rules_, rng_);
    out_.modes.push_back(s.mode);
    out_.jump_times.push_back(t);
    first_hold_.assign(a_.modes[s.mode].edges.size(), kNever);
  }

  const ha::HybridAutomaton& a_;
  const rules::RuleSet& rules_;
  const RefConfig& cfg_;
  Rng rng_;
  BitPool bits_;
  RefResult out_;
  Point normal_{0, 0};
  std::vector<std::size_t> first_hold_;
  double last_now_ = 0.0;
};

}  // namespace

RefResult project_clock_tick(const ha::HybridAutomaton& a, const rules::RuleSet& rules,
                             const RefConfig& cfg) {
  if (!(cfg.dt_clock > 0.0) || !(cfg.tau_jump > 0.0) || !(cfg.horizon > 0.0))
    throw DomainError("dt_clock, tau_jump and horizon must be positive");
  if (a.modes.empty()) throw Error("automaton has no modes");
  return Run(a, rules, cfg).go();
}

}  // namespace hyproj::ref
