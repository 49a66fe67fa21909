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

#include "hyproj/rules.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hyproj::rules {

double DelaySpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Fixed: return a;
    case Kind::Uniform: return uniform(rng, a, b);
    case Kind::Normal: return std::max(0.0, std::normal_distribution<double>(a, b)(rng));
  }
  return a;
}

const FlawSpec* RuleSet::flaw(std::string_view name) const {
  for (const FlawSpec& f : flaws)
    if (f.name == name) return &f;
  return nullptr;
}

void RuleSet::append(const RuleSet& other) {
  project.insert(project.end(), other.project.begin(), other.project.end());
  effects.insert(effects.end(), other.effects.begin(), other.effects.end());
  exogenous.insert(exogenous.end(), other.exogenous.begin(), other.exogenous.end());
  flaws.insert(flaws.end(), other.flaws.begin(), other.flaws.end());
}

namespace {

using sexpr::Datum;
using sexpr::fail;

const Datum* keyword(const Datum& d, std::string_view key, std::size_t from) {
  for (std::size_t i = from; i + 1 < d.items.size(); ++i)
    if (d.items[i].is_symbol(key)) return &d.items[i + 1];
  return nullptr;
}

void check_keywords(const Datum& d, std::size_t from, std::initializer_list<std::string_view> allowed) {
  for (std::size_t i = from; i < d.items.size(); i += 2) {
    const Datum& k = d.items[i];
    if (!k.is_symbol() || k.text.empty() || k.text[0] != ':') fail(k, "keyword");
    if (std::find(allowed.begin(), allowed.end(), k.text) == allowed.end())
      fail(k, fmt::format("one of the keywords of ({})", d.head()));
    if (i + 1 >= d.items.size()) fail(k, "value after keyword");
  }
}

const Datum& required(const Datum& d, std::string_view key, std::size_t from) {
  const Datum* v = keyword(d, key, from);
  if (!v) fail(d, std::string(key) + " clause");
  return *v;
}

double number(const Datum& d) {
  if (!d.is_number()) fail(d, "number");
  return d.number;
}

Literal literal_from(const Datum& d) {
  Literal l;
  const std::string_view h = d.head();
  if (h == "not" || h == "thnot") {
    if (d.items.size() != 2) fail(d, "(not PATTERN)");
    l.kind = Literal::Kind::Not;
    l.patterns.push_back(term_from_datum(d.items[1]));
  } else if (h == "none") {
    if (d.items.size() < 2) fail(d, "(none PATTERN...)");
    l.kind = Literal::Kind::None;
    for (std::size_t i = 1; i < d.items.size(); ++i) l.patterns.push_back(term_from_datum(d.items[i]));
  } else {
    l.patterns.push_back(term_from_datum(d));
  }
  return l;
}

std::vector<Literal> literals_from(const Datum* d) {
  std::vector<Literal> out;
  if (!d) return out;
  if (!d->is_list()) fail(*d, "list of condition literals");
  for (const Datum& l : d->items) out.push_back(literal_from(l));
  return out;
}

Effect effect_from(const Datum& d) {
  Effect e;
  const std::string_view h = d.head();
  if (h == "clip") {
    if (d.items.size() != 2) fail(d, "(clip PROPOSITION)");
    e.kind = Effect::Kind::Clip;
    e.proposition = term_from_datum(d.items[1]);
  } else if (h == "persist") {
    if (d.items.size() != 3) fail(d, "(persist DURATION PROPOSITION)");
    e.kind = Effect::Kind::Persist;
    e.duration = term_from_datum(d.items[1]);
    if (e.duration.is_number() && e.duration.number() < 0) fail(d.items[1], "nonnegative duration");
    e.proposition = term_from_datum(d.items[2]);
  } else if (h == "assert") {
    if (d.items.size() != 2) fail(d, "(assert PROPOSITION)");
    e.proposition = term_from_datum(d.items[1]);
  } else {
    e.proposition = term_from_datum(d);
  }
  return e;
}

DelaySpec delay_from(const Datum& d) {
  DelaySpec s;
  if (d.is_number()) {
    if (d.number < 0) fail(d, "nonnegative delay");
    s.a = d.number;
    return s;
  }
  const std::string_view h = d.head();
  if ((h == "uniform" || h == "normal") && d.items.size() == 3) {
    s.kind = h == "uniform" ? DelaySpec::Kind::Uniform : DelaySpec::Kind::Normal;
    s.a = number(d.items[1]);
    s.b = number(d.items[2]);
    if (s.kind == DelaySpec::Kind::Uniform && !(0 <= s.a && s.a <= s.b)) fail(d, "0 <= a <= b");
    if (s.kind == DelaySpec::Kind::Normal && !(s.b >= 0)) fail(d, "nonnegative deviation");
    return s;
  }
  fail(d, "delay: NUMBER, (uniform A B) or (normal MU SIGMA)");
}

std::string name_of(const Datum& d) {
  if (d.items.size() < 2 || !d.items[1].is_symbol()) fail(d, "rule name");
  return d.items[1].text;
}

void check_contradictions(const EffectRule& r, const Datum& at) {
  std::set<std::string> asserted, clipped;
  for (const Effect& e : r.effects)
    (e.kind == Effect::Kind::Clip ? clipped : asserted).insert(e.proposition.str());
  for (const std::string& p : asserted)
    if (clipped.count(p))
      throw ContradictoryEffects(fmt::format("{}:{}: rule {} both asserts and clips {}", at.line,
                                             at.col, r.name, p));
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
  RuleSet rs;
  std::set<std::string> names;
  for (const Datum& d : sexpr::read_all(text)) {
    const std::string_view h = d.head();
    const std::string name = name_of(d);
    if (!names.insert(std::string(h) + " " + name).second) fail(d, "unique rule name, " + name + " is repeated");
    if (h == "e->p") {
      check_keywords(d, 2, {":event", ":if", ":prob", ":causes"});
      EffectRule r;
      r.name = name;
      r.event = term_from_datum(required(d, ":event", 2));
      r.condition = literals_from(keyword(d, ":if", 2));
      if (const Datum* p = keyword(d, ":prob", 2)) r.theta = number(*p);
      if (!(r.theta >= 0.0 && r.theta <= 1.0)) fail(d, "probability in [0,1]");
      const Datum& causes = required(d, ":causes", 2);
      if (!causes.is_list()) fail(causes, "list of effects");
      for (const Datum& e : causes.items) r.effects.push_back(effect_from(e));
      check_contradictions(r, d);
      rs.effects.push_back(std::move(r));
    } else if (h == "p->e") {
      check_keywords(d, 2, {":while", ":spacing", ":occurs"});
      ExoRule r;
      r.name = name;
      r.condition = literals_from(keyword(d, ":while", 2));
      r.tau = number(required(d, ":spacing", 2));
      if (!(r.tau > 0.0)) fail(d, "positive spacing");
      r.event = term_from_datum(required(d, ":occurs", 2));
      rs.exogenous.push_back(std::move(r));
    } else if (h == "project") {
      check_keywords(d, 2, {":head", ":if", ":events", ":fails"});
      ProjectRule r;
      r.name = name;
      r.head = term_from_datum(required(d, ":head", 2));
      r.condition = literals_from(keyword(d, ":if", 2));
      const Datum& events = required(d, ":events", 2);
      if (!events.is_list()) fail(events, "list of (DELAY EVENT)");
      for (const Datum& e : events.items) {
        if (!e.is_list() || e.items.size() != 2) fail(e, "(DELAY EVENT)");
        r.events.emplace_back(delay_from(e.items[0]), term_from_datum(e.items[1]));
      }
      if (const Datum* f = keyword(d, ":fails", 2)) r.failure = term_from_datum(*f);
      rs.project.push_back(std::move(r));
    } else if (h == "flaw") {
      if (d.items.size() != 3 || !d.items[2].is_list() || d.items[2].items.size() != 2)
        fail(d, "(flaw NAME (occurs PATTERN)) or (flaw NAME (holds PATTERN))");
      FlawSpec f;
      f.name = name;
      const std::string_view k = d.items[2].head();
      if (k == "occurs") f.kind = FlawSpec::Kind::Occurs;
      else if (k == "holds") f.kind = FlawSpec::Kind::Holds;
      else fail(d.items[2], "occurs or holds");
      f.pattern = term_from_datum(d.items[2].items[1]);
      rs.flaws.push_back(std::move(f));
    } else {
      fail(d, "e->p, p->e, project or flaw rule");
    }
  }
  return rs;
}

RuleSet load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rules file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str());
}

namespace {

void solve_rec(const Timeline& tl, const std::vector<Literal>& cond, std::size_t i, const Bindings& b,
               std::vector<Bindings>& out) {
  if (i == cond.size()) {
    out.push_back(b);
    return;
  }
  const Literal& l = cond[i];
  switch (l.kind) {
    case Literal::Kind::Positive: {
      const Term p = substitute(l.patterns[0], b);
      if (p.is_compound() && p.name() == "distinct" && p.arity() == 2) {
        if (p.arg(0).is_ground() && p.arg(1).is_ground() && p.arg(0) != p.arg(1))
          solve_rec(tl, cond, i + 1, b, out);
        return;
      }
      for (const Bindings& ext : tl.match_open(p, b)) solve_rec(tl, cond, i + 1, ext, out);
      return;
    }
    case Literal::Kind::Not:
      if (tl.match_open(substitute(l.patterns[0], b), b).empty()) solve_rec(tl, cond, i + 1, b, out);
      return;
    case Literal::Kind::None: {
      std::vector<Literal> conj;
      for (const Term& p : l.patterns) conj.push_back({Literal::Kind::Positive, {p}});
      std::vector<Bindings> inner;
      solve_rec(tl, conj, 0, b, inner);
      if (inner.empty()) solve_rec(tl, cond, i + 1, b, out);
      return;
    }
  }
}

bool effect_holds(const Timeline& tl, const Effect& e, const Term& p) {
  if (e.kind == Effect::Kind::Clip) return !tl.any_open(p);
  return tl.holds_now(p);
}

}  // namespace

std::vector<Bindings> solve(const Timeline& tl, const std::vector<Literal>& condition,
                            const Bindings& init) {
  std::vector<Bindings> out;
  solve_rec(tl, condition, 0, init, out);
  return out;
}

TimelineDelta apply_effect_rules(Timeline& tl, std::size_t index, const RuleSet& rules, Rng& rng) {
  if (index + 1 != tl.occurrences().size())
    throw Error("effects apply to the latest occurrence only");
  const Occurrence occ = tl.occurrences()[index];
  struct Pending {
    Effect::Kind kind;
    Term proposition;
    double duration;
  };
  std::vector<Pending> pending;
  TimelineDelta delta;
  for (const EffectRule& r : rules.effects) {
    Bindings b;
    if (!match(r.event, occ.event, b)) continue;
    for (const Bindings& sol : solve(tl, r.condition, b)) {
      std::vector<Pending> mine;
      bool all_hold = true;
      for (const Effect& e : r.effects) {
        Term p = substitute(e.proposition, sol);
        double dur = 0.0;
        if (e.kind == Effect::Kind::Persist) {
          const Term d = substitute(e.duration, sol);
          if (!d.is_number()) throw Error("persist duration of rule " + r.name + " is not a number");
          dur = d.number();
        }
        if (e.kind != Effect::Kind::Clip && !p.is_ground())
          throw Error("rule " + r.name + " asserts non-ground " + p.str());
        all_hold = all_hold && effect_holds(tl, e, p);
        mine.push_back({e.kind, std::move(p), dur});
      }
      if (all_hold) continue;
      if (r.theta < 1.0 && !bernoulli(rng, r.theta)) continue;
      delta.fired.push_back(r.name);
      pending.insert(pending.end(), mine.begin(), mine.end());
    }
  }
  std::set<std::string> asserted;
  for (const Pending& p : pending)
    if (p.kind != Effect::Kind::Clip) asserted.insert(p.proposition.str());
  const std::size_t opened0 = occ.opened.size(), closed0 = occ.closed.size();
  for (const Pending& p : pending) {
    if (p.kind != Effect::Kind::Clip) continue;
    if (p.proposition.is_ground()) {
      if (!asserted.count(p.proposition.str())) tl.clip(p.proposition, occ.date);
      continue;
    }
    for (const Bindings& m : tl.match_open(p.proposition, {})) {
      const Term g = substitute(p.proposition, m);
      if (!asserted.count(g.str())) tl.clip(g, occ.date);
    }
  }
  for (const Pending& p : pending) {
    if (p.kind == Effect::Kind::Assert) tl.assert_prop(p.proposition, occ.date);
    if (p.kind == Effect::Kind::Persist) tl.persist(p.proposition, occ.date, p.duration);
  }
  const Occurrence& after = tl.occurrences()[index];
  delta.opened.assign(after.opened.begin() + static_cast<std::ptrdiff_t>(opened0), after.opened.end());
  delta.closed.assign(after.closed.begin() + static_cast<std::ptrdiff_t>(closed0), after.closed.end());
  return delta;
}

std::vector<Occurrence> sample_exogenous_occurrences(const Timeline& tl, const RuleSet& rules,
                                                     double t1, double t2,
                                                     const ConditionEvaluator& enabled, Rng& rng) {
  if (!(t1 < t2)) throw DomainError("exogenous window must have t1 < t2");
  struct Dated {
    Occurrence occ;
    std::size_t order;
  };
  std::vector<Dated> out;
  std::size_t order = 0;
  for (const ExoRule& r : rules.exogenous) {
    const auto instances = enabled ? enabled(r.condition) : solve(tl, r.condition);
    std::set<std::string> seen;
    for (const Bindings& b : instances) {
      Term ev = substitute(r.event, b);
      if (!seen.insert(ev.str()).second) continue;
      const std::uint64_t n = poisson(rng, (t2 - t1) / r.tau);
      for (std::uint64_t k = 0; k < n; ++k)
        out.push_back({{ev, uniform(rng, t1, t2), EventClass::Physical, {}, {}}, order++});
    }
  }
  std::sort(out.begin(), out.end(), [](const Dated& a, const Dated& b) {
    if (a.occ.date != b.occ.date) return a.occ.date < b.occ.date;
    return a.order < b.order;
  });
  std::vector<Occurrence> result;
  result.reserve(out.size());
  for (Dated& d : out) result.push_back(std::move(d.occ));
  return result;
}

namespace {

unsigned bits_of(std::uint64_t max) {
  if (max == 0 || (max & (max - 1)) != 0) throw DomainError("random_number needs max = 2^n");
  unsigned n = 0;
  while ((std::uint64_t{1} << n) < max) ++n;
  return n;
}

}  // namespace

std::uint64_t random_number(std::uint64_t max, Rng& rng) {
  const unsigned n = bits_of(max);
  BitPool pool(rng);
  return pool.take(n) + 1;
}

RuleSet randomize_rules() {
  return parse_rules(R"(
(e->p randomize
  :event randomize
  :if ((random-bit ?i ?v) (negation ?v ?w))
  :prob 0.5
  :causes ((random-bit ?i ?w) (clip (random-bit ?i ?v))))
)");
}

std::uint64_t random_number(Timeline& tl, std::uint64_t max, Rng& rng) {
  static const RuleSet kRandomize = randomize_rules();
  const unsigned n = bits_of(max);
  const double t = tl.last_date();
  tl.add_occurrence(Term::sym("init-random-bits"), t, EventClass::Computational);
  tl.assert_prop(parse_term("(negation 0 1)"), t);
  tl.assert_prop(parse_term("(negation 1 0)"), t);
  for (unsigned i = 0; i < n; ++i) {
    const Term idx = Term::num(i);
    if (!tl.any_open(Term::compound("random-bit", {idx, Term::sym("?v")})))
      tl.assert_prop(Term::compound("random-bit", {idx, Term::num(0)}), t);
  }
  const std::size_t occ = tl.add_occurrence(Term::sym("randomize"), t, EventClass::Computational);
  apply_effect_rules(tl, occ, kRandomize, rng);
  std::uint64_t value = 0;
  for (unsigned i = 0; i < n; ++i)
    if (tl.holds_now(Term::compound("random-bit", {Term::num(i), Term::num(1)})))
      value |= std::uint64_t{1} << i;
  return value + 1;
}

}  // namespace hyproj::rules
