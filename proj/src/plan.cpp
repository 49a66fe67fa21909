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

#include "hyproj/plan.hpp"

#include <fmt/format.h>

#include <set>

namespace hyproj::crp {

const char* to_string(TravelMode m) {
  switch (m) {
    case TravelMode::Office: return "office";
    case TravelMode::Hallway: return "hallway";
    case TravelMode::Doorway: return "doorway";
  }
  return "?";
}

std::optional<TravelMode> travel_mode_from_string(std::string_view s) {
  if (s == "office") return TravelMode::Office;
  if (s == "hallway") return TravelMode::Hallway;
  if (s == "doorway") return TravelMode::Doorway;
  return std::nullopt;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool is_motion(const PrimitiveAction& a) {
  return std::holds_alternative<MoveTo>(a) || std::holds_alternative<GoTo>(a) ||
         std::holds_alternative<LowLevelNavPlan>(a);
}

Term to_term(const PrimitiveAction& a) {
  return std::visit(
      overloaded{
          [](const MoveTo& m) {
            return Term::compound("move-to", {Term::num(m.target.x()), Term::num(m.target.y())});
          },
          [](const SetNavigationMode& m) {
            return Term::compound("set-navigation-mode", {Term::sym(to_string(m.mode))});
          },
          [](const GoTo& g) { return Term::compound("go-to", {Term::sym(g.location)}); },
          [](const LowLevelNavPlan& l) {
            return Term::compound("low-level-nav-plan", {Term::sym(l.dest), Term::sym(l.id)});
          },
          [](const PickUp& p) { return Term::compound("pick-up", {Term::sym(p.object)}); },
          [](const PutDown& p) { return Term::compound("put-down", {Term::sym(p.object)}); },
          [](const EstimateDoorAngle&) { return Term::sym("estimate-door-angle"); },
          [](const LookFor& l) {
            return Term::compound("look-for", {l.description, Term::sym(l.camera)});
          },
      },
      a);
}

std::string to_string(const PrimitiveAction& a) {
  const Term t = to_term(a);
  return t.is_symbol() ? "(" + t.str() + ")" : t.str();
}

Guard var_test(std::string variable, std::string value) {
  Guard g;
  g.variable = std::move(variable);
  g.value = std::move(value);
  return g;
}

Guard net_guard(fluents::GatePtr network) {
  Guard g;
  g.network = std::move(network);
  return g;
}

namespace {

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Node with_children(NodeKind kind, std::vector<NodePtr> children) {
  Node n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

}  // namespace

NodePtr seq(std::vector<NodePtr> steps) { return make(with_children(NodeKind::Seq, std::move(steps))); }
NodePtr par(std::vector<NodePtr> steps) { return make(with_children(NodeKind::Par, std::move(steps))); }
NodePtr try_in_parallel(std::vector<NodePtr> steps) {
  return make(with_children(NodeKind::TryInParallel, std::move(steps)));
}

NodePtr loop(NodePtr body, std::optional<Guard> until) {
  Node n = with_children(NodeKind::Loop, {std::move(body)});
  n.guard = std::move(until);
  return make(std::move(n));
}

NodePtr wait_for(fluents::GatePtr condition) {
  Node n;
  n.kind = NodeKind::WaitFor;
  n.condition = std::move(condition);
  return make(std::move(n));
}

NodePtr whenever(fluents::GatePtr condition, NodePtr body) {
  Node n = with_children(NodeKind::Whenever, {std::move(body)});
  n.condition = std::move(condition);
  return make(std::move(n));
}

NodePtr with_policy(NodePtr policy, NodePtr body) {
  return make(with_children(NodeKind::WithPolicy, {std::move(policy), std::move(body)}));
}

NodePtr with_valve(std::string valve, int priority, NodePtr body) {
  Node n = with_children(NodeKind::WithValve, {std::move(body)});
  n.name = std::move(valve);
  n.priority = priority;
  return make(std::move(n));
}

NodePtr with_local_fluents(std::vector<std::pair<std::string, fluents::GatePtr>> defs,
                           NodePtr body) {
  Node n = with_children(NodeKind::WithLocalFluents, {std::move(body)});
  n.defs = std::move(defs);
  return make(std::move(n));
}

NodePtr named(std::string name, NodePtr body) {
  Node n = with_children(NodeKind::Named, {std::move(body)});
  n.name = std::move(name);
  return make(std::move(n));
}

NodePtr if_then(Guard guard, NodePtr body) {
  Node n = with_children(NodeKind::If, {std::move(body)});
  n.guard = std::move(guard);
  return make(std::move(n));
}

NodePtr set_var(std::string variable, std::string value) {
  Node n;
  n.kind = NodeKind::SetVar;
  n.name = std::move(variable);
  n.value = std::move(value);
  return make(std::move(n));
}

NodePtr primitive(PrimitiveAction action) {
  Node n;
  n.kind = NodeKind::Primitive;
  n.action = std::move(action);
  return make(std::move(n));
}

namespace {

using sexpr::Datum;
using sexpr::fail;

bool is_execution_state_var(std::string_view v) { return v.rfind("execution-state", 0) == 0; }

void check_execution_value(const Datum& at, std::string_view var, std::string_view value) {
  if (!is_execution_state_var(var)) return;
  for (std::string_view ok : kExecutionStates)
    if (ok == value) return;
  fail(at, "execution state to-be-acquired, loaded or delivered");
}

double num(const Datum& d) {
  if (!d.is_number()) fail(d, "number");
  return d.number;
}

const std::string& sym(const Datum& d) {
  if (!d.is_symbol()) fail(d, "symbol");
  return d.text;
}

void arity(const Datum& d, std::size_t n, const char* form) {
  if (d.items.size() != n) fail(d, form);
}

/// Body of a form starting at item `from`: one step, or an implicit seq.
NodePtr body_from(const Datum& d, std::size_t from, const char* form) {
  if (d.items.size() <= from) fail(d, std::string("body for ") + form);
  if (d.items.size() == from + 1) return node_from_datum(d.items[from]);
  std::vector<NodePtr> steps;
  for (std::size_t i = from; i < d.items.size(); ++i) steps.push_back(node_from_datum(d.items[i]));
  return seq(std::move(steps));
}

Guard guard_from(const Datum& d) {
  if (d.head() == "is") {
    arity(d, 3, "(is VARIABLE VALUE)");
    check_execution_value(d, sym(d.items[1]), sym(d.items[2]));
    return var_test(sym(d.items[1]), sym(d.items[2]));
  }
  return net_guard(fluents::gate_from_datum(d));
}

Datum guard_to(const Guard& g) {
  if (g.is_var_test())
    return sexpr::list({sexpr::symbol("is"), sexpr::symbol(g.variable), sexpr::symbol(g.value)});
  return fluents::gate_to_datum(g.network);
}

std::optional<PrimitiveAction> primitive_from(const Datum& d) {
  const std::string_view h = d.head();
  if (h == "move-to") {
    arity(d, 3, "(move-to X Y)");
    return MoveTo{{num(d.items[1]), num(d.items[2])}};
  }
  if (h == "set-navigation-mode") {
    arity(d, 2, "(set-navigation-mode office|hallway|doorway)");
    auto m = travel_mode_from_string(sym(d.items[1]));
    if (!m) fail(d.items[1], "office, hallway or doorway");
    return SetNavigationMode{*m};
  }
  if (h == "go-to") {
    arity(d, 2, "(go-to LOCATION)");
    return GoTo{sym(d.items[1])};
  }
  if (h == "low-level-nav-plan") {
    arity(d, 3, "(low-level-nav-plan DEST ID)");
    return LowLevelNavPlan{sym(d.items[1]), sym(d.items[2])};
  }
  if (h == "pick-up") {
    arity(d, 2, "(pick-up OBJECT)");
    return PickUp{sym(d.items[1])};
  }
  if (h == "put-down") {
    arity(d, 2, "(put-down OBJECT)");
    return PutDown{sym(d.items[1])};
  }
  if (h == "estimate-door-angle") {
    arity(d, 1, "(estimate-door-angle)");
    return EstimateDoorAngle{};
  }
  if (h == "look-for") {
    arity(d, 3, "(look-for DESCRIPTION CAMERA)");
    return LookFor{term_from_datum(d.items[1]), sym(d.items[2])};
  }
  return std::nullopt;
}

void collect_names(const NodePtr& n, std::set<std::string>& seen) {
  if (n->kind == NodeKind::Named && !seen.insert(n->name).second)
    throw SyntaxError(0, 0, "unique subplan name, '" + n->name + "' is repeated");
  for (const NodePtr& c : n->children) collect_names(c, seen);
}

}  // namespace

NodePtr node_from_datum(const Datum& d) {
  if (!d.is_list() || d.items.empty()) fail(d, "plan form");
  const std::string_view h = d.head();
  if (h.empty()) fail(d, "plan form with a symbol head");
  if (h == "seq" || h == "par" || h == "try-in-parallel") {
    if (d.items.size() < 2) fail(d, fmt::format("at least one step in ({})", h));
    std::vector<NodePtr> steps;
    for (std::size_t i = 1; i < d.items.size(); ++i) steps.push_back(node_from_datum(d.items[i]));
    if (h == "seq") return seq(std::move(steps));
    if (h == "par") return par(std::move(steps));
    return try_in_parallel(std::move(steps));
  }
  if (h == "loop") {
    std::size_t end = d.items.size();
    std::optional<Guard> until;
    if (end >= 3 && d.items[end - 2].is_symbol(":until")) {
      until = guard_from(d.items[end - 1]);
      end -= 2;
    }
    if (end < 2) fail(d, "non-empty loop body");
    Datum body = d;
    body.items.resize(end);
    return loop(body_from(body, 1, "loop"), std::move(until));
  }
  if (h == "wait-for") {
    arity(d, 2, "(wait-for CONDITION)");
    return wait_for(fluents::gate_from_datum(d.items[1]));
  }
  if (h == "whenever") {
    if (d.items.size() < 3) fail(d, "(whenever CONDITION BODY...)");
    return whenever(fluents::gate_from_datum(d.items[1]), body_from(d, 2, "whenever"));
  }
  if (h == "with-policy") {
    arity(d, 3, "(with-policy POLICY BODY)");
    return with_policy(node_from_datum(d.items[1]), node_from_datum(d.items[2]));
  }
  if (h == "with-valve") {
    if (d.items.size() < 3) fail(d, "(with-valve VALVE [PRIORITY] BODY...)");
    std::size_t from = 2;
    int priority = 1;
    if (d.items[2].is_number()) {
      priority = static_cast<int>(d.items[2].number);
      if (priority != d.items[2].number) fail(d.items[2], "integer priority");
      from = 3;
    }
    return with_valve(sym(d.items[1]), priority, body_from(d, from, "with-valve"));
  }
  if (h == "with-local-fluents") {
    if (d.items.size() < 3 || !d.items[1].is_list()) fail(d, "(with-local-fluents ((NAME NET)...) BODY...)");
    std::vector<std::pair<std::string, fluents::GatePtr>> defs;
    for (const Datum& def : d.items[1].items) {
      if (!def.is_list() || def.items.size() != 2) fail(def, "(NAME NETWORK)");
      defs.emplace_back(sym(def.items[0]), fluents::gate_from_datum(def.items[1]));
    }
    return with_local_fluents(std::move(defs), body_from(d, 2, "with-local-fluents"));
  }
  if (h == "named") {
    if (d.items.size() < 3) fail(d, "(named NAME BODY...)");
    return named(sym(d.items[1]), body_from(d, 2, "named"));
  }
  if (h == "if") {
    if (d.items.size() < 3) fail(d, "(if GUARD BODY...)");
    return if_then(guard_from(d.items[1]), body_from(d, 2, "if"));
  }
  if (h == "set") {
    arity(d, 3, "(set VARIABLE VALUE)");
    check_execution_value(d, sym(d.items[1]), sym(d.items[2]));
    return set_var(sym(d.items[1]), sym(d.items[2]));
  }
  if (auto a = primitive_from(d)) return primitive(std::move(*a));
  fail(d.items[0], "plan form (seq, par, loop, wait-for, ... or a primitive)");
}

Plan parse_plan(std::string_view text) {
  Plan p{node_from_datum(sexpr::read_one(text))};
  std::set<std::string> names;
  collect_names(p.root, names);
  return p;
}

Datum node_to_datum(const NodePtr& n) {
  using sexpr::list;
  using sexpr::number;
  using sexpr::symbol;
  auto with_kids = [&](const char* head, std::vector<Datum> prefix) {
    std::vector<Datum> items{symbol(head)};
    for (Datum& p : prefix) items.push_back(std::move(p));
    for (const NodePtr& c : n->children) items.push_back(node_to_datum(c));
    return list(std::move(items));
  };
  switch (n->kind) {
    case NodeKind::Seq: return with_kids("seq", {});
    case NodeKind::Par: return with_kids("par", {});
    case NodeKind::TryInParallel: return with_kids("try-in-parallel", {});
    case NodeKind::Loop: {
      Datum d = with_kids("loop", {});
      if (n->guard) {
        d.items.push_back(symbol(":until"));
        d.items.push_back(guard_to(*n->guard));
      }
      return d;
    }
    case NodeKind::WaitFor:
      return list({symbol("wait-for"), fluents::gate_to_datum(n->condition)});
    case NodeKind::Whenever:
      return with_kids("whenever", {fluents::gate_to_datum(n->condition)});
    case NodeKind::WithPolicy: return with_kids("with-policy", {});
    case NodeKind::WithValve:
      return with_kids("with-valve", {symbol(n->name), number(n->priority)});
    case NodeKind::WithLocalFluents: {
      std::vector<Datum> defs;
      for (const auto& [name, g] : n->defs) defs.push_back(list({symbol(name), fluents::gate_to_datum(g)}));
      return with_kids("with-local-fluents", {list(std::move(defs))});
    }
    case NodeKind::Named: return with_kids("named", {symbol(n->name)});
    case NodeKind::If: return with_kids("if", {guard_to(*n->guard)});
    case NodeKind::SetVar: return list({symbol("set"), symbol(n->name), symbol(n->value)});
    case NodeKind::Primitive: {
      const Term t = to_term(n->action);
      if (t.is_symbol()) return list({symbol(t.name())});
      return t.to_datum();
    }
  }
  return {};
}

std::string print_plan(const Plan& plan) {
  return sexpr::to_pretty_string(node_to_datum(plan.root)) + "\n";
}

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  // the canonical rendering is injective on ASTs
  return sexpr::to_string(node_to_datum(a)) == sexpr::to_string(node_to_datum(b));
}

NodePtr find_named(const NodePtr& root, std::string_view name) {
  if (root->kind == NodeKind::Named && root->name == name) return root;
  for (const NodePtr& c : root->children)
    if (NodePtr f = find_named(c, name)) return f;
  return nullptr;
}

}  // namespace hyproj::crp
