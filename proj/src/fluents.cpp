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

#include "hyproj/fluents.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace hyproj::fluents {

namespace {

GatePtr make(Gate g) { return std::make_shared<const Gate>(std::move(g)); }

}  // namespace

GatePtr constant(Value v) {
  Gate g;
  g.kind = GateKind::Const;
  g.constant = v;
  return make(std::move(g));
}

GatePtr input(std::string fluent) {
  Gate g;
  g.kind = GateKind::Input;
  g.input = std::move(fluent);
  return make(std::move(g));
}

GatePtr dist(GatePtr x, GatePtr y, const geom2d::Point& target) {
  Gate g;
  g.kind = GateKind::Dist;
  g.target = target;
  g.children = {std::move(x), std::move(y)};
  return make(std::move(g));
}

GatePtr cmp(CmpOp op, GatePtr expr, double threshold) {
  Gate g;
  g.kind = GateKind::Cmp;
  g.op = op;
  g.threshold = threshold;
  g.children = {std::move(expr)};
  return make(std::move(g));
}

GatePtr all_of(std::vector<GatePtr> parts) {
  Gate g;
  g.kind = GateKind::And;
  g.children = std::move(parts);
  return make(std::move(g));
}

GatePtr any_of(std::vector<GatePtr> parts) {
  Gate g;
  g.kind = GateKind::Or;
  g.children = std::move(parts);
  return make(std::move(g));
}

GatePtr negate(GatePtr part) {
  Gate g;
  g.kind = GateKind::Not;
  g.children = {std::move(part)};
  return make(std::move(g));
}

UnboundInput::UnboundInput(std::string id)
    : Error("unbound fluent input: " + id), id_(std::move(id)) {}

namespace {

void collect_inputs(const GatePtr& g, std::vector<std::string>& out) {
  if (g->kind == GateKind::Input) {
    if (std::find(out.begin(), out.end(), g->input) == out.end()) out.push_back(g->input);
    return;
  }
  for (const GatePtr& c : g->children) collect_inputs(c, out);
}

bool as_bool(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw TypeMismatch("boolean gate applied to a numeric value");
}

double as_real(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw TypeMismatch("numeric gate applied to a boolean value");
}

}  // namespace

std::vector<std::string> FluentNetwork::inputs() const {
  std::vector<std::string> out;
  if (root_) collect_inputs(root_, out);
  return out;
}

bool structurally_equal(const GatePtr& a, const GatePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case GateKind::Const:
      if (a->constant != b->constant) return false;
      break;
    case GateKind::Input:
      if (a->input != b->input) return false;
      break;
    case GateKind::Dist:
      if (a->target != b->target) return false;
      break;
    case GateKind::Cmp:
      if (a->op != b->op || a->threshold != b->threshold) return false;
      break;
    default:
      break;
  }
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  return true;
}

bool operator==(const FluentNetwork& a, const FluentNetwork& b) {
  return a.output_ == b.output_ && structurally_equal(a.root_, b.root_);
}

Value eval_gate(const Gate& g, const Resolver& resolve) {
  switch (g.kind) {
    case GateKind::Const:
      return g.constant;
    case GateKind::Input: {
      auto v = resolve(g.input);
      if (!v) throw UnboundInput(g.input);
      return *v;
    }
    case GateKind::Dist: {
      const geom2d::Point p(as_real(eval_gate(*g.children[0], resolve)),
                            as_real(eval_gate(*g.children[1], resolve)));
      return geom2d::distance(p, g.target);
    }
    case GateKind::Cmp: {
      const double v = as_real(eval_gate(*g.children[0], resolve));
      switch (g.op) {
        case CmpOp::Lt: return v < g.threshold;
        case CmpOp::Le: return v <= g.threshold;
        case CmpOp::Gt: return v > g.threshold;
        case CmpOp::Ge: return v >= g.threshold;
      }
      return false;
    }
    case GateKind::And:
      for (const GatePtr& c : g.children)
        if (!as_bool(eval_gate(*c, resolve))) return false;
      return true;
    case GateKind::Or:
      for (const GatePtr& c : g.children)
        if (as_bool(eval_gate(*c, resolve))) return true;
      return false;
    case GateKind::Not:
      return !as_bool(eval_gate(*g.children[0], resolve));
  }
  return false;
}

bool eval_network(const FluentNetwork& net, const Resolver& resolve) {
  return as_bool(eval_gate(*net.root(), resolve));
}

bool eval_network(const FluentNetwork& net, const Bindings& bindings) {
  return eval_network(net, [&](std::string_view id) -> std::optional<Value> {
    auto it = bindings.find(id);
    if (it == bindings.end()) return std::nullopt;
    return it->second;
  });
}

namespace {

GatePtr expand_rec(const GatePtr& g, const std::function<GatePtr(std::string_view)>& scope,
                   int depth) {
  if (depth > 64) throw Error("fluent definitions nest too deeply (cycle?)");
  if (g->kind == GateKind::Input) {
    if (GatePtr def = scope(g->input)) return expand_rec(def, scope, depth + 1);
    return g;
  }
  if (g->children.empty()) return g;
  Gate copy = *g;
  bool changed = false;
  for (GatePtr& c : copy.children) {
    GatePtr e = expand_rec(c, scope, depth);
    changed = changed || e != c;
    c = std::move(e);
  }
  return changed ? make(std::move(copy)) : g;
}

}  // namespace

GatePtr expand(const GatePtr& g, const std::function<GatePtr(std::string_view)>& scope) {
  return expand_rec(g, scope, 0);
}

ChangesModel ChangesModel::navigation_default() {
  ChangesModel m;
  m.changes = {{"low-level-navigation-plan", "x"}, {"low-level-navigation-plan", "y"}};
  m.measures = {{"robot-x", "x"}, {"robot-y", "y"}};
  return m;
}

std::optional<std::string> ChangesModel::measured_variable(std::string_view fluent) const {
  for (const auto& [f, v] : measures)
    if (f == fluent) return v;
  return std::nullopt;
}

bool ChangesModel::process_changes(std::string_view process, std::string_view variable) const {
  for (const auto& [p, v] : changes)
    if (p == process && v == variable) return true;
  return false;
}

bool depends_on_process(const FluentNetwork& net, const ChangesModel& model,
                        std::string_view process) {
  for (const std::string& in : net.inputs()) {
    auto var = model.measured_variable(in);
    if (var && model.process_changes(process, *var)) return true;
  }
  return false;
}

std::vector<FluentNetwork> pending_networks(const std::vector<PendingCondition>& blocked,
                                            const ChangesModel& model, std::string_view process) {
  std::vector<FluentNetwork> out;
  for (const PendingCondition& c : blocked)
    if (depends_on_process(c.network, model, process)) out.push_back(c.network);
  return out;
}

namespace {

geom2d::Region compile_gate(const GatePtr& g, const ChangesModel& model) {
  using namespace geom2d;
  auto axis_of = [&](const GatePtr& e) -> std::optional<Axis> {
    if (e->kind != GateKind::Input) return std::nullopt;
    auto var = model.measured_variable(e->input);
    if (var == "x") return Axis::X;
    if (var == "y") return Axis::Y;
    return std::nullopt;
  };
  switch (g->kind) {
    case GateKind::Const:
      if (std::holds_alternative<bool>(g->constant))
        return std::get<bool>(g->constant) ? intersection_of({}) : union_of({});
      throw NotCompilable("numeric constant used as a condition");
    case GateKind::Input:
      throw NotCompilable("non-positional input '" + g->input + "'");
    case GateKind::Dist:
      throw NotCompilable("distance used as a condition");
    case GateKind::Cmp: {
      const GatePtr& e = g->children[0];
      const bool strict = g->op == CmpOp::Lt || g->op == CmpOp::Gt;
      const bool below = g->op == CmpOp::Lt || g->op == CmpOp::Le;
      if (auto axis = axis_of(e))
        return half_plane(*axis, g->threshold, below ? Side::Below : Side::Above, strict);
      if (e->kind == GateKind::Dist && axis_of(e->children[0]) == Axis::X &&
          axis_of(e->children[1]) == Axis::Y) {
        if (!(g->threshold > 0.0)) throw NotCompilable("distance threshold must be positive");
        // d < r is the open disk, d <= r the closed one, and > / >= their complements.
        if (below) return disk(e->target, g->threshold, !strict);
        return complement(disk(e->target, g->threshold, strict));
      }
      throw NotCompilable("comparison over a non-positional expression");
    }
    case GateKind::And:
    case GateKind::Or: {
      std::vector<Region> parts;
      for (const GatePtr& c : g->children) parts.push_back(compile_gate(c, model));
      return g->kind == GateKind::And ? intersection_of(std::move(parts))
                                      : union_of(std::move(parts));
    }
    case GateKind::Not:
      return complement(compile_gate(g->children[0], model));
  }
  throw NotCompilable("unknown gate");
}

}  // namespace

geom2d::Region compile_to_region(const FluentNetwork& net, const ChangesModel& model) {
  return compile_gate(net.root(), model);
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {

GatePtr numeric_from_datum(const sexpr::Datum& d) {
  if (d.is_number()) return constant(d.number);
  if (d.is_symbol()) return input(d.text);
  return gate_from_datum(d);
}

double number_arg(const sexpr::Datum& d) {
  if (!d.is_number()) sexpr::fail(d, "number");
  return d.number;
}

}  // namespace

GatePtr gate_from_datum(const sexpr::Datum& d) {
  if (d.is_symbol("true")) return constant(true);
  if (d.is_symbol("false")) return constant(false);
  if (d.is_number()) return constant(d.number);
  if (d.is_symbol()) return input(d.text);
  const std::string_view h = d.head();
  const auto& it = d.items;
  if (h == "fluent") {
    if (it.size() != 2 || !it[1].is_symbol()) sexpr::fail(d, "(fluent NAME)");
    return input(it[1].text);
  }
  if (h == "dist") {
    if (it.size() != 5) sexpr::fail(d, "(dist X Y TX TY)");
    return dist(numeric_from_datum(it[1]), numeric_from_datum(it[2]),
                {number_arg(it[3]), number_arg(it[4])});
  }
  if (h == "reached") {
    if (it.size() != 3) sexpr::fail(d, "(reached X Y)");
    return cmp(CmpOp::Le, dist(input("robot-x"), input("robot-y"), {number_arg(it[1]), number_arg(it[2])}),
               1.0);
  }
  if (h == "<" || h == "<=" || h == ">" || h == ">=") {
    if (it.size() != 3) sexpr::fail(d, "(OP EXPR NUMBER)");
    const CmpOp op = h == "<" ? CmpOp::Lt : h == "<=" ? CmpOp::Le : h == ">" ? CmpOp::Gt : CmpOp::Ge;
    return cmp(op, numeric_from_datum(it[1]), number_arg(it[2]));
  }
  if (h == "and" || h == "or") {
    std::vector<GatePtr> parts;
    for (std::size_t i = 1; i < it.size(); ++i) parts.push_back(gate_from_datum(it[i]));
    return h == "and" ? all_of(std::move(parts)) : any_of(std::move(parts));
  }
  if (h == "not") {
    if (it.size() != 2) sexpr::fail(d, "(not NET)");
    return negate(gate_from_datum(it[1]));
  }
  sexpr::fail(d, "fluent network");
}

sexpr::Datum gate_to_datum(const GatePtr& g) {
  using sexpr::list;
  using sexpr::number;
  using sexpr::symbol;
  switch (g->kind) {
    case GateKind::Const:
      if (const bool* b = std::get_if<bool>(&g->constant)) return symbol(*b ? "true" : "false");
      return number(std::get<double>(g->constant));
    case GateKind::Input:
      return list({symbol("fluent"), symbol(g->input)});
    case GateKind::Dist: {
      auto coord = [](const GatePtr& c) {
        return c->kind == GateKind::Input ? symbol(c->input) : gate_to_datum(c);
      };
      return list({symbol("dist"), coord(g->children[0]), coord(g->children[1]),
                   number(g->target.x()), number(g->target.y())});
    }
    case GateKind::Cmp:
      return list({symbol(to_string(g->op)), gate_to_datum(g->children[0]), number(g->threshold)});
    case GateKind::And:
    case GateKind::Or: {
      std::vector<sexpr::Datum> items{symbol(g->kind == GateKind::And ? "and" : "or")};
      for (const GatePtr& c : g->children) items.push_back(gate_to_datum(c));
      return list(std::move(items));
    }
    case GateKind::Not:
      return list({symbol("not"), gate_to_datum(g->children[0])});
  }
  return {};
}

FluentNetwork parse_network(std::string_view text, std::string output) {
  return FluentNetwork(std::move(output), gate_from_datum(sexpr::read_one(text)));
}

std::string to_string(const GatePtr& g) { return sexpr::to_string(gate_to_datum(g)); }

}  // namespace hyproj::fluents
