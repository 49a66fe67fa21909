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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hyproj/geom2d.hpp"
#include "hyproj/sexpr.hpp"

namespace hyproj::fluents {

using Value = std::variant<bool, double>;

enum class CmpOp { Lt, Le, Gt, Ge };
enum class GateKind { Const, Input, Dist, Cmp, And, Or, Not };

struct Gate;
using GatePtr = std::shared_ptr<const Gate>;

/// Immutable gate of a fluent network. Children are shared between networks.
struct Gate {
  GateKind kind = GateKind::Const;
  Value constant = false;        // Const
  std::string input;             // Input: fluent id
  geom2d::Point target{0, 0};    // Dist
  CmpOp op = CmpOp::Lt;          // Cmp
  double threshold = 0.0;        // Cmp
  std::vector<GatePtr> children; // Dist: (x, y); Cmp: (expr); And/Or: any; Not: one
};

GatePtr constant(Value v);
GatePtr input(std::string fluent);
GatePtr dist(GatePtr x, GatePtr y, const geom2d::Point& target);
GatePtr cmp(CmpOp op, GatePtr expr, double threshold);
GatePtr all_of(std::vector<GatePtr> parts);
GatePtr any_of(std::vector<GatePtr> parts);
GatePtr negate(GatePtr part);

class UnboundInput : public Error {
 public:
  explicit UnboundInput(std::string id);
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class NotCompilable : public Error {
 public:
  using Error::Error;
};

class TypeMismatch : public Error {
 public:
  using Error::Error;
};

/// A dataflow circuit whose root computes the boolean value of `output`.
class FluentNetwork {
 public:
  FluentNetwork() = default;
  FluentNetwork(std::string output, GatePtr root) : output_(std::move(output)), root_(std::move(root)) {}

  const std::string& output() const { return output_; }
  const GatePtr& root() const { return root_; }

  /// Input fluent ids in first-use order.
  std::vector<std::string> inputs() const;

  friend bool operator==(const FluentNetwork& a, const FluentNetwork& b);

 private:
  std::string output_;
  GatePtr root_;
};

bool structurally_equal(const GatePtr& a, const GatePtr& b);

using Bindings = std::map<std::string, Value, std::less<>>;
using Resolver = std::function<std::optional<Value>(std::string_view)>;

Value eval_gate(const Gate& g, const Resolver& resolve);
bool eval_network(const FluentNetwork& net, const Resolver& resolve);
bool eval_network(const FluentNetwork& net, const Bindings& bindings);

/// Replaces inputs named by `scope` with their definitions, recursively.
/// Throws Error on cyclic definitions.
GatePtr expand(const GatePtr& g, const std::function<GatePtr(std::string_view)>& scope);

/// Which state variable each measuring fluent mirrors, and which process
/// kinds change which state variables.
struct ChangesModel {
  std::vector<std::pair<std::string, std::string>> changes;   // (process, variable)
  std::vector<std::pair<std::string, std::string>> measures;  // (fluent, variable)

  /// changes(low-level-navigation-plan, x|y), measures(robot-x, x), measures(robot-y, y).
  static ChangesModel navigation_default();

  std::optional<std::string> measured_variable(std::string_view fluent) const;
  bool process_changes(std::string_view process, std::string_view variable) const;
};

/// True if `net` reads (transitively, after expansion) a fluent measuring a
/// state variable that `process` changes.
bool depends_on_process(const FluentNetwork& net, const ChangesModel& model,
                        std::string_view process);

/// A condition some thread is blocked on or triggered by.
struct PendingCondition {
  std::string id;
  FluentNetwork network;
};

std::vector<FluentNetwork> pending_networks(const std::vector<PendingCondition>& blocked,
                                            const ChangesModel& model, std::string_view process);

/// Compiles a network over the x/y measuring fluents into a region with the
/// same membership. Throws NotCompilable otherwise.
geom2d::Region compile_to_region(const FluentNetwork& net,
                                 const ChangesModel& model = ChangesModel::navigation_default());

/// Network literal syntax. `names` optionally records symbols used.
GatePtr gate_from_datum(const sexpr::Datum& d);
sexpr::Datum gate_to_datum(const GatePtr& g);
FluentNetwork parse_network(std::string_view text, std::string output = "anonymous");
std::string to_string(const GatePtr& g);

const char* to_string(CmpOp op);

}  // namespace hyproj::fluents
