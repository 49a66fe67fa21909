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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hyproj/fluents.hpp"
#include "hyproj/geom2d.hpp"
#include "hyproj/term.hpp"

namespace hyproj::crp {

using sexpr::SyntaxError;

enum class TravelMode { Office, Hallway, Doorway };

const char* to_string(TravelMode m);
std::optional<TravelMode> travel_mode_from_string(std::string_view s);

struct MoveTo {
  geom2d::Point target;
};
struct SetNavigationMode {
  TravelMode mode;
};
struct GoTo {
  std::string location;
};
struct LowLevelNavPlan {
  std::string dest;
  std::string id;
};
struct PickUp {
  std::string object;
};
struct PutDown {
  std::string object;
};
struct EstimateDoorAngle {};
struct LookFor {
  Term description;
  std::string camera;
};

using PrimitiveAction = std::variant<MoveTo, SetNavigationMode, GoTo, LowLevelNavPlan, PickUp,
                                     PutDown, EstimateDoorAngle, LookFor>;

/// True for actions that move the robot.
bool is_motion(const PrimitiveAction& a);
std::string to_string(const PrimitiveAction& a);
Term to_term(const PrimitiveAction& a);

/// Condition of `if` and `loop :until`: a variable test `(is VAR VALUE)` or a
/// fluent network.
struct Guard {
  std::string variable;  // set for variable tests
  std::string value;
  fluents::GatePtr network;

  bool is_var_test() const { return !network; }
};

enum class NodeKind {
  Seq,
  Par,
  TryInParallel,
  Loop,
  WaitFor,
  Whenever,
  WithPolicy,
  WithValve,
  WithLocalFluents,
  Named,
  If,
  SetVar,
  Primitive,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Plan AST node. Field use depends on `kind`:
///  Seq/Par/TryInParallel: children (non-empty);
///  Loop: children[0] body, optional `until`;
///  WaitFor: condition;  Whenever: condition, children[0] body;
///  WithPolicy: children = {policy, body};
///  WithValve: name (valve), priority, children[0];
///  WithLocalFluents: defs, children[0];  Named: name, children[0];
///  If: guard, children[0];  SetVar: name (variable), value;  Primitive: action.
struct Node {
  NodeKind kind = NodeKind::Seq;
  std::vector<NodePtr> children;
  fluents::GatePtr condition;
  std::optional<Guard> guard;
  std::string name;
  std::string value;
  int priority = 1;
  std::vector<std::pair<std::string, fluents::GatePtr>> defs;
  PrimitiveAction action = EstimateDoorAngle{};

  const NodePtr& body() const { return children.back(); }
};

struct Plan {
  NodePtr root;
};

/// Valid values of execution-state variables.
inline constexpr std::string_view kExecutionStates[] = {"to-be-acquired", "loaded", "delivered"};

Plan parse_plan(std::string_view text);
NodePtr node_from_datum(const sexpr::Datum& d);
sexpr::Datum node_to_datum(const NodePtr& n);
std::string print_plan(const Plan& plan);

bool structurally_equal(const NodePtr& a, const NodePtr& b);
inline bool structurally_equal(const Plan& a, const Plan& b) {
  return structurally_equal(a.root, b.root);
}

/// The Named node called `name`, or nullptr.
NodePtr find_named(const NodePtr& root, std::string_view name);

/// Node constructors for building plans programmatically.
NodePtr seq(std::vector<NodePtr> steps);
NodePtr par(std::vector<NodePtr> steps);
NodePtr try_in_parallel(std::vector<NodePtr> steps);
NodePtr loop(NodePtr body, std::optional<Guard> until = std::nullopt);
NodePtr wait_for(fluents::GatePtr condition);
NodePtr whenever(fluents::GatePtr condition, NodePtr body);
NodePtr with_policy(NodePtr policy, NodePtr body);
NodePtr with_valve(std::string valve, int priority, NodePtr body);
NodePtr with_local_fluents(std::vector<std::pair<std::string, fluents::GatePtr>> defs, NodePtr body);
NodePtr named(std::string name, NodePtr body);
NodePtr if_then(Guard guard, NodePtr body);
NodePtr set_var(std::string variable, std::string value);
NodePtr primitive(PrimitiveAction action);

Guard var_test(std::string variable, std::string value);
Guard net_guard(fluents::GatePtr network);

}  // namespace hyproj::crp
