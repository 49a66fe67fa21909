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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyproj/fluents.hpp"
#include "hyproj/plan.hpp"

namespace hyproj::crp {

using TaskId = std::uint32_t;
using RequestId = std::uint32_t;
inline constexpr TaskId kNoTask = ~TaskId{0};

class DeadlockDetected : public Error {
 public:
  using Error::Error;
};

struct PrimitiveRequest {
  RequestId id;
  PrimitiveAction action;
  TaskId task;
};

struct RunningPrimitive {
  RequestId id;
  PrimitiveAction action;
  TaskId task;
  std::string path;
};

/// A wait-for or idle whenever condition after expansion of local and world
/// fluent definitions.
struct BlockedCondition {
  TaskId task;
  std::string path;  // AST address, e.g. "0.1.2"
  NodeKind kind;     // WaitFor or Whenever
  fluents::FluentNetwork network;
};

struct Wakeup {};
struct FluentChange {
  std::vector<std::pair<std::string, fluents::Value>> values;
  std::vector<std::string> pulses;
};
struct PrimitiveDone {
  RequestId id;
  bool success = true;
  std::string failure;
};
/// Satisfies one blocked condition regardless of its value; used when the
/// automaton is unfolded symbolically.
struct ForceCondition {
  TaskId task;
};

using InterpreterEvent = std::variant<Wakeup, FluentChange, PrimitiveDone, ForceCondition>;

struct StepResult {
  std::vector<PrimitiveRequest> started;
  std::vector<RequestId> aborted;
};

/// How conditions over moving state variables are treated.
enum class PositionalPolicy {
  Evaluate,  // read robot-x/robot-y from the fluent table
  Symbolic,  // always false unless forced
};

struct InterpreterOptions {
  fluents::ChangesModel changes = fluents::ChangesModel::navigation_default();
  std::string motion_process = "low-level-navigation-plan";
  PositionalPolicy positional = PositionalPolicy::Evaluate;
};

/// Sequential state machine simulating the plan's thread tree. Copyable.
class InterpreterState {
 public:
  using Definitions = std::map<std::string, fluents::GatePtr, std::less<>>;

  InterpreterState(Plan plan, Definitions world_fluents = {}, InterpreterOptions options = {});

  /// Advances all runnable threads to quiescence after applying `event`.
  StepResult step(const InterpreterEvent& event);

  /// Requests `valve` for the WithValve task `task`. Returns true if owned.
  bool acquire_valve(TaskId task, const std::string& valve, int priority);

  bool finished() const;
  std::vector<BlockedCondition> blocked_conditions() const;
  std::vector<RunningPrimitive> running_primitives() const;
  /// Tasks waiting for a valve.
  std::vector<TaskId> valve_waiters() const;
  std::optional<TaskId> valve_owner(const std::string& valve) const;

  const std::map<std::string, std::string>& variables() const { return variables_; }
  void set_variable(const std::string& name, const std::string& value) { variables_[name] = value; }
  std::optional<fluents::Value> fluent(std::string_view name) const;
  void set_fluent(const std::string& name, fluents::Value v) { fluents_[name] = v; }
  /// Primitive failures recorded so far, in order.
  const std::vector<std::pair<RequestId, std::string>>& failures() const { return failures_; }
  /// Interrupt fluents pulsed by preemption (latched until resumption).
  const std::vector<std::string>& interrupt_log() const { return interrupt_log_; }
  const Plan& plan() const { return plan_; }
  const InterpreterOptions& options() const { return options_; }

  /// Live leaves (blocked conditions, running primitives, valve waits) as a
  /// stable string; equal signatures mean equal control situations.
  std::string signature() const;

  /// True if the network reads a fluent changed by the motion process.
  bool is_positional(const fluents::FluentNetwork& net) const;

 private:
  enum class Status : std::uint8_t { Created, Active, Done, Cancelled };
  enum class ValveStatus : std::uint8_t { None, Waiting, Owner };

  struct Scope {
    std::vector<std::pair<std::string, fluents::GatePtr>> defs;
    int parent = -1;
    std::string interrupt;  // pulsed fluent standing for navigation-interrupted?
  };

  struct Task {
    TaskId id;
    TaskId parent;
    NodePtr node;
    std::string path;
    int scope;
    Status status = Status::Created;
    std::vector<TaskId> children;
    std::size_t pc = 0;
    fluents::GatePtr condition;  // expanded
    bool last_value = false;
    bool forced = false;
    TaskId body = kNoTask;
    ValveStatus valve = ValveStatus::None;
    std::uint64_t valve_seq = 0;
    bool preempted = false;
    std::optional<RequestId> request;
    bool needs_restart = false;
  };

  struct Valve {
    TaskId owner = kNoTask;
    int owner_priority = 0;
    std::vector<TaskId> waiters;
  };

  bool live(const Task& t) const { return t.status == Status::Created || t.status == Status::Active; }
  bool suspended(TaskId id) const;
  TaskId spawn(TaskId parent, const NodePtr& node, std::size_t index, int scope);
  bool advance(TaskId id);
  void complete(TaskId id);
  void cancel(TaskId id);
  void release_valve(TaskId id);
  void preempt(TaskId owner);
  void abort_primitives(TaskId id);
  bool eval(TaskId id, const fluents::GatePtr& g) const;
  bool eval_guard(TaskId id, const Guard& g) const;
  fluents::GatePtr expand_in_scope(const fluents::GatePtr& g, int scope) const;
  void issue(TaskId id);
  void check_deadlock() const;
  int valve_priority(TaskId id) const { return tasks_[id].node->priority; }

  Plan plan_;
  Definitions world_;
  InterpreterOptions options_;
  std::vector<Task> tasks_;
  std::vector<Scope> scopes_;
  std::map<std::string, Valve> valves_;
  std::map<std::string, std::string> variables_;
  std::map<std::string, fluents::Value, std::less<>> fluents_;
  std::map<std::string, TaskId, std::less<>> pulses_;  // name -> tasks below this id see it
  std::vector<std::pair<RequestId, std::string>> failures_;
  std::vector<std::string> interrupt_log_;
  std::map<RequestId, TaskId> requests_;
  RequestId next_request_ = 1;
  std::uint64_t next_valve_seq_ = 1;
  TaskId root_ = kNoTask;
  StepResult* out_ = nullptr;
  bool progress_ = false;
};

/// Functional form of InterpreterState::step.
std::pair<InterpreterState, StepResult> step_interpreter(InterpreterState state,
                                                         const InterpreterEvent& event);

/// Pending trigger networks of the interpreter for `process`.
std::vector<fluents::FluentNetwork> pending_networks(const InterpreterState& state,
                                                     const fluents::ChangesModel& changes,
                                                     std::string_view process);

}  // namespace hyproj::crp
