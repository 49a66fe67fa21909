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

#include "hyproj/interpreter.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace hyproj::crp {

namespace {

constexpr std::string_view kInterruptFluent = "navigation-interrupted?";
constexpr std::string_view kGoToCompleted = "go-to-completed?";
constexpr int kMaxLoopIterationsPerStep = 100000;

}  // namespace

InterpreterState::InterpreterState(Plan plan, Definitions world_fluents, InterpreterOptions options)
    : plan_(std::move(plan)), world_(std::move(world_fluents)), options_(std::move(options)) {
  scopes_.push_back(Scope{});
  fluents_[std::string(kGoToCompleted)] = false;
  root_ = spawn(kNoTask, plan_.root, 0, 0);
}

std::optional<fluents::Value> InterpreterState::fluent(std::string_view name) const {
  auto it = fluents_.find(name);
  if (it == fluents_.end()) return std::nullopt;
  return it->second;
}

TaskId InterpreterState::spawn(TaskId parent, const NodePtr& node, std::size_t index, int scope) {
  Task t;
  t.id = static_cast<TaskId>(tasks_.size());
  t.parent = parent;
  t.node = node;
  t.path = parent == kNoTask ? "0" : tasks_[parent].path + "." + std::to_string(index);
  t.scope = scope;
  tasks_.push_back(std::move(t));
  if (parent != kNoTask) tasks_[parent].children.push_back(tasks_.back().id);
  progress_ = true;
  return tasks_.back().id;
}

bool InterpreterState::suspended(TaskId id) const {
  for (TaskId cur = id; cur != kNoTask; cur = tasks_[cur].parent)
    if (tasks_[cur].valve == ValveStatus::Waiting) return true;
  return false;
}

bool InterpreterState::is_positional(const fluents::FluentNetwork& net) const {
  return fluents::depends_on_process(net, options_.changes, options_.motion_process);
}

fluents::GatePtr InterpreterState::expand_in_scope(const fluents::GatePtr& g, int scope) const {
  return fluents::expand(g, [&](std::string_view name) -> fluents::GatePtr {
    for (int s = scope; s >= 0; s = scopes_[s].parent) {
      const Scope& sc = scopes_[s];
      if (name == kInterruptFluent && !sc.interrupt.empty()) return fluents::input(sc.interrupt);
      for (auto it = sc.defs.rbegin(); it != sc.defs.rend(); ++it)
        if (it->first == name) return it->second;
    }
    auto w = world_.find(name);
    return w == world_.end() ? nullptr : w->second;
  });
}

bool InterpreterState::eval(TaskId id, const fluents::GatePtr& g) const {
  if (options_.positional == PositionalPolicy::Symbolic &&
      is_positional(fluents::FluentNetwork("", g)))
    return false;
  return fluents::eval_network(
      fluents::FluentNetwork("", g), [&](std::string_view name) -> std::optional<fluents::Value> {
        auto p = pulses_.find(name);
        if (p != pulses_.end() && id < p->second) return true;
        auto it = fluents_.find(name);
        if (it != fluents_.end()) return it->second;
        if (name.rfind(kInterruptFluent, 0) == 0) return false;
        return std::nullopt;
      });
}

bool InterpreterState::eval_guard(TaskId id, const Guard& g) const {
  if (g.is_var_test()) {
    auto it = variables_.find(g.variable);
    return it != variables_.end() && it->second == g.value;
  }
  return eval(id, expand_in_scope(g.network, tasks_[id].scope));
}

void InterpreterState::issue(TaskId id) {
  Task& t = tasks_[id];
  const RequestId rid = next_request_++;
  t.request = rid;
  t.needs_restart = false;
  requests_[rid] = id;
  if (is_motion(t.node->action)) fluents_[std::string(kGoToCompleted)] = false;
  out_->started.push_back({rid, t.node->action, id});
  progress_ = true;
}

void InterpreterState::complete(TaskId id) {
  tasks_[id].status = Status::Done;
  progress_ = true;
}

void InterpreterState::abort_primitives(TaskId id) {
  Task& t = tasks_[id];
  if (!live(t)) return;
  if (t.node->kind == NodeKind::Primitive && t.request) {
    if (out_) out_->aborted.push_back(*t.request);
    requests_.erase(*t.request);
    tasks_[id].request.reset();
    tasks_[id].needs_restart = true;
  }
  for (TaskId c : std::vector<TaskId>(tasks_[id].children)) abort_primitives(c);
}

void InterpreterState::cancel(TaskId id) {
  if (!live(tasks_[id])) return;
  for (TaskId c : std::vector<TaskId>(tasks_[id].children)) cancel(c);
  Task& t = tasks_[id];
  if (t.node->kind == NodeKind::Primitive && t.request) {
    if (out_) out_->aborted.push_back(*t.request);
    requests_.erase(*t.request);
    t.request.reset();
  }
  if (t.node->kind == NodeKind::WithValve) release_valve(id);
  tasks_[id].status = Status::Cancelled;
  progress_ = true;
}

bool InterpreterState::acquire_valve(TaskId id, const std::string& name, int priority) {
  Valve& v = valves_[name];
  // re-entrant: an enclosing owner already holds the valve
  for (TaskId a = tasks_[id].parent; a != kNoTask; a = tasks_[a].parent)
    if (v.owner == a) {
      tasks_[id].valve = ValveStatus::Owner;
      return true;
    }
  Task& t = tasks_[id];
  t.valve_seq = next_valve_seq_++;
  if (v.owner == kNoTask) {
    v.owner = id;
    v.owner_priority = priority;
    t.valve = ValveStatus::Owner;
    return true;
  }
  if (priority > v.owner_priority) {
    const TaskId old = v.owner;
    preempt(old);
    Valve& vv = valves_[name];
    vv.waiters.push_back(old);
    vv.owner = id;
    vv.owner_priority = priority;
    tasks_[id].valve = ValveStatus::Owner;
    return true;
  }
  t.valve = ValveStatus::Waiting;
  v.waiters.push_back(id);
  return false;
}

void InterpreterState::preempt(TaskId owner) {
  abort_primitives(owner);
  Task& t = tasks_[owner];
  t.valve = ValveStatus::Waiting;
  progress_ = true;
  if (t.body == kNoTask) return;
  t.preempted = true;
  interrupt_log_.push_back(scopes_[tasks_[t.body].scope].interrupt);
}

void InterpreterState::release_valve(TaskId id) {
  Task& t = tasks_[id];
  auto vit = valves_.find(t.node->name);
  if (vit == valves_.end()) return;
  Valve& v = vit->second;
  auto& w = v.waiters;
  w.erase(std::remove(w.begin(), w.end(), id), w.end());
  if (v.owner != id) return;
  v.owner = kNoTask;
  if (w.empty()) return;
  auto best = std::min_element(w.begin(), w.end(), [&](TaskId a, TaskId b) {
    const int pa = valve_priority(a), pb = valve_priority(b);
    if (pa != pb) return pa > pb;
    return tasks_[a].valve_seq < tasks_[b].valve_seq;
  });
  const TaskId next = *best;
  w.erase(best);
  v.owner = next;
  v.owner_priority = valve_priority(next);
  Task& n = tasks_[next];
  n.valve = ValveStatus::Owner;
  if (n.preempted) {
    n.preempted = false;
    // deliver the latched interrupt to the threads that were suspended
    pulses_[scopes_[tasks_[n.body].scope].interrupt] = static_cast<TaskId>(tasks_.size());
  }
  progress_ = true;
}

bool InterpreterState::advance(TaskId id) {
  if (!live(tasks_[id])) return false;
  const NodePtr node = tasks_[id].node;
  const bool starting = tasks_[id].status == Status::Created;
  if (starting) {
    tasks_[id].status = Status::Active;
    progress_ = true;
  }
  const int scope = tasks_[id].scope;
  auto done = [&](TaskId c) { return tasks_[c].status == Status::Done; };
  auto gone = [&](TaskId c) { return !live(tasks_[c]); };

  switch (node->kind) {
    case NodeKind::Seq: {
      if (starting) spawn(id, node->children[0], 0, scope);
      for (;;) {
        const TaskId cur = tasks_[id].children[tasks_[id].pc];
        advance(cur);
        if (!done(cur)) break;
        const std::size_t next = ++tasks_[id].pc;
        if (next == node->children.size()) {
          complete(id);
          break;
        }
        spawn(id, node->children[next], next, scope);
      }
      break;
    }
    case NodeKind::Par: {
      if (starting)
        for (std::size_t i = 0; i < node->children.size(); ++i) spawn(id, node->children[i], i, scope);
      bool all = true;
      for (std::size_t i = 0; i < node->children.size(); ++i) {
        const TaskId c = tasks_[id].children[i];
        advance(c);
        all = all && done(c);
      }
      if (all) complete(id);
      break;
    }
    case NodeKind::TryInParallel: {
      if (starting)
        for (std::size_t i = 0; i < node->children.size(); ++i) spawn(id, node->children[i], i, scope);
      for (std::size_t i = 0; i < node->children.size(); ++i) {
        const TaskId c = tasks_[id].children[i];
        advance(c);
        if (done(c)) {
          for (std::size_t j = 0; j < node->children.size(); ++j) cancel(tasks_[id].children[j]);
          complete(id);
          break;
        }
      }
      break;
    }
    case NodeKind::Loop: {
      if (starting) tasks_[id].body = spawn(id, node->children[0], 0, scope);
      for (int spins = 0;; ++spins) {
        const TaskId b = tasks_[id].body;
        advance(b);
        if (!done(b)) break;
        if (node->guard && eval_guard(id, *node->guard)) {
          complete(id);
          break;
        }
        if (spins > kMaxLoopIterationsPerStep)
          throw Error("loop at " + tasks_[id].path + " iterates without blocking");
        tasks_[id].body = spawn(id, node->children[0], 0, scope);
      }
      break;
    }
    case NodeKind::WaitFor: {
      if (starting) tasks_[id].condition = expand_in_scope(node->condition, scope);
      if (tasks_[id].forced || eval(id, tasks_[id].condition)) complete(id);
      break;
    }
    case NodeKind::Whenever: {
      if (starting) tasks_[id].condition = expand_in_scope(node->condition, scope);
      if (tasks_[id].body != kNoTask) {
        advance(tasks_[id].body);
        if (gone(tasks_[id].body)) {
          tasks_[id].body = kNoTask;
          progress_ = true;
        }
      }
      const bool v = tasks_[id].forced || eval(id, tasks_[id].condition);
      tasks_[id].forced = false;
      if (v && !tasks_[id].last_value && tasks_[id].body == kNoTask) {
        tasks_[id].body = spawn(id, node->children[0], 0, scope);
        advance(tasks_[id].body);
        if (gone(tasks_[id].body)) tasks_[id].body = kNoTask;
      }
      tasks_[id].last_value = v;
      break;
    }
    case NodeKind::WithPolicy: {
      if (starting) {
        spawn(id, node->children[0], 0, scope);
        spawn(id, node->children[1], 1, scope);
      }
      const TaskId policy = tasks_[id].children[0], body = tasks_[id].children[1];
      advance(policy);
      advance(body);
      if (done(body)) {
        cancel(policy);
        complete(id);
      }
      break;
    }
    case NodeKind::WithValve: {
      if (starting) acquire_valve(id, node->name, node->priority);
      if (tasks_[id].valve != ValveStatus::Owner) break;
      if (tasks_[id].body == kNoTask) {
        Scope s;
        s.parent = scope;
        s.interrupt = fmt::format("{}#{}", kInterruptFluent, id);
        scopes_.push_back(std::move(s));
        tasks_[id].body = spawn(id, node->children[0], 0, static_cast<int>(scopes_.size()) - 1);
      }
      advance(tasks_[id].body);
      if (done(tasks_[id].body)) {
        release_valve(id);
        complete(id);
      }
      break;
    }
    case NodeKind::WithLocalFluents: {
      if (starting) {
        Scope s;
        s.parent = scope;
        scopes_.push_back(s);
        const int inner = static_cast<int>(scopes_.size()) - 1;
        for (const auto& [name, g] : node->defs) {
          fluents::GatePtr e = expand_in_scope(g, inner);
          scopes_[inner].defs.emplace_back(name, std::move(e));
        }
        tasks_[id].body = spawn(id, node->children[0], 0, inner);
      }
      advance(tasks_[id].body);
      if (done(tasks_[id].body)) complete(id);
      break;
    }
    case NodeKind::Named: {
      if (starting) tasks_[id].body = spawn(id, node->children[0], 0, scope);
      advance(tasks_[id].body);
      if (done(tasks_[id].body)) complete(id);
      break;
    }
    case NodeKind::If: {
      if (starting) {
        if (!eval_guard(id, *node->guard)) {
          complete(id);
          break;
        }
        tasks_[id].body = spawn(id, node->children[0], 0, scope);
      }
      advance(tasks_[id].body);
      if (done(tasks_[id].body)) complete(id);
      break;
    }
    case NodeKind::SetVar:
      variables_[node->name] = node->value;
      complete(id);
      break;
    case NodeKind::Primitive:
      if (!tasks_[id].request) issue(id);
      break;
  }
  return true;
}

StepResult InterpreterState::step(const InterpreterEvent& event) {
  StepResult result;
  out_ = &result;
  const TaskId visible_below = static_cast<TaskId>(tasks_.size());
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, FluentChange>) {
          for (const auto& [name, v] : e.values) fluents_[name] = v;
          for (const std::string& p : e.pulses) pulses_[p] = visible_below;
        } else if constexpr (std::is_same_v<E, PrimitiveDone>) {
          auto it = requests_.find(e.id);
          if (it == requests_.end()) return;
          const TaskId tid = it->second;
          requests_.erase(it);
          Task& t = tasks_[tid];
          t.request.reset();
          if (!e.success) failures_.emplace_back(e.id, e.failure);
          if (is_motion(t.node->action)) fluents_[std::string(kGoToCompleted)] = true;
          if (live(t)) complete(tid);
        } else if constexpr (std::is_same_v<E, ForceCondition>) {
          if (e.task < tasks_.size()) tasks_[e.task].forced = true;
        }
      },
      event);

  try {
    int passes = 0;
    do {
      progress_ = false;
      advance(root_);
      if (++passes > kMaxLoopIterationsPerStep) throw Error("interpreter does not reach quiescence");
    } while (progress_);
  } catch (...) {
    out_ = nullptr;
    pulses_.clear();
    throw;
  }
  pulses_.clear();
  out_ = nullptr;
  check_deadlock();
  return result;
}

void InterpreterState::check_deadlock() const {
  auto waiting_descendant = [&](TaskId root) -> TaskId {
    std::vector<TaskId> stack{root};
    while (!stack.empty()) {
      const TaskId cur = stack.back();
      stack.pop_back();
      const Task& t = tasks_[cur];
      if (!live(t)) continue;
      if (cur != root && t.node->kind == NodeKind::WithValve && t.valve == ValveStatus::Waiting)
        return cur;
      for (TaskId c : t.children) stack.push_back(c);
    }
    return kNoTask;
  };
  for (const auto& [name, valve] : valves_) {
    for (TaskId w : valve.waiters) {
      if (!live(tasks_[w])) continue;
      std::set<TaskId> seen{w};
      TaskId cur = w;
      for (;;) {
        auto vit = valves_.find(tasks_[cur].node->name);
        if (vit == valves_.end() || vit->second.owner == kNoTask) break;
        const TaskId d = waiting_descendant(vit->second.owner);
        if (d == kNoTask) break;
        if (d == w)
          throw DeadlockDetected("threads wait on valves held inside the waiting set (valve '" +
                                 name + "')");
        if (!seen.insert(d).second) break;
        cur = d;
      }
    }
  }
}

bool InterpreterState::finished() const { return !live(tasks_[root_]); }

std::vector<BlockedCondition> InterpreterState::blocked_conditions() const {
  std::vector<BlockedCondition> out;
  std::vector<TaskId> stack{root_};
  while (!stack.empty()) {
    const TaskId cur = stack.back();
    stack.pop_back();
    const Task& t = tasks_[cur];
    if (t.status != Status::Active) continue;
    if (t.node->kind == NodeKind::WithValve && t.valve == ValveStatus::Waiting) continue;
    const bool wait = t.node->kind == NodeKind::WaitFor;
    const bool idle_whenever = t.node->kind == NodeKind::Whenever && t.body == kNoTask;
    if ((wait || idle_whenever) && t.condition) {
      std::string name = t.node->condition->kind == fluents::GateKind::Input
                             ? t.node->condition->input
                             : "condition@" + t.path;
      out.push_back({cur, t.path, t.node->kind, fluents::FluentNetwork(name, t.condition)});
    }
    for (auto it = t.children.rbegin(); it != t.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<RunningPrimitive> InterpreterState::running_primitives() const {
  std::vector<RunningPrimitive> out;
  std::vector<TaskId> stack{root_};
  while (!stack.empty()) {
    const TaskId cur = stack.back();
    stack.pop_back();
    const Task& t = tasks_[cur];
    if (t.status != Status::Active) continue;
    if (t.node->kind == NodeKind::WithValve && t.valve == ValveStatus::Waiting) continue;
    if (t.node->kind == NodeKind::Primitive && t.request)
      out.push_back({*t.request, t.node->action, cur, t.path});
    for (auto it = t.children.rbegin(); it != t.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<TaskId> InterpreterState::valve_waiters() const {
  std::vector<TaskId> out;
  for (const auto& [name, v] : valves_)
    for (TaskId w : v.waiters)
      if (live(tasks_[w])) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<TaskId> InterpreterState::valve_owner(const std::string& valve) const {
  auto it = valves_.find(valve);
  if (it == valves_.end() || it->second.owner == kNoTask) return std::nullopt;
  return it->second.owner;
}

std::string InterpreterState::signature() const {
  std::string out;
  std::vector<TaskId> stack{root_};
  while (!stack.empty()) {
    const TaskId cur = stack.back();
    stack.pop_back();
    const Task& t = tasks_[cur];
    if (t.status != Status::Active) continue;
    const char* tag = nullptr;
    if (t.node->kind == NodeKind::WithValve && t.valve == ValveStatus::Waiting) tag = "V";
    else if (t.node->kind == NodeKind::WaitFor) tag = "W";
    else if (t.node->kind == NodeKind::Whenever && t.body == kNoTask) tag = "E";
    else if (t.node->kind == NodeKind::Primitive && t.request) tag = "P";
    if (tag) {
      if (!out.empty()) out += ' ';
      out += fmt::format("{}:{}", tag, t.path);
      if (*tag == 'V') continue;
    }
    for (auto it = t.children.rbegin(); it != t.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::pair<InterpreterState, StepResult> step_interpreter(InterpreterState state,
                                                         const InterpreterEvent& event) {
  StepResult r = state.step(event);
  return {std::move(state), std::move(r)};
}

std::vector<fluents::FluentNetwork> pending_networks(const InterpreterState& state,
                                                     const fluents::ChangesModel& changes,
                                                     std::string_view process) {
  std::vector<fluents::PendingCondition> blocked;
  for (const BlockedCondition& b : state.blocked_conditions())
    blocked.push_back({b.path, b.network});
  return fluents::pending_networks(blocked, changes, process);
}

}  // namespace hyproj::crp
