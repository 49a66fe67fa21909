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

// Command-line front end: projection, sampling, flaw detection, tables,
// plots and validation.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>

#include "hyproj/automaton.hpp"
#include "hyproj/courier.hpp"
#include "hyproj/flaw.hpp"
#include "hyproj/io.hpp"
#include "hyproj/projector.hpp"

using namespace hyproj;

namespace {

enum Exit { kOk = 0, kInput = 1, kProjection = 2, kFlaw = 3 };

struct Manifest {
  std::string plan, world, beliefs, rules;
  std::uint64_t seed = 0;
  double horizon = 3600.0;
  std::string out;
};

struct Loaded {
  crp::Plan plan;
  world::World world;
  world::Beliefs beliefs;
  rules::RuleSet rules;
};

void add_manifest(CLI::App* cmd, Manifest& m, bool need_plan = true) {
  auto* p = cmd->add_option("--plan", m.plan, "plan file");
  if (need_plan) p->required();
  cmd->add_option("--world", m.world, "world JSON file")->required();
  cmd->add_option("--beliefs", m.beliefs, "beliefs JSON file");
  cmd->add_option("--rules", m.rules, "rules file");
  cmd->add_option("--seed", m.seed, "root random seed");
  cmd->add_option("--horizon", m.horizon, "projection horizon in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--out", m.out, "output file");
}

Loaded load(const Manifest& m) {
  Loaded l;
  auto stage = [](const std::string& path, auto f) {
    try {
      return f();
    } catch (const std::exception& e) {
      throw Error(fmt::format("{}: {}", path, e.what()));
    }
  };
  l.plan = stage(m.plan, [&] { return crp::parse_plan(io::read_file(m.plan)); });
  l.world = stage(m.world, [&] {
    world::World w = world::load_world(m.world);
    world::validate_world(w);
    return w;
  });
  if (!m.beliefs.empty()) l.beliefs = stage(m.beliefs, [&] { return world::load_beliefs(m.beliefs); });
  if (!m.rules.empty()) l.rules = stage(m.rules, [&] { return rules::load_rules(m.rules); });
  return l;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    io::write_file(path, text);
}

int cmd_project(const Manifest& m, const std::string& summary_path) {
  Loaded l;
  try {
    l = load(m);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  proj::ProjectionOptions o;
  o.seed = m.seed;
  o.horizon = m.horizon;
  proj::ProjectionResult r;
  try {
    r = proj::project_plan(l.plan, l.world, l.beliefs, l.rules, o);
  } catch (const std::exception& e) {
    fmt::print(stderr, "projection error: {}\n", e.what());
    return kProjection;
  }
  try {
    emit(m.out, io::timeline_jsonl(r));
    const std::string summary = io::summary_json(r);
    if (summary_path.empty())
      std::fwrite(summary.data(), 1, summary.size(), m.out.empty() || m.out == "-" ? stderr : stdout);
    else
      io::write_file(summary_path, summary);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  if (!r.error.empty()) {
    fmt::print(stderr, "projection error: {}\n", r.error);
    return kProjection;
  }
  if (r.horizon_exceeded) {
    fmt::print(stderr, "projection error: horizon of {} s exceeded\n", m.horizon);
    return kProjection;
  }
  return kOk;
}

int cmd_sample(const Manifest& m, unsigned n) {
  Loaded l;
  try {
    l = load(m);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  proj::ProjectionOptions o;
  o.horizon = m.horizon;
  const auto runs = flaw::sample_scenarios(l.plan, l.world, l.beliefs, l.rules, n, m.seed, o);
  std::string out;
  unsigned failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    nlohmann::ordered_json j;
    j["scenario"] = i;
    j["seed"] = derive_seed(m.seed, i);
    j["events"] = runs[i].timeline.occurrences().size();
    j["reschedules"] = runs[i].reschedules;
    j["finished"] = runs[i].finished;
    j["error"] = runs[i].ok() ? "" : (runs[i].error.empty() ? "horizon exceeded" : runs[i].error);
    nlohmann::ordered_json flaws;
    for (const rules::FlawSpec& f : l.rules.flaws) flaws[f.name] = flaw::flaw_occurs(f, runs[i].timeline);
    j["flaws"] = flaws;
    out += j.dump() + "\n";
    failed += !runs[i].ok();
  }
  try {
    emit(m.out, out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  return failed ? kProjection : kOk;
}

int cmd_detect(const Manifest& m, const std::string& flaw_name, unsigned n, unsigned k, double theta,
               double tau) {
  Loaded l;
  try {
    l = load(m);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  const rules::FlawSpec* f = l.rules.flaw(flaw_name);
  if (!f) {
    fmt::print(stderr, "error: unknown flaw '{}'\n", flaw_name);
    return kInput;
  }
  if (k < 1 || k > n) {
    fmt::print(stderr, "error: need 1 <= k <= n\n");
    return kInput;
  }
  proj::ProjectionOptions o;
  o.horizon = m.horizon;
  const auto runs = flaw::sample_scenarios(l.plan, l.world, l.beliefs, l.rules, n, m.seed, o);
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (!runs[i].ok())
      fmt::print(stderr, "warning: scenario {}: {}\n", i, runs[i].error.empty() ? "horizon exceeded" : runs[i].error);
  const flaw::FlawReport rep = flaw::make_report(flaw_name, n, k, flaw::count_flaw(runs, *f), theta, tau);
  try {
    emit(m.out, flaw::to_json(rep) + "\n");
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  return rep.decision ? kFlaw : kOk;
}

int cmd_plot(const std::string& timeline, const std::string& world_path, const std::string& out) {
  try {
    const world::World w = world::load_world(world_path);
    const auto events = io::read_timeline_jsonl(io::read_file(timeline));
    emit(out, io::plot_svg(w, events));
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  return kOk;
}

int cmd_validate(const Manifest& m, const std::string& automaton_out) {
  try {
    if (!m.world.empty()) {
      world::World w = world::load_world(m.world);
      world::validate_world(w);
      fmt::print("world ok: {} rooms\n", w.rooms.size());
      if (!m.plan.empty()) {
        const crp::Plan p = crp::parse_plan(io::read_file(m.plan));
        fmt::print("plan ok\n");
        if (!automaton_out.empty()) {
          const ha::HybridAutomaton a =
              ha::unfold_automaton(p, w.fluent_definitions(), w.motion, w.start, w.start_mode);
          const auto bad = ha::validate_automaton(a.edges, a.modes.size());
          for (const auto& v : bad) fmt::print(stderr, "edge {}: {}\n", v.edge, v.what);
          emit(automaton_out, io::automaton_json(a));
          fmt::print("automaton: {} modes, {} edges{}\n", a.modes.size(), a.edges.size(),
                     a.truncated ? " (truncated)" : "");
          if (!bad.empty()) return kInput;
        }
      }
    } else if (!m.plan.empty()) {
      crp::parse_plan(io::read_file(m.plan));
      fmt::print("plan ok\n");
    }
    if (!m.beliefs.empty()) {
      world::load_beliefs(m.beliefs);
      fmt::print("beliefs ok\n");
    }
    if (!m.rules.empty()) {
      const rules::RuleSet r = rules::load_rules(m.rules);
      fmt::print("rules ok: {} project, {} effect, {} exogenous, {} flaws\n", r.project.size(), r.effects.size(),
                 r.exogenous.size(), r.flaws.size());
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  return kOk;
}

int cmd_tour(const std::string& world_path, const std::vector<std::string>& orderings,
             const std::vector<std::string>& drops, const std::string& out) {
  try {
    const world::World w = world_path.empty() ? courier::build_fixture_world() : world::load_world(world_path);
    courier::TourPlan t = courier::heuristic_schedule(courier::fixture_requests(), w.start, w);
    for (const std::string& o : orderings) {
      const auto at = o.find(':');
      if (at == std::string::npos) throw Error("ordering must read BEFORE:AFTER, got " + o);
      t = courier::apply_revision_rule(t, courier::AddOrdering{o.substr(0, at), o.substr(at + 1)});
    }
    for (const std::string& d : drops) t = courier::apply_revision_rule(t, courier::DropOpportunity{d});
    emit(out, crp::print_plan(t.to_plan()) + "\n");
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection of concurrent reactive robot plans"};
  app.require_subcommand(1);

  Manifest pm;
  std::string summary;
  auto* project = app.add_subcommand("project", "project one execution scenario");
  add_manifest(project, pm);
  project->add_option("--summary", summary, "summary JSON file (default: stderr, or stdout with --out)");

  Manifest sm;
  unsigned sample_n = 10;
  auto* sample = app.add_subcommand("sample", "project n scenarios and summarize each");
  add_manifest(sample, sm);
  sample->add_option("--n", sample_n, "number of scenarios")->check(CLI::PositiveNumber);

  Manifest dm;
  std::string flaw_name;
  unsigned det_n = 3, det_k = 2;
  double theta = 0.5, tau = 0.05;
  auto* detect = app.add_subcommand("detect", "run the flaw detector DET(f, n, k)");
  add_manifest(detect, dm);
  detect->add_option("--flaw", flaw_name, "flaw name from the rules file")->required();
  detect->add_option("--n", det_n, "number of scenarios")->check(CLI::PositiveNumber);
  detect->add_option("--k", det_k, "occurrence threshold")->check(CLI::PositiveNumber);
  detect->add_option("--theta", theta, "flaw probability for the reported power")->check(CLI::Range(0.0, 1.0));
  detect->add_option("--tau", tau, "flaw probability for the reported false-alarm rate")->check(CLI::Range(0.0, 1.0));

  std::string which;
  double beta = 0.95;
  auto* tables = app.add_subcommand("tables", "print detector tables");
  tables->add_option("which", which, "fig17 or fig18")->required()->check(CLI::IsMember({"fig17", "fig18"}));
  tables->add_option("--beta", beta, "accuracy for fig18")->check(CLI::Range(0.0, 1.0));

  std::string plot_timeline, plot_world, plot_out;
  auto* plot = app.add_subcommand("plot", "render a projected timeline as SVG");
  plot->add_option("--timeline", plot_timeline, "timeline JSONL file")->required();
  plot->add_option("--world", plot_world, "world JSON file")->required();
  plot->add_option("--out", plot_out, "SVG output file");

  Manifest vm;
  std::string automaton_out;
  auto* validate = app.add_subcommand("validate", "check plan, world, beliefs and rules files");
  validate->add_option("--plan", vm.plan, "plan file");
  validate->add_option("--world", vm.world, "world JSON file");
  validate->add_option("--beliefs", vm.beliefs, "beliefs JSON file");
  validate->add_option("--rules", vm.rules, "rules file");
  validate->add_option("--automaton", automaton_out, "write the unfolded automaton as JSON (needs --plan and --world)");

  std::string tour_world, tour_out;
  std::vector<std::string> orderings, drops;
  auto* tour = app.add_subcommand("tour", "print the courier tour plan for the fixture requests");
  tour->add_option("--world", tour_world, "world JSON file (default: the fixture)");
  tour->add_option("--order", orderings, "add an ordering constraint BEFORE:AFTER");
  tour->add_option("--drop-opportunity", drops, "drop the opportunity of a request");
  tour->add_option("--out", tour_out, "output plan file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*project) return cmd_project(pm, summary);
    if (*sample) return cmd_sample(sm, sample_n);
    if (*detect) return cmd_detect(dm, flaw_name, det_n, det_k, theta, tau);
    if (*tables) {
      std::fputs((which == "fig17" ? flaw::render_fig17() : flaw::render_fig18(beta)).c_str(), stdout);
      return kOk;
    }
    if (*plot) return cmd_plot(plot_timeline, plot_world, plot_out);
    if (*validate) return cmd_validate(vm, automaton_out);
    if (*tour) return cmd_tour(tour_world, orderings, drops, tour_out);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kProjection;
  }
  return kOk;
}
