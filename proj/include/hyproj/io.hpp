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

#include <string>
#include <string_view>
#include <vector>

#include "hyproj/automaton.hpp"
#include "hyproj/projector.hpp"
#include "hyproj/world.hpp"

namespace hyproj::io {

/// One JSON object per occurrence: index, date, class, event, opened and
/// closed propositions, robot position, travel mode and control mode key.
std::string timeline_jsonl(const proj::ProjectionResult& r);

/// Event count, reschedule count, completion and final state.
std::string summary_json(const proj::ProjectionResult& r);

struct PlotEvent {
  double date = 0.0;
  std::string event;
  world::Point position{0, 0};
};

/// Reads the events and positions back from timeline_jsonl output.
std::vector<PlotEvent> read_timeline_jsonl(std::string_view text);

enum class Glyph { None, Rhombus, Circle, Square, DoubleCircle };

/// Rhombus: travel-mode change; circle: start or stop passing a door;
/// square: entering or leaving a room; double circle: navigation start/stop.
Glyph glyph_for(const Term& event);
const char* glyph_class(Glyph g);

/// World outline, trajectory through the event positions and one glyph per
/// qualifying event.
std::string plot_svg(const world::World& w, const std::vector<PlotEvent>& events);

std::string automaton_json(const ha::HybridAutomaton& a);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace hyproj::io
