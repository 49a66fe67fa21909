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

#include "hyproj/timeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

#include "hyproj/error.hpp"

namespace hyproj {

const char* to_string(EventClass c) {
  switch (c) {
    case EventClass::Physical: return "physical";
    case EventClass::Sensor: return "sensor";
    case EventClass::Computational: return "computational";
    case EventClass::Wakeup: return "wakeup";
  }
  return "?";
}

std::size_t Timeline::add_occurrence(Term event, double date, EventClass cls) {
  if (!(date >= 0.0)) throw Error(fmt::format("occurrence date {} is negative", date));
  if (!occurrences_.empty() && date < occurrences_.back().date)
    throw Error(fmt::format("occurrence at {} precedes the last one at {}", date,
                            occurrences_.back().date));
  occurrences_.push_back({std::move(event), date, cls, {}, {}});
  return occurrences_.size() - 1;
}

void Timeline::check_date(double t) const {
  if (occurrences_.empty() || occurrences_.back().date != t)
    throw Error(fmt::format("change at {} does not coincide with an occurrence", t));
}

void Timeline::assert_prop(const Term& p, double t) {
  check_date(t);
  std::string key = p.str();
  if (open_.count(key)) return;
  occasions_.push_back({p, t, std::nullopt});
  const std::size_t idx = occasions_.size() - 1;
  open_.emplace(key, idx);
  history_[key].push_back(idx);
  occurrences_.back().opened.push_back(p);
}

void Timeline::clip(const Term& p, double t) {
  check_date(t);
  auto it = open_.find(p.str());
  if (it == open_.end()) return;
  Occasion& o = occasions_[it->second];
  o.end = t;
  for (auto e = expiries_.begin(); e != expiries_.end(); ++e)
    if (e->first.second == it->second) {
      expiries_.erase(e);
      break;
    }
  open_.erase(it);
  occurrences_.back().closed.push_back(p);
}

void Timeline::persist(const Term& p, double t, double duration) {
  if (!(duration >= 0.0)) throw Error("persist duration must be nonnegative");
  assert_prop(p, t);
  const std::size_t idx = open_.at(p.str());
  for (auto e = expiries_.begin(); e != expiries_.end(); ++e)
    if (e->first.second == idx) {
      expiries_.erase(e);
      break;
    }
  expiries_.emplace(std::make_pair(t + duration, idx), p.str());
}

bool Timeline::holds_now(const Term& p) const { return open_.count(p.str()) != 0; }

bool Timeline::holds_at(const Term& p, double t, Side side) const {
  auto it = history_.find(p.str());
  if (it == history_.end()) return false;
  for (std::size_t idx : it->second) {
    const Occasion& o = occasions_[idx];
    const double end = o.end.value_or(std::numeric_limits<double>::infinity());
    if (side == Side::Before ? (o.start < t && t <= end) : (o.start <= t && t < end)) return true;
  }
  return false;
}

std::vector<Bindings> Timeline::match_open(const Term& pattern, const Bindings& b) const {
  std::vector<std::size_t> order;
  if (pattern.is_ground()) {
    auto it = open_.find(pattern.str());
    if (it != open_.end()) order.push_back(it->second);
  } else {
    for (const auto& [key, idx] : open_) order.push_back(idx);
    std::sort(order.begin(), order.end());
  }
  std::vector<Bindings> out;
  for (std::size_t idx : order) {
    Bindings ext = b;
    if (match(pattern, occasions_[idx].proposition, ext)) out.push_back(std::move(ext));
  }
  return out;
}

bool Timeline::any_open(const Term& pattern) const { return !match_open(pattern, {}).empty(); }

std::vector<Term> Timeline::open_propositions() const {
  std::vector<std::size_t> order;
  for (const auto& [key, idx] : open_) order.push_back(idx);
  std::sort(order.begin(), order.end());
  std::vector<Term> out;
  for (std::size_t idx : order) out.push_back(occasions_[idx].proposition);
  return out;
}

std::optional<std::pair<double, Term>> Timeline::next_expiry() const {
  if (expiries_.empty()) return std::nullopt;
  const auto& [when, key] = *expiries_.begin();
  return std::make_pair(when.first, occasions_[when.second].proposition);
}

std::optional<double> Timeline::expiry_of(const Term& p) const {
  auto it = open_.find(p.str());
  if (it == open_.end()) return std::nullopt;
  for (const auto& [when, key] : expiries_)
    if (when.second == it->second) return when.first;
  return std::nullopt;
}

}  // namespace hyproj
