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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyproj/term.hpp"

namespace hyproj {

/// Order of co-occurring events at one date.
enum class EventClass { Physical = 0, Sensor = 1, Computational = 2, Wakeup = 3 };

const char* to_string(EventClass c);

struct Occurrence {
  Term event;
  double date = 0.0;
  EventClass cls = EventClass::Physical;
  std::vector<Term> opened;  // occasions started by this occurrence
  std::vector<Term> closed;  // occasions ended by this occurrence
};

struct Occasion {
  Term proposition;
  double start = 0.0;
  std::optional<double> end;  // open if unset

  bool open() const { return !end.has_value(); }
};

enum class Side { Before, After };

/// Dated occurrences plus occasions. Proposition truth changes only at
/// occurrence dates: every assert/clip is attributed to the latest occurrence,
/// which must carry the same date.
class Timeline {
 public:
  /// Appends an occurrence; dates must not decrease.
  std::size_t add_occurrence(Term event, double date, EventClass cls = EventClass::Physical);

  /// Opens an occasion for ground `p` unless it already holds.
  void assert_prop(const Term& p, double t);
  /// Closes the open occasion of ground `p`, if any.
  void clip(const Term& p, double t);
  /// Opens (or keeps) `p` with an expiry at t + duration.
  void persist(const Term& p, double t, double duration);

  bool holds_now(const Term& p) const;
  /// Before: truth over (t - d, t]; After: truth over [t, t + d), d -> 0.
  bool holds_at(const Term& p, double t, Side side) const;

  /// Open occasions whose proposition matches `pattern` under `b`, with the
  /// extended bindings, in opening order.
  std::vector<Bindings> match_open(const Term& pattern, const Bindings& b) const;
  /// True if some occasion matching `pattern` is open.
  bool any_open(const Term& pattern) const;
  /// Open propositions, in opening order.
  std::vector<Term> open_propositions() const;

  /// Earliest pending persist expiry.
  std::optional<std::pair<double, Term>> next_expiry() const;
  std::optional<double> expiry_of(const Term& p) const;

  const std::vector<Occurrence>& occurrences() const { return occurrences_; }
  const std::vector<Occasion>& occasions() const { return occasions_; }
  double last_date() const { return occurrences_.empty() ? 0.0 : occurrences_.back().date; }
  bool empty() const { return occurrences_.empty(); }

 private:
  void check_date(double t) const;

  std::vector<Occurrence> occurrences_;
  std::vector<Occasion> occasions_;
  std::map<std::string, std::size_t> open_;                // key -> occasion index
  std::map<std::string, std::vector<std::size_t>> history_;  // key -> occasion indices
  std::map<std::pair<double, std::size_t>, std::string> expiries_;  // (date, occasion) -> key
};

}  // namespace hyproj
