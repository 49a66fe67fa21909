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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyproj/random.hpp"
#include "hyproj/term.hpp"
#include "hyproj/timeline.hpp"

namespace hyproj::rules {

/// Condition literal: `P`, `(not P)` or `(none P1 P2 ...)` (no joint match).
struct Literal {
  enum class Kind { Positive, Not, None };
  Kind kind = Kind::Positive;
  std::vector<Term> patterns;
};

struct Effect {
  enum class Kind { Assert, Clip, Persist };
  Kind kind = Kind::Assert;
  Term proposition;
  Term duration;  // Persist: number or bound variable
};

struct DelaySpec {
  enum class Kind { Fixed, Uniform, Normal };
  Kind kind = Kind::Fixed;
  double a = 0.0;
  double b = 0.0;

  /// Nonnegative delay sample.
  double sample(Rng& rng) const;
};

/// Projection model of a primitive: events at delays after its start.
struct ProjectRule {
  std::string name;
  Term head;
  std::vector<Literal> condition;
  std::vector<std::pair<DelaySpec, Term>> events;
  std::optional<Term> failure;
};

/// With probability `theta`, an occurrence matching `event` under
/// `condition` causes `effects`.
struct EffectRule {
  std::string name;
  Term event;
  std::vector<Literal> condition;
  double theta = 1.0;
  std::vector<Effect> effects;
};

/// While `condition` holds, `event` occurs with average spacing `tau`.
struct ExoRule {
  std::string name;
  std::vector<Literal> condition;
  double tau = 1.0;
  Term event;
};

/// A flaw holds in a timeline if an occurrence matches (Occurs) or an
/// occasion ever matches (Holds).
struct FlawSpec {
  enum class Kind { Occurs, Holds };
  std::string name;
  Kind kind = Kind::Occurs;
  Term pattern;
};

struct RuleSet {
  std::vector<ProjectRule> project;
  std::vector<EffectRule> effects;
  std::vector<ExoRule> exogenous;
  std::vector<FlawSpec> flaws;

  const FlawSpec* flaw(std::string_view name) const;
  void append(const RuleSet& other);
};

class ContradictoryEffects : public Error {
 public:
  using Error::Error;
};

/// Parses the s-expression rule language (see README).
RuleSet parse_rules(std::string_view text);
RuleSet load_rules(const std::string& path);

/// Spacing at or below which a Poisson rule stands for "as soon as".
inline constexpr double kImmediateSpacing = 1e-3;

/// All bindings extending `init` under which `condition` holds now.
std::vector<Bindings> solve(const Timeline& tl, const std::vector<Literal>& condition,
                            const Bindings& init = {});

struct TimelineDelta {
  std::vector<Term> opened;
  std::vector<Term> closed;
  std::vector<std::string> fired;  // names of rules applied
};

/// Applies every effect rule matching occurrence `index` of `tl` (conditions
/// read the state before the occurrence's own effects). Effects of one rule
/// instance are applied together; instances whose effects all hold already
/// are skipped.
TimelineDelta apply_effect_rules(Timeline& tl, std::size_t index, const RuleSet& rules, Rng& rng);

using ConditionEvaluator = std::function<std::vector<Bindings>(const std::vector<Literal>&)>;

/// Poisson occurrences of every enabled exogenous rule instance over [t1, t2].
std::vector<Occurrence> sample_exogenous_occurrences(const Timeline& tl, const RuleSet& rules,
                                                     double t1, double t2,
                                                     const ConditionEvaluator& enabled, Rng& rng);

/// Uniform integer in [1, max] for max = 2^n, from fair bits.
std::uint64_t random_number(std::uint64_t max, Rng& rng);

/// The same draw made through the rule language: n random-bit occasions are
/// asserted and one `randomize` occurrence flips each with probability 1/2.
std::uint64_t random_number(Timeline& tl, std::uint64_t max, Rng& rng);

/// Rules implementing `randomize`.
RuleSet randomize_rules();

}  // namespace hyproj::rules
