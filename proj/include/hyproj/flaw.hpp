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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyproj/projector.hpp"
#include "hyproj/rules.hpp"
#include "hyproj/timeline.hpp"

namespace hyproj::flaw {

class Infeasible : public Error {
 public:
  using Error::Error;
};

/// P(Y >= k) for Y ~ Binomial(n, p): the probability that DET(f, n, k)
/// fires when f occurs with probability p in each scenario.
double detection_probability(unsigned n, unsigned k, double p);

struct SampleSize {
  unsigned n = 0;
  unsigned k = 0;
};

/// Smallest n admitting a k that fires with probability at least beta at
/// theta and at most 1 - beta at tau; the smallest such k.
SampleSize required_sample_size(double theta, double tau, double beta = 0.95, unsigned max_n = 20000);

/// True if the flaw occurs in the timeline.
bool flaw_occurs(const rules::FlawSpec& f, const Timeline& tl);

/// n projections with seeds derive_seed(root_seed, i), in index order.
/// Projection errors are recorded in the results, not thrown.
std::vector<proj::ProjectionResult> sample_scenarios(const crp::Plan& plan, const world::World& w,
                                                     const world::Beliefs& beliefs,
                                                     const rules::RuleSet& rules, unsigned n,
                                                     std::uint64_t root_seed,
                                                     proj::ProjectionOptions options = {});

/// Number of scenarios in which the flaw occurs.
unsigned count_flaw(const std::vector<proj::ProjectionResult>& scenarios, const rules::FlawSpec& f);

/// DET(f, n, k): the flaw occurs in at least k of the scenarios.
bool detect_flaw(const std::vector<proj::ProjectionResult>& scenarios, const rules::FlawSpec& f, unsigned k);

struct FlawReport {
  std::string flaw;
  unsigned n = 0;
  unsigned k = 0;
  unsigned count = 0;
  bool decision = false;
  double theta = 0.5;
  double tau = 0.05;
  double power_at_theta = 0.0;
  double false_alarm_at_tau = 0.0;
};

FlawReport make_report(const std::string& flaw, unsigned n, unsigned k, unsigned count, double theta,
                       double tau);
/// JSON object with a fixed key order.
std::string to_json(const FlawReport& r);

/// Probability as a percentage with one decimal. Probabilities below 1
/// never print as 100.0.
std::string percent(double p);

/// DET(f, n, 2) for n = 3, 4, 5 at flaw probabilities 50% to 90%.
inline constexpr unsigned kFig17Sizes[] = {3, 4, 5};
inline constexpr double kFig17Probabilities[] = {0.5, 0.6, 0.7, 0.8, 0.9};
/// Published percentages for the same grid.
inline constexpr const char* kFig17Published[3][5] = {{"50.0", "64.8", "78.4", "89.6", "97.2"},
                                                      {"68.8", "81.2", "91.6", "97.3", "99.6"},
                                                      {"81.2", "91.3", "96.9", "99.3", "99.9"}};
std::string render_fig17();

/// Sample sizes for tau in {0.1%, 1%, 5%} and theta in {1%, ..., 80%}.
inline constexpr double kFig18Taus[] = {0.001, 0.01, 0.05};
inline constexpr double kFig18Thetas[] = {0.01, 0.1, 0.2, 0.4, 0.6, 0.8};
/// Published sample sizes; 0 where no detector exists (tau >= theta).
inline constexpr unsigned kFig18Published[3][6] = {
    {1331, 100, 44, 17, 8, 3}, {0, 121, 49, 17, 8, 3}, {0, 392, 78, 22, 9, 3}};

struct Fig18Cell {
  double tau = 0.0;
  double theta = 0.0;
  std::optional<SampleSize> computed;  // empty if tau >= theta
  unsigned published = 0;
  bool mismatch() const { return computed ? computed->n != published : published != 0; }
};
std::vector<Fig18Cell> fig18_grid(double beta = 0.95);
std::string render_fig18(double beta = 0.95);

}  // namespace hyproj::flaw
