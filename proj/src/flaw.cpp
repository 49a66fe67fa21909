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

#include "hyproj/flaw.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <thread>

namespace hyproj::flaw {

namespace {

void check_nkp(unsigned n, unsigned k, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("probability {} outside [0,1]", p));
  if (k < 1 || k > n) throw DomainError(fmt::format("need 1 <= k <= n, got n={} k={}", n, k));
}

/// Binomial pmf for i = 0..n, in log space for large n.
std::vector<double> pmf(unsigned n, double p) {
  std::vector<double> out(n + 1, 0.0);
  if (p == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (p == 1.0) {
    out[n] = 1.0;
    return out;
  }
  const double lp = std::log(p), lq = std::log1p(-p);
  const double ln = std::lgamma(n + 1.0);
  for (unsigned i = 0; i <= n; ++i)
    out[i] = std::exp(ln - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq);
  return out;
}

/// tail[k] = P(Y >= k), summed from the small end.
std::vector<double> upper_tails(unsigned n, double p) {
  const std::vector<double> f = pmf(n, p);
  std::vector<double> tail(n + 2, 0.0);
  for (unsigned i = n + 1; i-- > 0;) tail[i] = tail[i + 1] + f[i];
  return tail;
}

}  // namespace

double detection_probability(unsigned n, unsigned k, double p) {
  check_nkp(n, k, p);
  const std::vector<double> f = pmf(n, p);
  double upper = 0.0, lower = 0.0;
  for (unsigned i = 0; i <= n; ++i) (i >= k ? upper : lower) += f[i];
  // sum whichever tail is smaller to keep its precision
  return std::clamp(upper <= lower ? upper : 1.0 - lower, 0.0, 1.0);
}

SampleSize required_sample_size(double theta, double tau, double beta, unsigned max_n) {
  if (!(0.0 < tau && tau < 1.0 && 0.0 < theta && theta < 1.0))
    throw DomainError("theta and tau must lie in (0,1)");
  if (!(0.0 < beta && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
  if (std::abs(theta - tau) <= 4 * std::numeric_limits<double>::epsilon() * std::max(theta, tau))
    throw Infeasible("theta and tau coincide");
  if (!(tau < theta)) throw DomainError("need tau < theta");
  for (unsigned n = 1; n <= max_n; ++n) {
    const std::vector<double> at_theta = upper_tails(n, theta);
    const std::vector<double> at_tau = upper_tails(n, tau);
    for (unsigned k = 1; k <= n; ++k) {
      if (at_tau[k] > 1.0 - beta) continue;
      // false alarms fall with k and so does power: the first admissible k is best
      if (at_theta[k] >= beta) return {n, k};
      break;
    }
  }
  throw Infeasible(fmt::format("no detector with n <= {}", max_n));
}

bool flaw_occurs(const rules::FlawSpec& f, const Timeline& tl) {
  if (f.kind == rules::FlawSpec::Kind::Occurs) {
    for (const Occurrence& o : tl.occurrences()) {
      Bindings b;
      if (match(f.pattern, o.event, b)) return true;
    }
    return false;
  }
  for (const Occasion& o : tl.occasions()) {
    Bindings b;
    if (match(f.pattern, o.proposition, b)) return true;
  }
  return false;
}

std::vector<proj::ProjectionResult> sample_scenarios(const crp::Plan& plan, const world::World& w,
                                                     const world::Beliefs& beliefs,
                                                     const rules::RuleSet& rules, unsigned n,
                                                     std::uint64_t root_seed, proj::ProjectionOptions options) {
  if (n < 1) throw DomainError("need at least one scenario");
  std::vector<proj::ProjectionResult> out(n);
  const unsigned workers = std::max(1u, std::min(n, std::thread::hardware_concurrency()));
  auto work = [&](unsigned first) {
    for (unsigned i = first; i < n; i += workers) {
      proj::ProjectionOptions o = options;
      o.seed = derive_seed(root_seed, i);
      try {
        out[i] = proj::project_plan(plan, w, beliefs, rules, o);
      } catch (const Error& e) {
        out[i].error = e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
  for (std::thread& t : pool) t.join();
  return out;
}

unsigned count_flaw(const std::vector<proj::ProjectionResult>& scenarios, const rules::FlawSpec& f) {
  return static_cast<unsigned>(std::count_if(scenarios.begin(), scenarios.end(),
                                             [&](const auto& s) { return flaw_occurs(f, s.timeline); }));
}

bool detect_flaw(const std::vector<proj::ProjectionResult>& scenarios, const rules::FlawSpec& f, unsigned k) {
  if (scenarios.empty()) throw DomainError("no scenarios");
  return count_flaw(scenarios, f) >= k;
}

FlawReport make_report(const std::string& flaw, unsigned n, unsigned k, unsigned count, double theta,
                       double tau) {
  FlawReport r;
  r.flaw = flaw;
  r.n = n;
  r.k = k;
  r.count = count;
  r.decision = count >= k;
  r.theta = theta;
  r.tau = tau;
  r.power_at_theta = detection_probability(n, k, theta);
  r.false_alarm_at_tau = detection_probability(n, k, tau);
  return r;
}

std::string to_json(const FlawReport& r) {
  nlohmann::ordered_json j;
  j["flaw"] = r.flaw;
  j["n"] = r.n;
  j["k"] = r.k;
  j["count"] = r.count;
  j["decision"] = r.decision;
  j["theta"] = r.theta;
  j["tau"] = r.tau;
  j["analytic_power_at_theta"] = r.power_at_theta;
  j["analytic_false_alarm_at_tau"] = r.false_alarm_at_tau;
  return j.dump(2);
}

std::string percent(double p) {
  std::string s = fmt::format("{:.1f}", 100.0 * p);
  if (s == "100.0" && p < 1.0) s = "99.9";
  return s;
}

std::string render_fig17() {
  std::string out = "detector     ";
  for (double p : kFig17Probabilities) out += fmt::format("{:>7}", fmt::format("{:.0f}%", 100 * p));
  out += "   published\n";
  for (std::size_t r = 0; r < std::size(kFig17Sizes); ++r) {
    const unsigned n = kFig17Sizes[r];
    out += fmt::format("DET(f,{},2)  ", n);
    for (double p : kFig17Probabilities) out += fmt::format("{:>7}", percent(detection_probability(n, 2, p)));
    out += "  ";
    for (std::size_t c = 0; c < std::size(kFig17Probabilities); ++c) {
      const bool same = percent(detection_probability(n, 2, kFig17Probabilities[c])) == kFig17Published[r][c];
      out += fmt::format(" {}{}", kFig17Published[r][c], same ? "" : "*");
    }
    out += "\n";
  }
  out += "* published value differs from the computed one\n";
  return out;
}

std::vector<Fig18Cell> fig18_grid(double beta) {
  std::vector<Fig18Cell> out;
  for (std::size_t r = 0; r < std::size(kFig18Taus); ++r)
    for (std::size_t c = 0; c < std::size(kFig18Thetas); ++c) {
      Fig18Cell cell;
      cell.tau = kFig18Taus[r];
      cell.theta = kFig18Thetas[c];
      cell.published = kFig18Published[r][c];
      if (cell.tau < cell.theta) cell.computed = required_sample_size(cell.theta, cell.tau, beta);
      out.push_back(cell);
    }
  return out;
}

std::string render_fig18(double beta) {
  std::string out = fmt::format("sample sizes n (k) at beta = {}; computed | published\n", beta);
  out += "tau \\ theta";
  for (double t : kFig18Thetas) out += fmt::format("{:>18}", fmt::format("{:g}%", 100 * t));
  out += "\n";
  const auto grid = fig18_grid(beta);
  for (std::size_t r = 0; r < std::size(kFig18Taus); ++r) {
    out += fmt::format("{:<11}", fmt::format("{:g}%", 100 * kFig18Taus[r]));
    for (std::size_t c = 0; c < std::size(kFig18Thetas); ++c) {
      const Fig18Cell& cell = grid[r * std::size(kFig18Thetas) + c];
      const std::string computed =
          cell.computed ? fmt::format("{} ({})", cell.computed->n, cell.computed->k) : std::string("-");
      const std::string published = cell.published ? std::to_string(cell.published) : std::string("-");
      out += fmt::format("{:>18}", fmt::format("{} | {}{}", computed, published, cell.mismatch() ? " *" : ""));
    }
    out += "\n";
  }
  out += "* computed and published sizes differ\n";
  return out;
}

}  // namespace hyproj::flaw
