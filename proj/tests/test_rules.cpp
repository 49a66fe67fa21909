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

#include <doctest.h>

#include <cmath>
#include <map>

#include "hyproj/rules.hpp"

using namespace hyproj;
using namespace hyproj::rules;

namespace {

const std::string kData = HYPROJ_DATA_DIR;

Term t(std::string_view s) { return parse_term(s); }

// Pearson statistic of observed counts against equal expected counts.
double chi_square_uniform(const std::vector<unsigned>& counts, unsigned total) {
  const double expected = static_cast<double>(total) / counts.size();
  double x = 0.0;
  for (unsigned c : counts) x += (c - expected) * (c - expected) / expected;
  return x;
}

// 99.9% quantile, chi-square with 15 degrees of freedom; three tests share the suite.
constexpr double kChi2_15_999 = 37.697;

}  // namespace

TEST_CASE("doorway mode rule") {
  const RuleSet rs = load_rules(kData + "/courier/rules.sexp");
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.assert_prop(t("(travel-mode office)"), 0.0);
  tl.assert_prop(t("(obstacle-avoidance-with sonar)"), 0.0);
  const std::size_t i = tl.add_occurrence(t("(nav-event (set-travel-mode doorway))"), 1.0);
  Rng rng(1);
  const TimelineDelta d = apply_effect_rules(tl, i, rs, rng);
  CHECK(d.fired == std::vector<std::string>{"set-doorway-mode"});
  CHECK_FALSE(tl.holds_now(t("(travel-mode office)")));
  CHECK_FALSE(tl.holds_now(t("(obstacle-avoidance-with sonar)")));
  CHECK(tl.holds_now(t("(travel-mode doorway)")));
  const Occurrence& o = tl.occurrences()[i];
  CHECK(o.closed.size() == 2);
  CHECK(o.opened == std::vector<Term>{t("(travel-mode doorway)")});
}

TEST_CASE("probabilistic effect") {
  const RuleSet rs = parse_rules(
      "(e->p visual-tracking :event (lost-sight ?o) :if ((tracking ?o)) :prob 0.9 :causes ((clip (tracking ?o))))");
  Rng rng(2);
  unsigned clipped = 0;
  const unsigned trials = 10000;
  for (unsigned k = 0; k < trials; ++k) {
    Timeline tl;
    tl.add_occurrence(Term::sym("start"), 0.0);
    tl.assert_prop(t("(tracking ball)"), 0.0);
    const std::size_t i = tl.add_occurrence(t("(lost-sight ball)"), 1.0);
    apply_effect_rules(tl, i, rs, rng);
    if (!tl.holds_now(t("(tracking ball)"))) ++clipped;
  }
  CHECK(std::abs(static_cast<double>(clipped) / trials - 0.9) <= 0.01);
}

TEST_CASE("events without a matching rule change nothing") {
  const RuleSet rs = load_rules(kData + "/courier/rules.sexp");
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.assert_prop(t("(travel-mode office)"), 0.0);
  const auto before = tl.occasions().size();
  const std::size_t i = tl.add_occurrence(t("(something-else)"), 1.0);
  Rng rng(3);
  const TimelineDelta d = apply_effect_rules(tl, i, rs, rng);
  CHECK(d.fired.empty());
  CHECK(d.opened.empty());
  CHECK(d.closed.empty());
  CHECK(tl.occasions().size() == before);
}

TEST_CASE("persist effects schedule a lapse") {
  const RuleSet rs = parse_rules("(e->p lunch :event (leave ?p ?d) :causes ((persist ?d (away ?p))))");
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  const std::size_t i = tl.add_occurrence(t("(leave occupant 1500)"), 100.0);
  Rng rng(4);
  apply_effect_rules(tl, i, rs, rng);
  CHECK(tl.expiry_of(t("(away occupant)")) == 1600.0);
}

TEST_CASE("contradictory and malformed rules") {
  CHECK_THROWS_AS(parse_rules("(e->p bad :event (e) :causes ((assert (p)) (clip (p))))"), ContradictoryEffects);
  CHECK_THROWS_AS(parse_rules("(e->p r :event (e) :causes ((assert (p)))) (e->p r :event (f) :causes ((assert (q))))"),
                  sexpr::SyntaxError);
  CHECK_THROWS_AS(parse_rules("(e->p r :event (e) :prob 1.5 :causes ((assert (p))))"), sexpr::SyntaxError);
  CHECK_THROWS_AS(parse_rules("(p->e r :while () :spacing 0 :occurs (e))"), sexpr::SyntaxError);
  CHECK_THROWS_AS(parse_rules("(frob r)"), sexpr::SyntaxError);
}

TEST_CASE("condition solving") {
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  for (const char* p : {"(color L1 yellow)", "(color L2 yellow)", "(carrying L1)"}) tl.assert_prop(t(p), 0.0);
  const RuleSet rs = parse_rules(
      "(project mixup :head (pick-up ?l) :if ((color ?l ?c) (carrying ?m) (distinct ?l ?m) (color ?m ?c))"
      " :events ((0 (begin (pick-up ?l)))))");
  const auto& cond = rs.project[0].condition;
  CHECK(solve(tl, cond, {{"?l", Term::sym("L2")}}).size() == 1);
  CHECK(solve(tl, cond, {{"?l", Term::sym("L1")}}).empty());
  CHECK(solve(tl, {Literal{Literal::Kind::Not, {t("(carrying L2)")}}}).size() == 1);
  CHECK(solve(tl, {Literal{Literal::Kind::None, {t("(carrying ?x)")}}}).empty());
}

TEST_CASE("flaw specifications") {
  const RuleSet rs = load_rules(kData + "/courier/rules.sexp");
  const FlawSpec* f = rs.flaw("two-same-color");
  REQUIRE(f);
  CHECK(f->kind == FlawSpec::Kind::Holds);
  CHECK_FALSE(rs.flaw("nonexistent"));
}

TEST_CASE("exogenous events are Poisson over the window") {
  const RuleSet rs = parse_rules("(p->e knock :while ((at-door visitor)) :spacing 10 :occurs (knock visitor))");
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.assert_prop(t("(at-door visitor)"), 0.0);
  Rng rng(5);
  const unsigned windows = 100000;
  std::size_t total = 0;
  for (unsigned w = 0; w < windows; ++w) {
    const auto occ = sample_exogenous_occurrences(tl, rs, 0.0, 10.0, {}, rng);
    total += occ.size();
    for (std::size_t i = 1; i < occ.size(); ++i) CHECK(occ[i - 1].date <= occ[i].date);
  }
  CHECK(std::abs(static_cast<double>(total) / windows - 1.0) <= 0.02);

  Timeline off;
  off.add_occurrence(Term::sym("start"), 0.0);
  for (int w = 0; w < 1000; ++w) CHECK(sample_exogenous_occurrences(off, rs, 0.0, 10.0, {}, rng).empty());
  CHECK_THROWS_AS(sample_exogenous_occurrences(tl, rs, 2.0, 2.0, {}, rng), DomainError);
}

TEST_CASE("a tiny spacing triggers almost surely within a millisecond") {
  // P(no event in 1 ms at spacing 1e-4) = e^-10.
  const RuleSet rs = parse_rules("(p->e door-opens :while ((back-from-lunch)) :spacing 0.0001 :occurs (door-opens))");
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.assert_prop(t("(back-from-lunch)"), 0.0);
  Rng rng(6);
  unsigned missed = 0;
  for (int w = 0; w < 10000; ++w)
    if (sample_exogenous_occurrences(tl, rs, 5.0, 5.001, {}, rng).empty()) ++missed;
  CHECK(missed <= 1);  // at least 99.99%
}

TEST_CASE("random numbers") {
  Rng rng(7);
  unsigned ones = 0;
  for (int i = 0; i < 100000; ++i) ones += random_number(2, rng) == 1;
  CHECK(std::abs(ones / 100000.0 - 0.5) <= 0.01);

  std::vector<unsigned> direct(16), via_rules(16);
  for (int i = 0; i < 100000; ++i) {
    const auto n = random_number(16, rng);
    REQUIRE(n >= 1);
    REQUIRE(n <= 16);
    ++direct[n - 1];
  }
  CHECK(chi_square_uniform(direct, 100000) < kChi2_15_999);

  const unsigned draws = 20000;
  for (unsigned i = 0; i < draws; ++i) {
    Timeline tl;
    tl.add_occurrence(Term::sym("start"), 0.0);
    const auto n = random_number(tl, 16, rng);
    REQUIRE(n >= 1);
    REQUIRE(n <= 16);
    ++via_rules[n - 1];
  }
  CHECK(chi_square_uniform(via_rules, draws) < kChi2_15_999);
  // Two-sample homogeneity between the direct draws and the rule-based ones.
  double x = 0.0;
  const double n1 = 100000, n2 = draws;
  for (int k = 0; k < 16; ++k) {
    const double a = direct[k], b = via_rules[k];
    x += std::pow(a * std::sqrt(n2 / n1) - b * std::sqrt(n1 / n2), 2) / (a + b);
  }
  CHECK(x < kChi2_15_999);
}
