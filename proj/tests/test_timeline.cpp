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

#include "hyproj/timeline.hpp"

using namespace hyproj;

namespace {

const Term kP = parse_term("(door-open A-113)");

}  // namespace

TEST_CASE("occasion interval semantics") {
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.add_occurrence(Term::sym("open"), 1.0);
  tl.assert_prop(kP, 1.0);
  tl.add_occurrence(Term::sym("close"), 3.0);
  tl.clip(kP, 3.0);
  CHECK(tl.holds_at(kP, 2.0, Side::Before));
  CHECK(tl.holds_at(kP, 3.0, Side::Before));
  CHECK_FALSE(tl.holds_at(kP, 3.0, Side::After));
  CHECK_FALSE(tl.holds_at(kP, 1.0, Side::Before));
  CHECK(tl.holds_at(kP, 1.0, Side::After));
  CHECK_FALSE(tl.holds_now(kP));
  REQUIRE(tl.occasions().size() == 1);
  CHECK(tl.occasions()[0].end == 3.0);
  CHECK(tl.occurrences()[1].opened == std::vector<Term>{kP});
  CHECK(tl.occurrences()[2].closed == std::vector<Term>{kP});
}

TEST_CASE("blank start") {
  Timeline tl;
  for (double t : {-1.0, 0.0, 5.0}) {
    CHECK_FALSE(tl.holds_at(kP, t, Side::Before));
    CHECK_FALSE(tl.holds_at(kP, t, Side::After));
  }
  CHECK(tl.open_propositions().empty());
}

TEST_CASE("persist lapses at its expiry") {
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.add_occurrence(Term::sym("begin"), 2.0);
  tl.persist(kP, 2.0, 5.0);
  CHECK(tl.expiry_of(kP) == 7.0);
  // Process the queue of lapses as a projector would.
  const auto e = tl.next_expiry();
  REQUIRE(e);
  CHECK(e->first == 7.0);
  CHECK(e->second == kP);
  tl.add_occurrence(Term::compound("lapse", {kP}), e->first);
  tl.clip(kP, e->first);
  CHECK(tl.holds_at(kP, 6.9, Side::Before));
  CHECK_FALSE(tl.holds_at(kP, 7.1, Side::Before));
  CHECK_FALSE(tl.next_expiry());
}

TEST_CASE("clipping a persisting proposition cancels its lapse") {
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.persist(kP, 0.0, 5.0);
  tl.add_occurrence(Term::sym("close"), 1.0);
  tl.clip(kP, 1.0);
  CHECK_FALSE(tl.next_expiry());
}

TEST_CASE("matching open occasions") {
  Timeline tl;
  tl.add_occurrence(Term::sym("start"), 0.0);
  tl.assert_prop(parse_term("(color L1 yellow)"), 0.0);
  tl.assert_prop(parse_term("(color L2 yellow)"), 0.0);
  tl.assert_prop(parse_term("(color L3 blue)"), 0.0);
  const auto yellow = tl.match_open(parse_term("(color ?l yellow)"), {});
  CHECK(yellow.size() == 2);
  CHECK(tl.any_open(parse_term("(color ?l blue)")));
  CHECK_FALSE(tl.any_open(parse_term("(color ?l red)")));
  Bindings b{{"?l", Term::sym("L3")}};
  CHECK(tl.match_open(parse_term("(color ?l ?c)"), b).size() == 1);
}

TEST_CASE("occurrences are dated in order") {
  Timeline tl;
  tl.add_occurrence(Term::sym("a"), 2.0);
  CHECK_THROWS_AS(tl.add_occurrence(Term::sym("b"), 1.0), Error);
  tl.add_occurrence(Term::sym("c"), 2.0);
  CHECK(tl.last_date() == 2.0);
}
