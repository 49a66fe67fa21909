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

#include "hyproj/geom2d.hpp"
#include "hyproj/random.hpp"

using namespace hyproj;
using namespace hyproj::geom2d;

namespace {

// Room A-120 below the hallway.
Region room_a120() { return intersection_of({rect(860, 1265, -1e9, 1e9), half_plane(Axis::Y, 817, Side::Below)}); }

}  // namespace

TEST_CASE("distance") {
  CHECK(distance(Point(0, 0), Point(3, 4)) == doctest::Approx(5.0));
  CHECK(distance(Point(7, -2), Point(7, -2)) == 0.0);
  CHECK(distance(Point(2400, 600), Point(2300, 800)) == doctest::Approx(223.6068).epsilon(1e-7));
}

TEST_CASE("composite region membership") {
  const Region r = room_a120();
  CHECK(point_in_region({1000, 500}, r));
  CHECK_FALSE(point_in_region({1000, 900}, r));
  CHECK_FALSE(point_in_region({859, 500}, r));
  CHECK_FALSE(point_in_region({1000, 817}, r));  // strict bound
}

TEST_CASE("complement law") {
  Rng rng(1);
  const Region regions[] = {room_a120(), disk({0, 0}, 50), rect(-10, 10, -20, 20),
                            union_of({disk({30, 0}, 10), rect(0, 1, 0, 1)})};
  for (const Region& r : regions)
    for (int i = 0; i < 500; ++i) {
      const Point p(uniform(rng, -100, 1500), uniform(rng, -100, 1000));
      CHECK(point_in_region(p, complement(r)) == !point_in_region(p, r));
    }
}

TEST_CASE("empty union and intersection") {
  CHECK_FALSE(point_in_region({0, 0}, union_of({})));
  CHECK(point_in_region({0, 0}, intersection_of({})));
}

TEST_CASE("segment crossing an axis rectangle") {
  const Polyline path({{0, 0}, {10, 0}});
  const auto c = path_region_crossings(path, rect(2, 5, -1, 1, "box"));
  REQUIRE(c.size() == 2);
  CHECK(c[0].arclength == doctest::Approx(2.0));
  CHECK(c[0].kind == CrossingKind::Enter);
  CHECK(c[0].label == "box");
  CHECK(c[1].arclength == doctest::Approx(5.0));
  CHECK(c[1].kind == CrossingKind::Exit);
}

TEST_CASE("segment crossing a disk along a chord") {
  const Polyline path({{0, 0}, {300, 0}});
  const auto c = path_region_crossings(path, disk({150, 0}, 100));
  REQUIRE(c.size() == 2);
  CHECK(c[0].arclength == doctest::Approx(50.0));
  CHECK(c[1].arclength == doctest::Approx(250.0));
}

TEST_CASE("doorway disk crossing matches a fine-step search") {
  const Point a(2400, 600), b(2300, 800), door(2300, 817);
  const Region dw = disk(door, 100, false);
  const auto c = path_region_crossings(Polyline({a, b}), dw);
  REQUIRE(c.size() == 1);
  CHECK(c[0].kind == CrossingKind::Enter);
  // Brute force at 1e-4 cm, then bisect inside the bracketing step.
  const double len = distance(a, b);
  const Point dir = (b - a) / len;
  double lo = 0.0;
  for (double s = 0.0; s <= len; s += 1e-4) {
    if (point_in_region(a + s * dir, dw)) break;
    lo = s;
  }
  double hi = lo + 1e-4;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (point_in_region(a + mid * dir, dw) ? hi : lo) = mid;
  }
  CHECK(std::abs(c[0].arclength - hi) < 1e-6);
}

TEST_CASE("polyline crossings follow path order across segments") {
  const Polyline path({{0, 0}, {10, 0}, {10, 10}});
  const auto c = path_region_crossings(path, rect(8, 12, -1, 5));
  REQUIRE(c.size() == 2);
  CHECK(c[0].arclength == doctest::Approx(8.0));
  CHECK(c[1].arclength == doctest::Approx(15.0));
}

TEST_CASE("polyline arclength parametrization") {
  const Polyline path({{0, 0}, {3, 4}, {3, 10}});
  CHECK(path.length() == doctest::Approx(11.0));
  CHECK(path.point_at(5.0).isApprox(Point(3, 4)));
  CHECK(path.point_at(8.0).isApprox(Point(3, 7)));
  CHECK(path.segment_at(6.0) == 1);
  const Polyline rest = path.suffix(2.5);
  CHECK(rest.length() == doctest::Approx(8.5));
  CHECK(rest.vertices().front().isApprox(Point(1.5, 2.0)));
}

TEST_CASE("degenerate polylines are rejected") {
  CHECK_THROWS_AS(Polyline({{0, 0}}), DegenerateGeometry);
  CHECK_THROWS_AS(Polyline({{0, 0}, {0, 0}}), DegenerateGeometry);
  CHECK_THROWS_AS(Polyline({{0, 0}, {NAN, 1}}), DegenerateGeometry);
}

TEST_CASE("first entry time along a velocity") {
  CHECK(first_entry_time({0, 0}, {10, 0}, rect(50, 60, -1, 1), 100) == doctest::Approx(5.0));
  CHECK(first_entry_time({0, 0}, {-10, 0}, rect(50, 60, -1, 1), 100) < 0);
}

TEST_CASE("rotation") {
  CHECK(rotated(Point(1, 0), M_PI / 2).isApprox(Point(0, 1)));
}

TEST_CASE("region equality and printing") {
  CHECK(room_a120() == room_a120());
  CHECK(disk({0, 0}, 1) != disk({0, 0}, 2));
  CHECK_FALSE(to_string(room_a120()).empty());
}
