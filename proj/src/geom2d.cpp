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

#include "hyproj/geom2d.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hyproj::geom2d {

Polyline::Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw DegenerateGeometry("polyline needs at least two vertices");
  cumulative_.reserve(vertices_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertices_[i].allFinite()) throw DegenerateGeometry("polyline vertex is not finite");
    if (i == 0) continue;
    const double len = distance(vertices_[i - 1], vertices_[i]);
    if (len <= 0.0) throw DegenerateGeometry("polyline has repeated consecutive vertices");
    cumulative_.push_back(cumulative_.back() + len);
  }
}

std::size_t Polyline::segment_at(double s) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return std::min(i, segment_count() - 1);
}

Point Polyline::point_at(double s) const {
  if (s <= 0.0) return vertices_.front();
  if (s >= length()) return vertices_.back();
  const std::size_t i = segment_at(s);
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double u = (s - cumulative_[i]) / seg;
  return vertices_[i] + u * (vertices_[i + 1] - vertices_[i]);
}

Polyline Polyline::suffix(double s) const {
  std::vector<Point> out;
  out.push_back(point_at(s));
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    if (cumulative_[i] > s && distance(vertices_[i], out.back()) > kCrossingTolerance)
      out.push_back(vertices_[i]);
  if (out.size() < 2) throw DegenerateGeometry("empty path suffix");
  return Polyline(std::move(out));
}

Region rect(double xmin, double xmax, double ymin, double ymax, std::string label) {
  return Region{AxisRect{xmin, xmax, ymin, ymax, std::move(label)}};
}

Region disk(const Point& center, double radius, bool closed, std::string label) {
  return Region{Disk{center, radius, closed, std::move(label)}};
}

Region half_plane(Axis axis, double bound, Side side, bool strict, std::string label) {
  return Region{HalfPlane{axis, bound, side, strict, std::move(label)}};
}

Region union_of(std::vector<Region> parts) { return Region{UnionOf{std::move(parts)}}; }

Region intersection_of(std::vector<Region> parts) {
  return Region{IntersectionOf{std::move(parts)}};
}

Region complement(Region inner) {
  return Region{ComplementOf{std::make_shared<const Region>(std::move(inner))}};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double coord(const Point& p, Axis a) { return a == Axis::X ? p.x() : p.y(); }

}  // namespace

void validate(const Region& r) {
  std::visit(overloaded{
                 [](const AxisRect& a) {
                   if (!(a.xmin < a.xmax && a.ymin < a.ymax))
                     throw DegenerateGeometry("rectangle must have xmin<xmax and ymin<ymax");
                 },
                 [](const Disk& d) {
                   if (!d.center.allFinite() || !(d.radius > 0.0) || !std::isfinite(d.radius))
                     throw DegenerateGeometry("disk radius must be positive");
                 },
                 [](const HalfPlane& h) {
                   if (!std::isfinite(h.bound)) throw DegenerateGeometry("half-plane bound");
                 },
                 [](const UnionOf& u) {
                   for (const Region& p : u.parts) validate(p);
                 },
                 [](const IntersectionOf& u) {
                   for (const Region& p : u.parts) validate(p);
                 },
                 [](const ComplementOf& c) {
                   if (!c.inner) throw DegenerateGeometry("empty complement");
                   validate(*c.inner);
                 },
             },
             r.node);
}

bool point_in_region(const Point& p, const Region& r) {
  return std::visit(
      overloaded{
          [&](const AxisRect& a) {
            return a.xmin <= p.x() && p.x() <= a.xmax && a.ymin <= p.y() && p.y() <= a.ymax;
          },
          [&](const Disk& d) {
            const double dist = distance(p, d.center);
            return d.closed ? dist <= d.radius : dist < d.radius;
          },
          [&](const HalfPlane& h) {
            const double v = coord(p, h.axis);
            if (h.side == Side::Below) return h.strict ? v < h.bound : v <= h.bound;
            return h.strict ? v > h.bound : v >= h.bound;
          },
          [&](const UnionOf& u) {
            return std::any_of(u.parts.begin(), u.parts.end(),
                               [&](const Region& q) { return point_in_region(p, q); });
          },
          [&](const IntersectionOf& u) {
            return std::all_of(u.parts.begin(), u.parts.end(),
                               [&](const Region& q) { return point_in_region(p, q); });
          },
          [&](const ComplementOf& c) { return !point_in_region(p, *c.inner); },
      },
      r.node);
}

bool operator==(const Region& a, const Region& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const AxisRect& x) {
            const auto& y = std::get<AxisRect>(b.node);
            return x.xmin == y.xmin && x.xmax == y.xmax && x.ymin == y.ymin && x.ymax == y.ymax;
          },
          [&](const Disk& x) {
            const auto& y = std::get<Disk>(b.node);
            return x.center == y.center && x.radius == y.radius && x.closed == y.closed;
          },
          [&](const HalfPlane& x) {
            const auto& y = std::get<HalfPlane>(b.node);
            return x.axis == y.axis && x.bound == y.bound && x.side == y.side &&
                   x.strict == y.strict;
          },
          [&](const UnionOf& x) { return x.parts == std::get<UnionOf>(b.node).parts; },
          [&](const IntersectionOf& x) {
            return x.parts == std::get<IntersectionOf>(b.node).parts;
          },
          [&](const ComplementOf& x) {
            return *x.inner == *std::get<ComplementOf>(b.node).inner;
          },
      },
      a.node);
}

std::string to_string(const Region& r) {
  auto list = [](const char* head, const std::vector<Region>& parts) {
    std::string out = fmt::format("({}", head);
    for (const Region& p : parts) out += " " + to_string(p);
    return out + ")";
  };
  return std::visit(
      overloaded{
          [](const AxisRect& a) {
            return fmt::format("(rect {} {} {} {})", a.xmin, a.xmax, a.ymin, a.ymax);
          },
          [](const Disk& d) {
            return fmt::format("({} {} {} {})", d.closed ? "disk" : "open-disk", d.center.x(),
                               d.center.y(), d.radius);
          },
          [](const HalfPlane& h) {
            const char* op = h.side == Side::Below ? (h.strict ? "<" : "<=")
                                                   : (h.strict ? ">" : ">=");
            return fmt::format("({} {} {})", op, h.axis == Axis::X ? "x" : "y", h.bound);
          },
          [&](const UnionOf& u) { return list("or", u.parts); },
          [&](const IntersectionOf& u) { return list("and", u.parts); },
          [](const ComplementOf& c) { return "(not " + to_string(*c.inner) + ")"; },
      },
      r.node);
}

namespace {

struct Candidate {
  double s;
  std::string_view label;
};

void line_candidate(double a, double b, double bound, double s0, double len,
                    std::string_view label, std::vector<Candidate>& out) {
  if (a == b) return;
  const double u = (bound - a) / (b - a);
  if (u >= 0.0 && u <= 1.0) out.push_back({s0 + u * len, label});
}

void collect(const Region& r, const Point& a, const Point& b, double s0, double len,
             std::vector<Candidate>& out) {
  std::visit(overloaded{
                 [&](const AxisRect& q) {
                   line_candidate(a.x(), b.x(), q.xmin, s0, len, q.label, out);
                   line_candidate(a.x(), b.x(), q.xmax, s0, len, q.label, out);
                   line_candidate(a.y(), b.y(), q.ymin, s0, len, q.label, out);
                   line_candidate(a.y(), b.y(), q.ymax, s0, len, q.label, out);
                 },
                 [&](const HalfPlane& h) {
                   line_candidate(coord(a, h.axis), coord(b, h.axis), h.bound, s0, len, h.label,
                                  out);
                 },
                 [&](const Disk& d) {
                   // |a + s e - c|^2 = r^2 with unit direction e.
                   const Point e = (b - a) / len;
                   const Point w = a - d.center;
                   const double half_b = w.dot(e);
                   const double disc = half_b * half_b - (w.squaredNorm() - d.radius * d.radius);
                   if (disc <= kCrossingTolerance) return;
                   const double root = std::sqrt(disc);
                   for (double s : {-half_b - root, -half_b + root})
                     if (s >= 0.0 && s <= len) out.push_back({s0 + s, d.label});
                 },
                 [&](const UnionOf& u) {
                   for (const Region& p : u.parts) collect(p, a, b, s0, len, out);
                 },
                 [&](const IntersectionOf& u) {
                   for (const Region& p : u.parts) collect(p, a, b, s0, len, out);
                 },
                 [&](const ComplementOf& c) { collect(*c.inner, a, b, s0, len, out); },
             },
             r.node);
}

}  // namespace

std::vector<Crossing> path_region_crossings(const Polyline& path, const Region& r) {
  std::vector<Candidate> cand;
  const auto& v = path.vertices();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double s0 = path.arclength_at_vertex(i);
    collect(r, v[i], v[i + 1], s0, path.arclength_at_vertex(i + 1) - s0, cand);
  }
  cand.push_back({0.0, {}});
  std::stable_sort(cand.begin(), cand.end(),
                   [](const Candidate& x, const Candidate& y) { return x.s < y.s; });
  std::vector<Candidate> uniq;
  for (const Candidate& c : cand)
    if (uniq.empty() || c.s - uniq.back().s > kCrossingTolerance) uniq.push_back(c);

  std::vector<Crossing> out;
  const double total = path.length();
  bool state = point_in_region(path.point_at(0.0), r);
  auto emit = [&](const Candidate& c, bool now) {
    if (now == state) return;
    out.push_back({c.s, path.point_at(c.s), now ? CrossingKind::Enter : CrossingKind::Exit,
                   std::string(c.label)});
    state = now;
  };
  for (std::size_t k = 0; k < uniq.size(); ++k) {
    const double next = k + 1 < uniq.size() ? uniq[k + 1].s : total;
    if (next - uniq[k].s <= kCrossingTolerance) {
      // candidate at the path end: compare with the endpoint itself
      if (k + 1 == uniq.size()) emit(uniq[k], point_in_region(path.point_at(total), r));
      continue;
    }
    emit(uniq[k], point_in_region(path.point_at(0.5 * (uniq[k].s + next)), r));
  }
  return out;
}

double first_entry_time(const Point& p, const Point& v, const Region& r, double max_time) {
  if (point_in_region(p, r)) return 0.0;
  const double speed = v.norm();
  if (speed == 0.0 || max_time <= 0.0) return -1.0;
  const Polyline ray({p, p + v * max_time});
  for (const Crossing& c : path_region_crossings(ray, r))
    if (c.kind == CrossingKind::Enter) return c.arclength / speed;
  return -1.0;
}

}  // namespace hyproj::geom2d
