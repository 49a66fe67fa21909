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

#include <Eigen/Core>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hyproj/error.hpp"

namespace hyproj::geom2d {

/// Position in centimeters.
using Point = Eigen::Vector2d;

/// Euclidean distance between two points of any 2-vector expression type.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).norm();
}

/// `v` rotated counter-clockwise by `radians`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> rotated(const Eigen::MatrixBase<Derived>& v,
                                                      typename Derived::Scalar radians) {
  using std::cos;
  using std::sin;
  const auto c = cos(radians), s = sin(radians);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

inline constexpr double kCrossingTolerance = 1e-9;

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class Polyline {
 public:
  /// Throws DegenerateGeometry unless there are >= 2 finite vertices and
  /// consecutive vertices are distinct.
  explicit Polyline(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t segment_count() const { return vertices_.size() - 1; }
  double length() const { return cumulative_.back(); }
  /// Arclength at vertex i.
  double arclength_at_vertex(std::size_t i) const { return cumulative_[i]; }
  Point point_at(double s) const;
  /// Index of the segment containing arclength s (the later one at a vertex).
  std::size_t segment_at(double s) const;
  /// The part of the path from arclength s to the end. Requires s < length().
  Polyline suffix(double s) const;

 private:
  std::vector<Point> vertices_;
  std::vector<double> cumulative_;
};

struct AxisRect {
  double xmin, xmax, ymin, ymax;
  std::string label;
};

/// Disk of points within `radius` of `center`; `closed` includes the circle.
struct Disk {
  Point center;
  double radius;
  bool closed = true;
  std::string label;
};

enum class Axis { X, Y };
enum class Side { Below, Above };

/// coordinate < bound (Below) or > bound (Above); `strict` excludes equality.
struct HalfPlane {
  Axis axis;
  double bound;
  Side side;
  bool strict = true;
  std::string label;
};

struct Region;

struct UnionOf {
  std::vector<Region> parts;
};
struct IntersectionOf {
  std::vector<Region> parts;
};
struct ComplementOf {
  std::shared_ptr<const Region> inner;
};

struct Region {
  std::variant<AxisRect, Disk, HalfPlane, UnionOf, IntersectionOf, ComplementOf> node;
};

Region rect(double xmin, double xmax, double ymin, double ymax, std::string label = {});
Region disk(const Point& center, double radius, bool closed = true, std::string label = {});
Region half_plane(Axis axis, double bound, Side side, bool strict = true, std::string label = {});
Region union_of(std::vector<Region> parts);
Region intersection_of(std::vector<Region> parts);
Region complement(Region inner);

/// Throws DegenerateGeometry on empty rectangles, nonpositive radii or
/// non-finite numbers.
void validate(const Region& r);

bool point_in_region(const Point& p, const Region& r);

bool operator==(const Region& a, const Region& b);
inline bool operator!=(const Region& a, const Region& b) { return !(a == b); }

std::string to_string(const Region& r);

enum class CrossingKind { Enter, Exit };

struct Crossing {
  double arclength;
  Point point;
  CrossingKind kind;
  /// Label of the leaf region whose boundary was crossed, if any.
  std::string label;
};

/// Boundary crossings of `r` along `path`, strictly increasing in arclength.
/// Grazing contacts (tangent discriminant within tolerance) yield nothing.
std::vector<Crossing> path_region_crossings(const Polyline& path, const Region& r);

/// Earliest time t >= 0 at which p + t*v lies in `r`, searching up to
/// `max_time`. Returns a negative value if none.
double first_entry_time(const Point& p, const Point& v, const Region& r, double max_time);

}  // namespace hyproj::geom2d
