#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace polyarena {

/// A point or vector in arena units. The visible playfield is [0,1]^2.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) noexcept = default;

  double norm() const noexcept { return std::hypot(x, y); }
  bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
/// Cross product of a scalar angular rate with a planar vector (w × r).
constexpr Vec2 cross(double w, Vec2 r) noexcept { return {-w * r.y, w * r.x}; }

/// Collision manifold between two convex bodies.
struct Contact {
  Vec2 normal;  ///< unit vector pointing from body A toward body B
  double depth = 0.0;
  Vec2 point;   ///< world frame
};

struct AreaCentroid {
  double area = 0.0;
  Vec2 centroid;
};

/// Shoelace area (absolute value) and centroid of a simple polygon.
/// Throws DegeneratePolygon when |area| < 1e-12 or fewer than 3 vertices.
AreaCentroid area_and_centroid(std::span<const Vec2> vertices);

/// Convex polygon in its local frame: counter-clockwise, centroid at origin.
class Polygon {
 public:
  /// Validates and normalizes: clockwise input is reversed, the result is
  /// re-centered on its centroid. Throws DegeneratePolygon or NonConvexPolygon.
  static Polygon from_vertices(std::vector<Vec2> vertices);

  std::span<const Vec2> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  double area() const noexcept { return area_; }
  /// Second moment of area about the centroid per unit mass.
  double unit_inertia() const noexcept { return unit_inertia_; }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.vertices_ == b.vertices_; }

 private:
  Polygon() = default;
  std::vector<Vec2> vertices_;
  double area_ = 0.0;
  double unit_inertia_ = 0.0;
};

/// Moment of inertia about the centroid for a uniform lamina of the given mass.
/// Throws NonPositiveMass.
double moment_of_inertia(const Polygon& polygon, double mass);

/// Boundary-inclusive containment test for a simple polygon in either winding.
bool point_in_polygon(Vec2 point, std::span<const Vec2> vertices);

/// Applies position + scale * R(angle) * v to every local vertex.
/// Throws NonPositiveScale.
std::vector<Vec2> world_vertices(const Polygon& polygon, Vec2 position, double angle, double scale);
void world_vertices_into(const Polygon& polygon, Vec2 position, double angle, double scale,
                         std::vector<Vec2>& out);

/// Separating-axis test between two convex CCW polygons given in world frame.
/// Returns nothing when separated or merely touching (overlap <= 1e-12).
std::optional<Contact> detect_contact(std::span<const Vec2> a, std::span<const Vec2> b);

/// Axis-aligned bounds, used as a cheap broad phase.
struct Bounds {
  Vec2 lo;
  Vec2 hi;
  bool overlaps(const Bounds& o) const noexcept {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
};
Bounds bounds_of(std::span<const Vec2> vertices);

/// Number of sides used for the "circle" named shape.
inline constexpr int kCircleSides = 24;

/// Named unit shapes: square, circle, triangle, pentagon. Each is scaled so
/// the larger side of its bounding box is 1. Throws UnknownShapeName.
const Polygon& named_shape(std::string_view name);

/// Regular n-gon with circumradius 1 and a vertex on the +x axis.
std::vector<Vec2> regular_polygon(int sides, double circumradius = 1.0, double phase = 0.0);

}  // namespace polyarena
