#include "polyarena/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "polyarena/errors.hpp"

namespace polyarena {
namespace {

constexpr double kAreaEpsilon = 1e-12;
constexpr double kTouchEpsilon = 1e-12;

double signed_area(std::span<const Vec2> v) {
  double twice = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    twice += cross(v[i], v[(i + 1) % n]);
  }
  return 0.5 * twice;
}

struct Interval {
  double lo;
  double hi;
};

Interval project(std::span<const Vec2> v, Vec2 axis) {
  Interval r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& p : v) {
    const double d = dot(p, axis);
    r.lo = std::min(r.lo, d);
    r.hi = std::max(r.hi, d);
  }
  return r;
}

Vec2 centroid_of_vertices(std::span<const Vec2> v) {
  Vec2 c;
  for (const Vec2& p : v) c += p;
  return (1.0 / static_cast<double>(v.size())) * c;
}

// Average of the vertices whose projection onto `axis` is within tolerance of
// the minimum. Flat faces resolve to their midpoint instead of an arbitrary end.
Vec2 support_min(std::span<const Vec2> v, Vec2 axis) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : v) best = std::min(best, dot(p, axis));
  Vec2 sum;
  int count = 0;
  for (const Vec2& p : v) {
    if (dot(p, axis) <= best + 1e-9) {
      sum += p;
      ++count;
    }
  }
  return (1.0 / count) * sum;
}

}  // namespace

AreaCentroid area_and_centroid(std::span<const Vec2> vertices) {
  if (vertices.size() < 3) throw DegeneratePolygon("polygon needs at least 3 vertices");
  // Shift to the first vertex to keep the products well conditioned.
  const Vec2 origin = vertices[0];
  double twice_area = 0.0;
  Vec2 moment;
  for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
    const Vec2 a = vertices[i] - origin;
    const Vec2 b = vertices[(i + 1) % n] - origin;
    const double c = cross(a, b);
    twice_area += c;
    moment += c * (a + b);
  }
  const double area = 0.5 * twice_area;
  if (std::abs(area) < kAreaEpsilon) throw DegeneratePolygon("polygon area is zero");
  const Vec2 centroid = origin + (1.0 / (6.0 * area)) * moment;
  return {std::abs(area), centroid};
}

Polygon Polygon::from_vertices(std::vector<Vec2> vertices) {
  for (const Vec2& v : vertices) {
    if (!v.finite()) throw DegeneratePolygon("polygon vertex is not finite");
  }
  const AreaCentroid ac = area_and_centroid(vertices);
  if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  for (Vec2& v : vertices) v -= ac.centroid;

  // Convex and simple: every turn is a left turn (collinear allowed) and the
  // exterior angles sum to one full revolution.
  const std::size_t n = vertices.size();
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    const double c = cross(e0, e1);
    if (c < -1e-12 * (e0.norm() * e1.norm() + 1e-300)) {
      throw NonConvexPolygon("polygon is not convex");
    }
    turning += std::atan2(c, dot(e0, e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw NonConvexPolygon("polygon is self-intersecting");
  }

  Polygon p;
  p.vertices_ = std::move(vertices);
  p.area_ = ac.area;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = p.vertices_[i];
    const Vec2 b = p.vertices_[(i + 1) % n];
    sum += cross(a, b) * (dot(a, a) + dot(a, b) + dot(b, b));
  }
  p.unit_inertia_ = sum / (12.0 * p.area_);
  return p;
}

double moment_of_inertia(const Polygon& polygon, double mass) {
  if (!(mass > 0.0)) throw NonPositiveMass("mass must be positive");
  return mass * polygon.unit_inertia();
}

bool point_in_polygon(Vec2 point, std::span<const Vec2> vertices) {
  const std::size_t n = vertices.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = vertices[j];
    const Vec2 b = vertices[i];
    // Boundary test: collinear with the edge and inside its extent.
    const Vec2 ab = b - a;
    const Vec2 ap = point - a;
    const double len2 = dot(ab, ab);
    if (std::abs(cross(ab, ap)) <= 1e-12 * std::sqrt(len2) || ap == Vec2{}) {
      const double t = dot(ap, ab);
      if (t >= -1e-12 && t <= len2 + 1e-12) return true;
    }
    if ((a.y > point.y) != (b.y > point.y)) {
      const double x_at = a.x + (point.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (point.x < x_at) inside = !inside;
    }
  }
  return inside;
}

void world_vertices_into(const Polygon& polygon, Vec2 position, double angle, double scale,
                         std::vector<Vec2>& out) {
  if (!(scale > 0.0)) throw NonPositiveScale("scale must be positive");
  const double c = std::cos(angle) * scale;
  const double s = std::sin(angle) * scale;
  const auto local = polygon.vertices();
  out.resize(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    const Vec2 v = local[i];
    out[i] = {position.x + c * v.x - s * v.y, position.y + s * v.x + c * v.y};
  }
}

std::vector<Vec2> world_vertices(const Polygon& polygon, Vec2 position, double angle, double scale) {
  std::vector<Vec2> out;
  world_vertices_into(polygon, position, angle, scale, out);
  return out;
}

std::optional<Contact> detect_contact(std::span<const Vec2> a, std::span<const Vec2> b) {
  double best_overlap = std::numeric_limits<double>::infinity();
  Vec2 best_normal;
  bool reference_is_a = true;

  auto test_edges = [&](std::span<const Vec2> poly, bool from_a) {
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
      const Vec2 edge = poly[(i + 1) % n] - poly[i];
      const double len = edge.norm();
      if (len == 0.0) continue;
      const Vec2 axis{edge.y / len, -edge.x / len};  // outward for CCW
      const Interval pa = project(a, axis);
      const Interval pb = project(b, axis);
      const double forward = pa.hi - pb.lo;   // B ahead of A along axis
      const double backward = pb.hi - pa.lo;  // B behind A along axis
      const double overlap = std::min(forward, backward);
      if (overlap <= kTouchEpsilon) return false;
      if (overlap < best_overlap) {
        best_overlap = overlap;
        if (forward < backward) {
          best_normal = axis;
        } else if (backward < forward) {
          best_normal = -axis;
        } else {
          const Vec2 d = centroid_of_vertices(b) - centroid_of_vertices(a);
          best_normal = dot(d, axis) < 0.0 ? -axis : axis;
        }
        reference_is_a = from_a;
      }
    }
    return true;
  };

  if (!test_edges(a, true) || !test_edges(b, false)) return std::nullopt;

  Contact contact;
  contact.normal = best_normal;
  contact.depth = best_overlap;
  // Deepest vertex of the incident body against the reference face.
  contact.point = reference_is_a ? support_min(b, best_normal) : support_min(a, -best_normal);
  return contact;
}

Bounds bounds_of(std::span<const Vec2> vertices) {
  Bounds b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Vec2& v : vertices) {
    b.lo.x = std::min(b.lo.x, v.x);
    b.lo.y = std::min(b.lo.y, v.y);
    b.hi.x = std::max(b.hi.x, v.x);
    b.hi.y = std::max(b.hi.y, v.y);
  }
  return b;
}

std::vector<Vec2> regular_polygon(int sides, double circumradius, double phase) {
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int k = 0; k < sides; ++k) {
    const double t = phase + 2.0 * std::numbers::pi * k / sides;
    v.push_back({circumradius * std::cos(t), circumradius * std::sin(t)});
  }
  return v;
}

namespace {

Polygon unit_box_normalized(std::vector<Vec2> v) {
  const Bounds b = bounds_of(v);
  const double side = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
  for (Vec2& p : v) p *= 1.0 / side;
  return Polygon::from_vertices(std::move(v));
}

}  // namespace

const Polygon& named_shape(std::string_view name) {
  static const Polygon square = Polygon::from_vertices({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  static const Polygon circle = unit_box_normalized(regular_polygon(kCircleSides));
  static const Polygon triangle = unit_box_normalized(regular_polygon(3, 1.0, std::numbers::pi / 2));
  static const Polygon pentagon = unit_box_normalized(regular_polygon(5, 1.0, std::numbers::pi / 2));
  if (name == "square") return square;
  if (name == "circle") return circle;
  if (name == "triangle") return triangle;
  if (name == "pentagon") return pentagon;
  throw UnknownShapeName("unknown shape name '" + std::string(name) + "'");
}

}  // namespace polyarena
