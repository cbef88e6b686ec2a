#pragma once

// Randomized two-body collision setups and conservation-law checkers.

#include <random>

#include "oracles.hpp"
#include "polyarena/physics.hpp"

namespace polyarena::testing {

struct CollisionCase {
  Sprite a;
  Sprite b;
  Contact contact;
};

/// Two overlapping random convex bodies moving toward each other.
inline CollisionCase random_collision(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.2, 5.0);
  for (;;) {
    auto make = [&](Vec2 center) {
      Sprite s;
      s.shape = std::make_shared<const Polygon>(Polygon::from_vertices(random_convex_polygon(rng, {0, 0}, 0.5)));
      s.position = center;
      s.angle = 3.0 * u(rng);
      s.scale = 0.1;
      s.mass = mass(rng);
      s.velocity = {0.02 * u(rng), 0.02 * u(rng)};
      s.angular_velocity = 0.05 * u(rng);
      return s;
    };
    CollisionCase c{make({0.5, 0.5}), make({0.5 + 0.08 * u(rng), 0.5 + 0.08 * u(rng)}), {}};
    c.a.id = 1;
    c.b.id = 2;
    const auto contact = detect_contact(sprite_world_vertices(c.a), sprite_world_vertices(c.b));
    if (!contact) continue;
    c.contact = *contact;
    // Ensure approach along the normal so an impulse actually fires.
    const Vec2 n = contact->normal;
    const double closing = dot(c.b.velocity - c.a.velocity, n);
    if (closing > -1e-3) {
      c.a.velocity += (0.01 + closing) * n;
      c.b.velocity -= 0.01 * n;
    }
    return c;
  }
}

inline Vec2 linear_momentum(const Sprite& a, const Sprite& b) { return a.mass * a.velocity + b.mass * b.velocity; }

inline double kinetic_energy(const Sprite& a, const Sprite& b, bool with_rotation) {
  double e = 0.5 * a.mass * dot(a.velocity, a.velocity) + 0.5 * b.mass * dot(b.velocity, b.velocity);
  if (with_rotation) {
    e += 0.5 * a.inertia() * a.angular_velocity * a.angular_velocity +
         0.5 * b.inertia() * b.angular_velocity * b.angular_velocity;
  }
  return e;
}

/// Angular momentum of the pair about a fixed point.
inline double angular_momentum_about(const Sprite& a, const Sprite& b, Vec2 p) {
  return a.mass * cross(a.position - p, a.velocity) + a.inertia() * a.angular_velocity +
         b.mass * cross(b.position - p, b.velocity) + b.inertia() * b.angular_velocity;
}

/// Normal relative velocity at the contact point.
inline double normal_relative_velocity(const Sprite& a, const Sprite& b, const Contact& c, bool with_rotation) {
  Vec2 va = a.velocity, vb = b.velocity;
  if (with_rotation) {
    const Vec2 ra = c.point - a.position, rb = c.point - b.position;
    va += Vec2{-a.angular_velocity * ra.y, a.angular_velocity * ra.x};
    vb += Vec2{-b.angular_velocity * rb.y, b.angular_velocity * rb.x};
  }
  return dot(vb - va, c.normal);
}

inline void apply_kicks(const KinematicDelta& d, Sprite& a, Sprite& b) {
  a.velocity += d.at(a.id).dv;
  a.angular_velocity += d.at(a.id).dw;
  b.velocity += d.at(b.id).dv;
  b.angular_velocity += d.at(b.id).dw;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace polyarena::testing
