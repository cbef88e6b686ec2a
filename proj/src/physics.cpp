#include "polyarena/physics.hpp"

#include <cmath>
#include <unordered_map>

#include "polyarena/errors.hpp"

namespace polyarena {

void KinematicDelta::add(SpriteId id, Vec2 dv, double dw) {
  Kick& k = kicks_[id];
  k.dv += dv;
  k.dw += dw;
}

void KinematicDelta::merge(const KinematicDelta& other) {
  for (const auto& [id, k] : other.kicks_) add(id, k.dv, k.dw);
}

Kick KinematicDelta::at(SpriteId id) const {
  const auto it = kicks_.find(id);
  return it == kicks_.end() ? Kick{} : it->second;
}

void KinematicDelta::apply(State& state) const {
  if (kicks_.empty()) return;
  for (auto& layer : state.layers()) {
    for (Sprite& s : layer.sprites) {
      const auto it = kicks_.find(s.id);
      if (it == kicks_.end()) continue;
      s.velocity += it->second.dv;
      s.angular_velocity += it->second.dw;
    }
  }
}

KinematicDelta apply_drag(double coeff, std::span<const Sprite> sprites) {
  KinematicDelta d;
  if (coeff == 0.0) return d;
  for (const Sprite& s : sprites) d.add(s.id, -coeff * s.velocity, -coeff * s.angular_velocity);
  return d;
}

KinematicDelta apply_constant_force(Vec2 force, std::span<const Sprite> sprites) {
  KinematicDelta d;
  if (force == Vec2{}) return d;
  for (const Sprite& s : sprites) d.add(s.id, s.inverse_mass() * force);
  return d;
}

KinematicDelta apply_friction(double coeff, std::span<const Sprite> sprites) {
  KinematicDelta d;
  if (coeff == 0.0) return d;
  for (const Sprite& s : sprites) {
    const double speed = s.velocity.norm();
    if (speed == 0.0) continue;
    d.add(s.id, (-std::min(coeff, speed) / speed) * s.velocity);
  }
  return d;
}

KinematicDelta apply_tether(const Sprite& a, const Sprite& b, double rest_length) {
  KinematicDelta d;
  const Vec2 offset = b.position - a.position;
  const double dist = offset.norm();
  const double inv_sum = a.inverse_mass() + b.inverse_mass();
  if (dist == 0.0 || inv_sum == 0.0) return d;
  const Vec2 n = (1.0 / dist) * offset;
  const double closing = dot(b.velocity - a.velocity, n);
  const double wanted = -(dist - rest_length);
  const double j = (wanted - closing) / inv_sum;
  if (std::abs(j) < 1e-15) return d;
  d.add(a.id, (-j * a.inverse_mass()) * n);
  d.add(b.id, (j * b.inverse_mass()) * n);
  return d;
}

KinematicDelta resolve_collision(const Contact& contact, const Sprite& a, const Sprite& b, double elasticity,
                                 bool update_angular) {
  KinematicDelta d;
  const Vec2 n = contact.normal;
  const Vec2 ra = contact.point - a.position;
  const Vec2 rb = contact.point - b.position;
  Vec2 va = a.velocity;
  Vec2 vb = b.velocity;
  if (update_angular) {
    va += cross(a.angular_velocity, ra);
    vb += cross(b.angular_velocity, rb);
  }
  const double vn = dot(vb - va, n);
  if (vn >= 0.0) return d;

  const double ima = a.inverse_mass();
  const double imb = b.inverse_mass();
  double denom = ima + imb;
  const double ra_n = cross(ra, n);
  const double rb_n = cross(rb, n);
  double iia = 0.0;
  double iib = 0.0;
  if (update_angular) {
    iia = a.inverse_inertia();
    iib = b.inverse_inertia();
    denom += ra_n * ra_n * iia + rb_n * rb_n * iib;
  }
  if (!(denom > 0.0)) return d;

  const double j = -(1.0 + elasticity) * vn / denom;
  d.add(a.id, (-j * ima) * n, -j * ra_n * iia);
  d.add(b.id, (j * imb) * n, j * rb_n * iib);
  return d;
}

namespace {

std::vector<Sprite> const* layer_sprites(const State& state, const std::string& name) {
  return &state.layer(name).sprites;
}

void accumulate_over(const State& state, const std::vector<std::string>& layers, KinematicDelta& delta,
                     auto&& law) {
  for (const std::string& name : layers) delta.merge(law(std::span<const Sprite>(*layer_sprites(state, name))));
}

}  // namespace

Drag::Drag(double coeff, std::vector<std::string> layers) : coeff_(coeff), layers_(std::move(layers)) {
  if (!(coeff >= 0.0)) throw InvariantViolation("Drag coefficient must be >= 0");
}

void Drag::accumulate(const State& state, KinematicDelta& delta) const {
  accumulate_over(state, layers_, delta, [&](std::span<const Sprite> s) { return apply_drag(coeff_, s); });
}

ConstantForce::ConstantForce(Vec2 force, std::vector<std::string> layers) : force_(force), layers_(std::move(layers)) {
  if (!force.finite()) throw InvariantViolation("ConstantForce vector must be finite");
}

void ConstantForce::accumulate(const State& state, KinematicDelta& delta) const {
  accumulate_over(state, layers_, delta, [&](std::span<const Sprite> s) { return apply_constant_force(force_, s); });
}

Friction::Friction(double coeff, std::vector<std::string> layers) : coeff_(coeff), layers_(std::move(layers)) {
  if (!(coeff >= 0.0)) throw InvariantViolation("Friction coefficient must be >= 0");
}

void Friction::accumulate(const State& state, KinematicDelta& delta) const {
  accumulate_over(state, layers_, delta, [&](std::span<const Sprite> s) { return apply_friction(coeff_, s); });
}

Tether::Tether(std::string layer_a, std::string layer_b, double rest_length)
    : layer_a_(std::move(layer_a)), layer_b_(std::move(layer_b)), rest_length_(rest_length) {
  if (!(rest_length >= 0.0)) throw InvariantViolation("Tether rest_length must be >= 0");
}

Tether::Tether(SpriteId a, SpriteId b, double rest_length) : id_a_(a), id_b_(b), rest_length_(rest_length) {
  if (!(rest_length >= 0.0)) throw InvariantViolation("Tether rest_length must be >= 0");
}

void Tether::gather(const State& state, Constraints& out) const {
  if (layer_a_.empty()) {
    if (!state.find(id_a_) || !state.find(id_b_)) throw MissingSprite("tethered sprite no longer exists");
    out.tethers.push_back({id_a_, id_b_, rest_length_});
    return;
  }
  const auto& a = state.layer(layer_a_).sprites;
  const auto& b = state.layer(layer_b_).sprites;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    out.tethers.push_back({a[i].id, b[i].id, rest_length_});
  }
}

Collision::Collision(std::vector<std::pair<std::string, std::string>> layer_pairs, double elasticity,
                     bool update_angular)
    : layer_pairs_(std::move(layer_pairs)), elasticity_(elasticity), update_angular_(update_angular) {
  if (!(elasticity >= 0.0 && elasticity <= 1.0)) throw InvariantViolation("elasticity must be in [0, 1]");
}

void Collision::gather(const State& state, Constraints& out) const {
  struct Body {
    const Sprite* sprite;
    std::vector<Vec2> verts;
    Bounds bounds;
  };
  auto bodies_of = [](const std::vector<Sprite>& sprites) {
    std::vector<Body> bodies;
    bodies.reserve(sprites.size());
    for (const Sprite& s : sprites) {
      Body b{&s, sprite_world_vertices(s), {}};
      b.bounds = bounds_of(b.verts);
      bodies.push_back(std::move(b));
    }
    return bodies;
  };
  auto try_pair = [&](const Body& a, const Body& b) {
    if (a.sprite->inverse_mass() == 0.0 && b.sprite->inverse_mass() == 0.0) return;
    if (!a.bounds.overlaps(b.bounds)) return;
    if (auto c = detect_contact(a.verts, b.verts)) {
      out.contacts.push_back({a.sprite->id, b.sprite->id, *c, elasticity_, update_angular_});
    }
  };
  for (const auto& [la, lb] : layer_pairs_) {
    const auto a = bodies_of(state.layer(la).sprites);
    if (la == lb) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) try_pair(a[i], a[j]);
      }
    } else {
      const auto b = bodies_of(state.layer(lb).sprites);
      for (const Body& x : a) {
        for (const Body& y : b) try_pair(x, y);
      }
    }
  }
}

void step_physics(State& state, std::span<const Polymorphic<Force>> forces, const PhysicsConfig& config) {
  KinematicDelta kicks;
  for (const auto& f : forces) f->accumulate(state, kicks);
  kicks.apply(state);

  Constraints constraints;
  for (const auto& f : forces) f->gather(state, constraints);

  if (!constraints.contacts.empty() || !constraints.tethers.empty()) {
    std::unordered_map<SpriteId, Sprite*> by_id;
    for (auto& layer : state.layers()) {
      for (Sprite& s : layer.sprites) by_id.emplace(s.id, &s);
    }
    auto apply_to_pair = [&](const KinematicDelta& d, Sprite& a, Sprite& b) {
      const Kick ka = d.at(a.id);
      const Kick kb = d.at(b.id);
      a.velocity += ka.dv;
      a.angular_velocity += ka.dw;
      b.velocity += kb.dv;
      b.angular_velocity += kb.dw;
    };

    for (int pass = 0; pass < config.max_passes; ++pass) {
      bool active = false;
      for (const TetherConstraint& t : constraints.tethers) {
        Sprite& a = *by_id.at(t.a);
        Sprite& b = *by_id.at(t.b);
        const KinematicDelta d = apply_tether(a, b, t.rest_length);
        if (d.empty()) continue;
        active = true;
        apply_to_pair(d, a, b);
      }
      for (const ContactConstraint& c : constraints.contacts) {
        Sprite& a = *by_id.at(c.a);
        Sprite& b = *by_id.at(c.b);
        const KinematicDelta d = resolve_collision(c.contact, a, b, c.elasticity, c.update_angular);
        if (d.empty()) continue;
        active = true;
        apply_to_pair(d, a, b);
      }
      if (!active) break;
    }

    for (const ContactConstraint& c : constraints.contacts) {
      Sprite& a = *by_id.at(c.a);
      Sprite& b = *by_id.at(c.b);
      const double ima = a.inverse_mass();
      const double imb = b.inverse_mass();
      const double total = ima + imb;
      if (total == 0.0) continue;
      const double push = config.correction * c.contact.depth / total;
      a.position -= (push * ima) * c.contact.normal;
      b.position += (push * imb) * c.contact.normal;
    }
  }

  for (auto& layer : state.layers()) {
    for (Sprite& s : layer.sprites) {
      s.position += s.velocity;
      s.angle += s.angular_velocity;
    }
  }
}

}  // namespace polyarena
