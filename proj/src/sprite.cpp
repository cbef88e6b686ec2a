#include "polyarena/sprite.hpp"

#include <algorithm>
#include <cmath>

#include "polyarena/errors.hpp"

namespace polyarena {

bool operator==(const Sprite& a, const Sprite& b) {
  const bool same_shape = a.shape == b.shape || (a.shape && b.shape && *a.shape == *b.shape);
  return same_shape && a.id == b.id && a.shape_name == b.shape_name && a.position == b.position &&
         a.angle == b.angle && a.scale == b.scale && a.velocity == b.velocity &&
         a.angular_velocity == b.angular_velocity && a.mass == b.mass && a.color == b.color &&
         a.opacity == b.opacity && a.metadata == b.metadata;
}

void validate_sprite(const Sprite& s) {
  auto fail = [](const char* field, const char* why) {
    throw InvariantViolation(std::string("sprite field '") + field + "' " + why);
  };
  if (!s.shape) fail("shape", "is missing");
  if (!s.position.finite()) fail("position", "must be finite");
  if (!std::isfinite(s.angle)) fail("angle", "must be finite");
  if (!std::isfinite(s.scale) || !(s.scale > 0.0)) fail("scale", "must be finite and > 0");
  if (!s.velocity.finite()) fail("velocity", "must be finite");
  if (!std::isfinite(s.angular_velocity)) fail("angular_velocity", "must be finite");
  if (!(s.mass > 0.0)) fail("mass", "must be > 0");
  static constexpr const char* kColorNames[3] = {"c0", "c1", "c2"};
  for (int i = 0; i < 3; ++i) {
    if (s.color[i] < 0 || s.color[i] > 255) fail(kColorNames[i], "must be in [0, 255]");
  }
  if (s.opacity < 0 || s.opacity > 255) fail("opacity", "must be in [0, 255]");
}

namespace {

double as_number(const std::string& key, const FactorValue& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw InvariantViolation("factor '" + key + "' must be numeric");
}

int as_channel(const char* key, double v) {
  if (!std::isfinite(v)) throw InvariantViolation(std::string("sprite field '") + key + "' must be finite");
  const double r = std::round(v);
  if (r < 0.0 || r > 255.0) throw InvariantViolation(std::string("sprite field '") + key + "' must be in [0, 255]");
  return static_cast<int>(r);
}

constexpr std::string_view kMetaPrefix = "meta.";

}  // namespace

SpriteFactors SpriteFactors::from_assignment(const Assignment& assignment) {
  SpriteFactors f;
  for (const auto& [key, value] : assignment) {
    if (key == "shape") {
      if (const auto* s = std::get_if<std::string>(&value)) {
        f.shape = *s;
      } else {
        throw InvariantViolation("factor 'shape' must be a shape name");
      }
    } else if (key == "vertices") {
      if (const auto* v = std::get_if<std::vector<Vec2>>(&value)) {
        f.vertices = *v;
      } else {
        throw InvariantViolation("factor 'vertices' must be a vertex list");
      }
    } else if (key.starts_with(kMetaPrefix)) {
      const std::string name = key.substr(kMetaPrefix.size());
      if (const auto* d = std::get_if<double>(&value)) {
        f.metadata[name] = *d;
      } else if (const auto* s = std::get_if<std::string>(&value)) {
        f.metadata[name] = *s;
      } else {
        throw InvariantViolation("metadata '" + name + "' must be a number or string");
      }
    } else {
      std::optional<double>* slot = nullptr;
      if (key == "x") slot = &f.x;
      else if (key == "y") slot = &f.y;
      else if (key == "angle") slot = &f.angle;
      else if (key == "scale") slot = &f.scale;
      else if (key == "c0") slot = &f.c0;
      else if (key == "c1") slot = &f.c1;
      else if (key == "c2") slot = &f.c2;
      else if (key == "opacity") slot = &f.opacity;
      else if (key == "mass") slot = &f.mass;
      else if (key == "x_vel") slot = &f.x_vel;
      else if (key == "y_vel") slot = &f.y_vel;
      else if (key == "angular_vel") slot = &f.angular_vel;
      if (!slot) throw InvariantViolation("unknown sprite factor '" + key + "'");
      *slot = as_number(key, value);
    }
  }
  return f;
}

Sprite make_sprite(const SpriteFactors& f) {
  Sprite s;
  if (f.vertices) {
    s.shape = std::make_shared<const Polygon>(Polygon::from_vertices(*f.vertices));
  } else {
    const std::string name = f.shape.value_or("square");
    s.shape = std::shared_ptr<const Polygon>(std::shared_ptr<const Polygon>{}, &named_shape(name));
    s.shape_name = name;
  }
  s.position = {f.x.value_or(0.5), f.y.value_or(0.5)};
  s.angle = f.angle.value_or(0.0);
  s.scale = f.scale.value_or(0.1);
  s.velocity = {f.x_vel.value_or(0.0), f.y_vel.value_or(0.0)};
  s.angular_velocity = f.angular_vel.value_or(0.0);
  s.mass = f.mass.value_or(1.0);
  s.color = {as_channel("c0", f.c0.value_or(0.0)), as_channel("c1", f.c1.value_or(0.0)),
             as_channel("c2", f.c2.value_or(0.0))};
  s.opacity = as_channel("opacity", f.opacity.value_or(255.0));
  s.metadata = f.metadata;
  validate_sprite(s);
  return s;
}

void sprite_world_vertices_into(const Sprite& sprite, std::vector<Vec2>& out) {
  world_vertices_into(*sprite.shape, sprite.position, sprite.angle, sprite.scale, out);
}

std::vector<Vec2> sprite_world_vertices(const Sprite& sprite) {
  std::vector<Vec2> out;
  sprite_world_vertices_into(sprite, out);
  return out;
}

bool sprite_contains(const Sprite& sprite, Vec2 point) {
  return point_in_polygon(point, sprite_world_vertices(sprite));
}

bool is_mutable_field(const std::string& key) {
  static const char* const kFields[] = {"x",  "y",  "angle",   "scale", "c0",    "c1",
                                        "c2", "opacity", "mass", "x_vel", "y_vel", "angular_vel"};
  if (key.starts_with(kMetaPrefix)) return true;
  return std::any_of(std::begin(kFields), std::end(kFields), [&](const char* f) { return key == f; });
}

void assign_field(Sprite& s, const std::string& key, const FactorValue& value) {
  if (key == "shape" || key == "vertices" || key == "id") {
    throw ImmutableField("field '" + key + "' cannot be reassigned in place");
  }
  if (key.starts_with(kMetaPrefix)) {
    const std::string name = key.substr(kMetaPrefix.size());
    if (const auto* d = std::get_if<double>(&value)) s.metadata[name] = *d;
    else if (const auto* str = std::get_if<std::string>(&value)) s.metadata[name] = *str;
    else throw InvariantViolation("metadata '" + name + "' must be a number or string");
    return;
  }
  const double v = as_number(key, value);
  if (key == "x") s.position.x = v;
  else if (key == "y") s.position.y = v;
  else if (key == "angle") s.angle = v;
  else if (key == "scale") s.scale = v;
  else if (key == "c0") s.color[0] = as_channel("c0", v);
  else if (key == "c1") s.color[1] = as_channel("c1", v);
  else if (key == "c2") s.color[2] = as_channel("c2", v);
  else if (key == "opacity") s.opacity = as_channel("opacity", v);
  else if (key == "mass") s.mass = v;
  else if (key == "x_vel") s.velocity.x = v;
  else if (key == "y_vel") s.velocity.y = v;
  else if (key == "angular_vel") s.angular_velocity = v;
  else throw InvariantViolation("unknown sprite field '" + key + "'");
  validate_sprite(s);
}

double numeric_field(const Sprite& s, const std::string& key) {
  if (key == "x") return s.position.x;
  if (key == "y") return s.position.y;
  if (key == "angle") return s.angle;
  if (key == "scale") return s.scale;
  if (key == "c0") return s.color[0];
  if (key == "c1") return s.color[1];
  if (key == "c2") return s.color[2];
  if (key == "opacity") return s.opacity;
  if (key == "mass") return s.mass;
  if (key == "x_vel") return s.velocity.x;
  if (key == "y_vel") return s.velocity.y;
  if (key == "angular_vel") return s.angular_velocity;
  if (key == "id") return static_cast<double>(s.id);
  if (key.starts_with(kMetaPrefix)) {
    const auto it = s.metadata.find(key.substr(kMetaPrefix.size()));
    if (it != s.metadata.end()) {
      if (const double* d = std::get_if<double>(&it->second)) return *d;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvariantViolation("unknown sprite field '" + key + "'");
}

void State::add_layer(std::string name) {
  if (has_layer(name)) throw InvariantViolation("duplicate layer '" + name + "'");
  layers_.push_back({std::move(name), {}});
}

bool State::has_layer(std::string_view name) const noexcept {
  return std::any_of(layers_.begin(), layers_.end(), [&](const Layer& l) { return l.name == name; });
}

State::Layer& State::layer(std::string_view name) {
  for (Layer& l : layers_) {
    if (l.name == name) return l;
  }
  throw UnknownLayer("unknown layer '" + std::string(name) + "'");
}

const State::Layer& State::layer(std::string_view name) const {
  return const_cast<State*>(this)->layer(name);
}

Sprite& State::add_sprite(std::string_view layer_name, Sprite sprite) {
  validate_sprite(sprite);
  Layer& l = layer(layer_name);
  if (sprite.id == 0) {
    sprite.id = next_id_++;
  } else {
    next_id_ = std::max(next_id_, sprite.id + 1);
  }
  l.sprites.push_back(std::move(sprite));
  return l.sprites.back();
}

Sprite* State::find(SpriteId id) noexcept {
  for (Layer& l : layers_) {
    for (Sprite& s : l.sprites) {
      if (s.id == id) return &s;
    }
  }
  return nullptr;
}

const Sprite* State::find(SpriteId id) const noexcept { return const_cast<State*>(this)->find(id); }

std::size_t State::sprite_count() const noexcept {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.sprites.size();
  return n;
}

std::vector<const Sprite*> z_order(const State& state) {
  std::vector<const Sprite*> out;
  out.reserve(state.sprite_count());
  for (const auto& l : state.layers()) {
    for (const Sprite& s : l.sprites) out.push_back(&s);
  }
  return out;
}

void mutate_layer(State& state, std::string_view layer, std::vector<Sprite> add,
                  const std::function<bool(const Sprite&)>& remove) {
  State::Layer& l = state.layer(layer);
  if (remove) std::erase_if(l.sprites, remove);
  for (Sprite& s : add) state.add_sprite(layer, std::move(s));
}

}  // namespace polyarena
