#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyarena/geometry.hpp"

namespace polyarena {

using SpriteId = std::uint64_t;

/// Value stored in a sprite's metadata bag.
using MetaValue = std::variant<double, std::string>;

/// One factor value: a number, a name (shape, flags) or an explicit vertex list.
using FactorValue = std::variant<double, std::string, std::vector<Vec2>>;

/// A complete or partial assignment of factor keys to values.
using Assignment = std::map<std::string, FactorValue>;

/// Mass value for immovable bodies (walls, kinematic paddles).
inline constexpr double kInfiniteMass = std::numeric_limits<double>::infinity();

/// Convex polygonal rigid body with flat color.
struct Sprite {
  SpriteId id = 0;  ///< 0 until the sprite is admitted into a State
  std::shared_ptr<const Polygon> shape;
  std::string shape_name;  ///< empty for explicit vertex shapes
  Vec2 position{0.5, 0.5};
  double angle = 0.0;
  double scale = 0.1;
  Vec2 velocity;
  double angular_velocity = 0.0;
  double mass = 1.0;
  std::array<int, 3> color{0, 0, 0};
  int opacity = 255;
  std::map<std::string, MetaValue> metadata;

  double inverse_mass() const noexcept { return std::isinf(mass) ? 0.0 : 1.0 / mass; }
  double inertia() const { return moment_of_inertia(*shape, mass) * scale * scale; }
  double inverse_inertia() const noexcept {
    return std::isinf(mass) ? 0.0 : 1.0 / (mass * shape->unit_inertia() * scale * scale);
  }

  friend bool operator==(const Sprite& a, const Sprite& b);
};

/// Throws InvariantViolation naming the first offending field.
void validate_sprite(const Sprite& sprite);

/// Partial description of a sprite; unset fields take the documented defaults
/// (square, scale 0.1, position (0.5,0.5), at rest, mass 1, black, opaque).
struct SpriteFactors {
  std::optional<std::string> shape;
  std::optional<std::vector<Vec2>> vertices;
  std::optional<double> x, y, angle, scale;
  std::optional<double> c0, c1, c2, opacity;
  std::optional<double> mass;
  std::optional<double> x_vel, y_vel, angular_vel;
  std::map<std::string, MetaValue> metadata;

  /// Keys: shape, vertices, x, y, angle, scale, c0, c1, c2, opacity, mass,
  /// x_vel, y_vel, angular_vel, and "meta.<name>" for metadata entries.
  /// Throws InvariantViolation on unknown keys or mistyped values.
  static SpriteFactors from_assignment(const Assignment& assignment);
};

/// Builds a validated sprite (id 0). Throws UnknownShapeName, InvariantViolation.
Sprite make_sprite(const SpriteFactors& factors);

/// World-frame vertices for the sprite's current pose.
std::vector<Vec2> sprite_world_vertices(const Sprite& sprite);
void sprite_world_vertices_into(const Sprite& sprite, std::vector<Vec2>& out);

/// Boundary-inclusive hit test in world coordinates.
bool sprite_contains(const Sprite& sprite, Vec2 point);

/// Fields a rule may reassign in place.
bool is_mutable_field(const std::string& key);
/// Assigns one factor to an existing sprite. Throws ImmutableField for shape,
/// vertices and id; InvariantViolation if the result breaks an invariant.
void assign_field(Sprite& sprite, const std::string& key, const FactorValue& value);
/// Reads a numeric field by factor key ("x", "c0", "meta.foo", ...).
double numeric_field(const Sprite& sprite, const std::string& key);

/// Named layers of sprites. Layer order is draw order: earlier layers are
/// behind later ones, and within a layer earlier sprites are behind later ones.
class State {
 public:
  struct Layer {
    std::string name;
    std::vector<Sprite> sprites;
    friend bool operator==(const Layer&, const Layer&) = default;
  };

  /// Throws InvariantViolation when the name is already taken.
  void add_layer(std::string name);
  bool has_layer(std::string_view name) const noexcept;

  /// Throws UnknownLayer.
  Layer& layer(std::string_view name);
  const Layer& layer(std::string_view name) const;

  /// Validates the sprite, assigns the next id if it has none, and appends it.
  Sprite& add_sprite(std::string_view layer_name, Sprite sprite);

  std::vector<Layer>& layers() noexcept { return layers_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  Sprite* find(SpriteId id) noexcept;
  const Sprite* find(SpriteId id) const noexcept;

  std::size_t sprite_count() const noexcept;
  SpriteId next_id() const noexcept { return next_id_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<Layer> layers_;
  SpriteId next_id_ = 1;
};

/// Back-to-front traversal of every sprite.
std::vector<const Sprite*> z_order(const State& state);

/// Removes sprites matching `remove` from the layer, then appends `add`.
/// Surviving sprites keep their relative order. Throws UnknownLayer.
void mutate_layer(State& state, std::string_view layer, std::vector<Sprite> add,
                  const std::function<bool(const Sprite&)>& remove = {});

}  // namespace polyarena
