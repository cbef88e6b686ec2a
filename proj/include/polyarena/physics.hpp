#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "polyarena/polymorphic.hpp"
#include "polyarena/sprite.hpp"

namespace polyarena {

struct Kick {
  Vec2 dv;
  double dw = 0.0;
};

/// Per-sprite velocity and angular-velocity changes, keyed by sprite id.
class KinematicDelta {
 public:
  void add(SpriteId id, Vec2 dv, double dw = 0.0);
  void merge(const KinematicDelta& other);
  /// Zero kick when the id is absent.
  Kick at(SpriteId id) const;
  bool empty() const noexcept { return kicks_.empty(); }
  const std::map<SpriteId, Kick>& kicks() const noexcept { return kicks_; }
  /// Adds every kick to the matching sprite. Ids missing from the state are ignored.
  void apply(State& state) const;

 private:
  std::map<SpriteId, Kick> kicks_;
};

// Pure force laws. Every rate is per step (dt = 1).

/// Linear drag: dv = -coeff * v, dw = -coeff * w.
KinematicDelta apply_drag(double coeff, std::span<const Sprite> sprites);
/// dv = force / mass. Infinite-mass sprites are unaffected.
KinematicDelta apply_constant_force(Vec2 force, std::span<const Sprite> sprites);
/// Constant-magnitude deceleration opposing motion, clamped at rest.
KinematicDelta apply_friction(double coeff, std::span<const Sprite> sprites);
/// Momentum-conserving impulse pair along the connecting axis that drives the
/// pair distance to `rest_length` within one step.
KinematicDelta apply_tether(const Sprite& a, const Sprite& b, double rest_length);
/// Impulse response for one contact; empty when the bodies are separating.
KinematicDelta resolve_collision(const Contact& contact, const Sprite& a, const Sprite& b, double elasticity,
                                 bool update_angular);

/// Pairwise constraint gathered at the start of the solver phase.
struct ContactConstraint {
  SpriteId a = 0;
  SpriteId b = 0;
  Contact contact;
  double elasticity = 1.0;
  bool update_angular = true;
};

struct TetherConstraint {
  SpriteId a = 0;
  SpriteId b = 0;
  double rest_length = 0.0;
};

struct Constraints {
  std::vector<ContactConstraint> contacts;
  std::vector<TetherConstraint> tethers;
};

/// A physics component. Plain forces contribute velocity kicks; collision and
/// tether forces contribute constraints resolved by the iterative solver.
class Force {
 public:
  virtual ~Force() = default;
  virtual void accumulate(const State& state, KinematicDelta& delta) const { (void)state; (void)delta; }
  virtual void gather(const State& state, Constraints& out) const { (void)state; (void)out; }
  virtual std::unique_ptr<Force> clone() const = 0;
};

class Drag final : public Force {
 public:
  Drag(double coeff, std::vector<std::string> layers);
  void accumulate(const State& state, KinematicDelta& delta) const override;
  std::unique_ptr<Force> clone() const override { return std::make_unique<Drag>(*this); }

 private:
  double coeff_;
  std::vector<std::string> layers_;
};

class ConstantForce final : public Force {
 public:
  ConstantForce(Vec2 force, std::vector<std::string> layers);
  void accumulate(const State& state, KinematicDelta& delta) const override;
  std::unique_ptr<Force> clone() const override { return std::make_unique<ConstantForce>(*this); }

 private:
  Vec2 force_;
  std::vector<std::string> layers_;
};

class Friction final : public Force {
 public:
  Friction(double coeff, std::vector<std::string> layers);
  void accumulate(const State& state, KinematicDelta& delta) const override;
  std::unique_ptr<Force> clone() const override { return std::make_unique<Friction>(*this); }

 private:
  double coeff_;
  std::vector<std::string> layers_;
};

/// Rigid distance link. With layer names, the i-th sprite of layer A is tied to
/// the i-th sprite of layer B. With explicit ids, exactly that pair is tied.
class Tether final : public Force {
 public:
  Tether(std::string layer_a, std::string layer_b, double rest_length);
  Tether(SpriteId a, SpriteId b, double rest_length);
  void gather(const State& state, Constraints& out) const override;
  std::unique_ptr<Force> clone() const override { return std::make_unique<Tether>(*this); }

 private:
  std::string layer_a_, layer_b_;
  SpriteId id_a_ = 0, id_b_ = 0;
  double rest_length_;
};

class Collision final : public Force {
 public:
  /// Pairs with the same layer on both sides collide that layer with itself.
  Collision(std::vector<std::pair<std::string, std::string>> layer_pairs, double elasticity,
            bool update_angular = true);
  void gather(const State& state, Constraints& out) const override;
  std::unique_ptr<Force> clone() const override { return std::make_unique<Collision>(*this); }

 private:
  std::vector<std::pair<std::string, std::string>> layer_pairs_;
  double elasticity_;
  bool update_angular_;
};

struct PhysicsConfig {
  int max_passes = 4;
  double correction = 0.8;  ///< fraction of penetration removed per step
};

/// One physics step: accumulate forces, apply them, iteratively resolve
/// contacts and tethers, correct penetration, then integrate positions.
void step_physics(State& state, std::span<const Polymorphic<Force>> forces, const PhysicsConfig& config = {});

}  // namespace polyarena
