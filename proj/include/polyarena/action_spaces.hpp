#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "polyarena/physics.hpp"
#include "polyarena/polymorphic.hpp"
#include "polyarena/sprite.hpp"

namespace polyarena {

/// Structural description of what an action space accepts.
struct ActionSpec {
  enum class Kind { kBox, kDiscrete, kComposite, kClick };

  Kind kind = Kind::kBox;
  std::string space;               ///< concrete space: joystick, grid, set_position, click, composite
  std::vector<double> lo, hi;      ///< kBox / kClick bounds
  std::vector<std::string> tokens; ///< kDiscrete alphabet
  std::vector<std::pair<std::string, ActionSpec>> children;  ///< kComposite, declaration order

  nlohmann::json to_json() const;
  static ActionSpec from_json(const nlohmann::json& j);
  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

/// An action. The monostate alternative is the explicit no-op every space accepts.
struct Action {
  using Named = std::vector<std::pair<std::string, Action>>;
  std::variant<std::monostate, std::vector<double>, std::string, Named> value;

  Action() = default;
  Action(std::vector<double> v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Action(std::string token) : value(std::move(token)) {}  // NOLINT(google-explicit-constructor)
  Action(const char* token) : value(std::string(token)) {}  // NOLINT(google-explicit-constructor)
  Action(Named named) : value(std::move(named)) {}  // NOLINT(google-explicit-constructor)

  bool is_noop() const noexcept { return std::holds_alternative<std::monostate>(value); }
  nlohmann::json to_json() const;
  static Action from_json(const nlohmann::json& j);
  friend bool operator==(const Action&, const Action&) = default;
};

enum class GridMove { kNone, kLeft, kRight, kUp, kDown };

/// Parses left/right/up/down/none. Throws ActionOutOfSpec.
GridMove parse_grid_move(std::string_view token);

// Pure action laws.

/// dv = scaling * clamp(action) / mass for every sprite in the layer.
KinematicDelta joystick_apply(Vec2 action, double scaling, const std::string& layer, const State& state);
/// Translates every layer sprite by step_size along the move's axis.
void grid_apply(GridMove move, double step_size, const std::string& layer, State& state);
/// Moves every layer sprite to clamp(action) without touching velocity.
void set_position_apply(Vec2 action, const std::string& layer, State& state);
/// Front-most layer sprite under the first click receives
/// dv = motion_scale * (second click - (0.5, 0.5)). No hit, no effect.
KinematicDelta click_apply(std::span<const double, 4> action, const std::string& layer, double motion_scale,
                           const State& state);

class ActionSpace {
 public:
  virtual ~ActionSpace() = default;
  virtual ActionSpec spec() const = 0;
  /// Applies the action in place. Throws ActionOutOfSpec on wrong shape.
  virtual void apply(const Action& action, State& state) const = 0;
  /// Layers this space acts on.
  virtual std::vector<std::string> layers() const = 0;
  virtual std::unique_ptr<ActionSpace> clone() const = 0;
};

class Joystick final : public ActionSpace {
 public:
  enum class Mode {
    kForce,    ///< dv = scaling * a / mass
    kVelocity  ///< v := scaling * a, for massless cursors and immovable paddles
  };
  Joystick(double scaling, std::string layer, Mode mode = Mode::kForce, std::array<bool, 2> axes = {true, true});
  ActionSpec spec() const override;
  void apply(const Action& action, State& state) const override;
  std::vector<std::string> layers() const override { return {layer_}; }
  std::unique_ptr<ActionSpace> clone() const override { return std::make_unique<Joystick>(*this); }

 private:
  double scaling_;
  std::string layer_;
  Mode mode_;
  std::array<bool, 2> axes_;
};

class Grid final : public ActionSpace {
 public:
  Grid(double step_size, std::string layer);
  ActionSpec spec() const override;
  void apply(const Action& action, State& state) const override;
  std::vector<std::string> layers() const override { return {layer_}; }
  std::unique_ptr<ActionSpace> clone() const override { return std::make_unique<Grid>(*this); }

 private:
  double step_size_;
  std::string layer_;
};

class SetPosition final : public ActionSpace {
 public:
  explicit SetPosition(std::string layer);
  ActionSpec spec() const override;
  void apply(const Action& action, State& state) const override;
  std::vector<std::string> layers() const override { return {layer_}; }
  std::unique_ptr<ActionSpace> clone() const override { return std::make_unique<SetPosition>(*this); }

 private:
  std::string layer_;
};

class Click final : public ActionSpace {
 public:
  Click(std::string layer, double motion_scale);
  ActionSpec spec() const override;
  void apply(const Action& action, State& state) const override;
  std::vector<std::string> layers() const override { return {layer_}; }
  std::unique_ptr<ActionSpace> clone() const override { return std::make_unique<Click>(*this); }

 private:
  std::string layer_;
  double motion_scale_;
};

/// Named sub-spaces applied in declaration order.
class Composite final : public ActionSpace {
 public:
  Composite() = default;
  explicit Composite(std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> children);
  ActionSpec spec() const override;
  /// Throws MissingSubAction when a sub-space has no entry; a no-op action is
  /// forwarded to every sub-space.
  void apply(const Action& action, State& state) const override;
  std::vector<std::string> layers() const override;
  std::unique_ptr<ActionSpace> clone() const override { return std::make_unique<Composite>(*this); }

 private:
  std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> children_;
};

}  // namespace polyarena
