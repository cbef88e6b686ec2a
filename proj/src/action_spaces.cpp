#include "polyarena/action_spaces.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "polyarena/errors.hpp"

namespace polyarena {

namespace {

using nlohmann::json;

const char* kind_name(ActionSpec::Kind k) {
  switch (k) {
    case ActionSpec::Kind::kBox: return "box";
    case ActionSpec::Kind::kDiscrete: return "discrete";
    case ActionSpec::Kind::kComposite: return "composite";
    case ActionSpec::Kind::kClick: return "click";
  }
  return "box";
}

ActionSpec::Kind parse_kind(const std::string& s) {
  if (s == "box") return ActionSpec::Kind::kBox;
  if (s == "discrete") return ActionSpec::Kind::kDiscrete;
  if (s == "composite") return ActionSpec::Kind::kComposite;
  if (s == "click") return ActionSpec::Kind::kClick;
  throw ActionOutOfSpec(fmt::format("unknown action kind '{}'", s));
}

/// Continuous vector of the expected arity, clamped to [lo, hi].
std::vector<double> clamped(const Action& action, std::span<const double> lo, std::span<const double> hi,
                            std::string_view space) {
  const auto* v = std::get_if<std::vector<double>>(&action.value);
  if (v == nullptr) throw ActionOutOfSpec(fmt::format("{} expects a numeric vector", space));
  if (v->size() != lo.size()) {
    throw ActionOutOfSpec(fmt::format("{} expects {} components, got {}", space, lo.size(), v->size()));
  }
  std::vector<double> out(v->size());
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!std::isfinite((*v)[i])) throw ActionOutOfSpec(fmt::format("{} component {} is not finite", space, i));
    out[i] = std::clamp((*v)[i], lo[i], hi[i]);
  }
  return out;
}

constexpr double kUnitLo[4] = {0, 0, 0, 0};
constexpr double kUnitHi[4] = {1, 1, 1, 1};
constexpr double kStickLo[2] = {-1, -1};
constexpr double kStickHi[2] = {1, 1};

const std::vector<std::string> kGridTokens{"none", "left", "right", "up", "down"};

}  // namespace

json ActionSpec::to_json() const {
  json j{{"kind", kind_name(kind)}, {"space", space}};
  switch (kind) {
    case Kind::kBox:
    case Kind::kClick:
      j["lo"] = lo;
      j["hi"] = hi;
      break;
    case Kind::kDiscrete:
      j["tokens"] = tokens;
      break;
    case Kind::kComposite: {
      json c = json::array();
      for (const auto& [name, spec] : children) c.push_back({{"name", name}, {"spec", spec.to_json()}});
      j["children"] = std::move(c);
      break;
    }
  }
  return j;
}

ActionSpec ActionSpec::from_json(const json& j) {
  ActionSpec s;
  try {
    s.kind = parse_kind(j.at("kind").get<std::string>());
    s.space = j.value("space", "");
    switch (s.kind) {
      case Kind::kBox:
      case Kind::kClick:
        s.lo = j.at("lo").get<std::vector<double>>();
        s.hi = j.at("hi").get<std::vector<double>>();
        if (s.lo.size() != s.hi.size()) throw ActionOutOfSpec("bounds differ in length");
        for (std::size_t i = 0; i < s.lo.size(); ++i) {
          if (!(s.lo[i] <= s.hi[i])) throw ActionOutOfSpec("lower bound above upper bound");
        }
        break;
      case Kind::kDiscrete:
        s.tokens = j.at("tokens").get<std::vector<std::string>>();
        if (s.tokens.empty()) throw ActionOutOfSpec("discrete spec needs at least one token");
        break;
      case Kind::kComposite:
        for (const auto& c : j.at("children")) {
          s.children.emplace_back(c.at("name").get<std::string>(), from_json(c.at("spec")));
        }
        break;
    }
  } catch (const json::exception& e) {
    throw ActionOutOfSpec(fmt::format("malformed action spec: {}", e.what()));
  }
  return s;
}

json Action::to_json() const {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Named>) {
          json o = json::object();
          for (const auto& [name, a] : v) o[name] = a.to_json();
          return o;
        } else {
          return v;
        }
      },
      value);
}

Action Action::from_json(const json& j) {
  if (j.is_null()) return {};
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
      if (!x.is_number()) throw ActionOutOfSpec("action vector components must be numbers");
      v.push_back(x.get<double>());
    }
    return v;
  }
  if (j.is_object()) {
    Named named;
    for (const auto& [k, v] : j.items()) named.emplace_back(k, from_json(v));
    return named;
  }
  throw ActionOutOfSpec(fmt::format("cannot interpret {} as an action", j.dump()));
}

GridMove parse_grid_move(std::string_view token) {
  if (token == "none") return GridMove::kNone;
  if (token == "left") return GridMove::kLeft;
  if (token == "right") return GridMove::kRight;
  if (token == "up") return GridMove::kUp;
  if (token == "down") return GridMove::kDown;
  throw ActionOutOfSpec(fmt::format("unknown grid token '{}'", token));
}

KinematicDelta joystick_apply(Vec2 action, double scaling, const std::string& layer, const State& state) {
  KinematicDelta d;
  const auto& sprites = state.layer(layer).sprites;
  const Vec2 a{std::clamp(action.x, -1.0, 1.0), std::clamp(action.y, -1.0, 1.0)};
  if (a == Vec2{}) return d;
  for (const Sprite& s : sprites) {
    if (s.inverse_mass() == 0.0) continue;
    d.add(s.id, (scaling * s.inverse_mass()) * a);
  }
  return d;
}

void grid_apply(GridMove move, double step_size, const std::string& layer, State& state) {
  auto& sprites = state.layer(layer).sprites;
  Vec2 step;
  switch (move) {
    case GridMove::kNone: return;
    case GridMove::kLeft: step = {-step_size, 0}; break;
    case GridMove::kRight: step = {step_size, 0}; break;
    case GridMove::kUp: step = {0, step_size}; break;
    case GridMove::kDown: step = {0, -step_size}; break;
  }
  for (Sprite& s : sprites) s.position += step;
}

void set_position_apply(Vec2 action, const std::string& layer, State& state) {
  auto& sprites = state.layer(layer).sprites;
  const Vec2 p{std::clamp(action.x, 0.0, 1.0), std::clamp(action.y, 0.0, 1.0)};
  for (Sprite& s : sprites) s.position = p;
}

KinematicDelta click_apply(std::span<const double, 4> action, const std::string& layer, double motion_scale,
                           const State& state) {
  KinematicDelta d;
  const auto& sprites = state.layer(layer).sprites;
  const Vec2 p{std::clamp(action[0], 0.0, 1.0), std::clamp(action[1], 0.0, 1.0)};
  const Vec2 q{std::clamp(action[2], 0.0, 1.0), std::clamp(action[3], 0.0, 1.0)};
  for (auto it = sprites.rbegin(); it != sprites.rend(); ++it) {
    if (!sprite_contains(*it, p)) continue;
    const Vec2 dv = motion_scale * (q - Vec2{0.5, 0.5});
    if (dv != Vec2{}) d.add(it->id, dv);
    break;
  }
  return d;
}

Joystick::Joystick(double scaling, std::string layer, Mode mode, std::array<bool, 2> axes)
    : scaling_(scaling), layer_(std::move(layer)), mode_(mode), axes_(axes) {
  if (!std::isfinite(scaling_)) throw InvariantViolation("joystick scaling must be finite");
}

ActionSpec Joystick::spec() const {
  return {ActionSpec::Kind::kBox, "joystick", {-1, -1}, {1, 1}, {}, {}};
}

void Joystick::apply(const Action& action, State& state) const {
  auto& sprites = state.layer(layer_).sprites;
  if (action.is_noop() && mode_ == Mode::kForce) return;
  const std::vector<double> a = action.is_noop() ? std::vector<double>{0, 0} : clamped(action, kStickLo, kStickHi, "joystick");
  const Vec2 masked{axes_[0] ? a[0] : 0.0, axes_[1] ? a[1] : 0.0};
  if (mode_ == Mode::kForce) {
    joystick_apply(masked, scaling_, layer_, state).apply(state);
    return;
  }
  for (Sprite& s : sprites) {
    if (axes_[0]) s.velocity.x = scaling_ * masked.x;
    if (axes_[1]) s.velocity.y = scaling_ * masked.y;
  }
}

Grid::Grid(double step_size, std::string layer) : step_size_(step_size), layer_(std::move(layer)) {
  if (!(step_size_ > 0.0) || !std::isfinite(step_size_)) throw InvariantViolation("grid step size must be positive");
}

ActionSpec Grid::spec() const { return {ActionSpec::Kind::kDiscrete, "grid", {}, {}, kGridTokens, {}}; }

void Grid::apply(const Action& action, State& state) const {
  if (action.is_noop()) {
    state.layer(layer_);
    return;
  }
  const auto* token = std::get_if<std::string>(&action.value);
  if (token == nullptr) throw ActionOutOfSpec("grid expects a token");
  grid_apply(parse_grid_move(*token), step_size_, layer_, state);
}

SetPosition::SetPosition(std::string layer) : layer_(std::move(layer)) {}

ActionSpec SetPosition::spec() const { return {ActionSpec::Kind::kBox, "set_position", {0, 0}, {1, 1}, {}, {}}; }

void SetPosition::apply(const Action& action, State& state) const {
  if (action.is_noop()) {
    state.layer(layer_);
    return;
  }
  const auto a = clamped(action, std::span(kUnitLo, 2), std::span(kUnitHi, 2), "set_position");
  set_position_apply({a[0], a[1]}, layer_, state);
}

Click::Click(std::string layer, double motion_scale) : layer_(std::move(layer)), motion_scale_(motion_scale) {
  if (!std::isfinite(motion_scale_)) throw InvariantViolation("click motion scale must be finite");
}

ActionSpec Click::spec() const {
  return {ActionSpec::Kind::kClick, "click", {0, 0, 0, 0}, {1, 1, 1, 1}, {}, {}};
}

void Click::apply(const Action& action, State& state) const {
  if (action.is_noop()) {
    state.layer(layer_);
    return;
  }
  const auto a = clamped(action, kUnitLo, kUnitHi, "click");
  click_apply(std::span<const double, 4>(a.data(), 4), layer_, motion_scale_, state).apply(state);
}

Composite::Composite(std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> children)
    : children_(std::move(children)) {
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (!children_[i].second) throw InvariantViolation(fmt::format("sub-space '{}' is empty", children_[i].first));
    for (std::size_t k = 0; k < i; ++k) {
      if (children_[k].first == children_[i].first) {
        throw InvariantViolation(fmt::format("duplicate sub-space name '{}'", children_[i].first));
      }
    }
  }
}

ActionSpec Composite::spec() const {
  ActionSpec s{ActionSpec::Kind::kComposite, "composite", {}, {}, {}, {}};
  for (const auto& [name, space] : children_) s.children.emplace_back(name, space->spec());
  return s;
}

void Composite::apply(const Action& action, State& state) const {
  if (action.is_noop()) {
    for (const auto& [name, space] : children_) space->apply(Action{}, state);
    return;
  }
  const auto* named = std::get_if<Action::Named>(&action.value);
  if (named == nullptr) throw ActionOutOfSpec("composite expects a named map of sub-actions");
  for (const auto& [key, sub] : *named) {
    const bool known = std::any_of(children_.begin(), children_.end(), [&](const auto& c) { return c.first == key; });
    if (!known) throw ActionOutOfSpec(fmt::format("no sub-space named '{}'", key));
  }
  std::vector<const Action*> subs;
  subs.reserve(children_.size());
  for (const auto& [name, space] : children_) {
    const auto it = std::find_if(named->begin(), named->end(), [&](const auto& e) { return e.first == name; });
    if (it == named->end()) throw MissingSubAction(fmt::format("missing action for sub-space '{}'", name));
    subs.push_back(&it->second);
  }
  for (std::size_t i = 0; i < children_.size(); ++i) children_[i].second->apply(*subs[i], state);
}

std::vector<std::string> Composite::layers() const {
  std::vector<std::string> out;
  for (const auto& [name, space] : children_) {
    for (auto& l : space->layers()) {
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
    }
  }
  return out;
}

}  // namespace polyarena
