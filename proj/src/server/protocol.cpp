#include "polyarena/server/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "polyarena/errors.hpp"

namespace polyarena::protocol {

using nlohmann::json;

namespace {

const std::vector<std::string>& box_keys(const ActionSpec& spec) {
  static const std::vector<std::string> joystick{"dx", "dy"}, position{"x", "y"}, click{"x0", "y0", "x1", "y1"},
      none;
  if (spec.kind == ActionSpec::Kind::kClick) return click;
  if (spec.space == "joystick") return joystick;
  if (spec.space == "set_position") return position;
  return none;
}

double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ProtocolError(fmt::format("{} must be a number, got {}", what, j.dump()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ProtocolError(fmt::format("{} must be finite", what));
  return v;
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(fmt::format("message lacks '{}'", key));
  return *it;
}

StepKind parse_kind(const std::string& s) {
  if (s == "FIRST") return StepKind::kFirst;
  if (s == "MID") return StepKind::kMid;
  if (s == "LAST") return StepKind::kLast;
  throw ProtocolError(fmt::format("unknown step kind '{}'", s));
}

json polygon_json(const Drawable& d) {
  json pts = json::array();
  for (const Vec2& p : d.points) pts.push_back(json::array({p.x, p.y}));
  return {{"pts", std::move(pts)}, {"color", d.color}, {"opacity", d.opacity}};
}

Drawable polygon_from(const json& j) {
  Drawable d;
  for (const json& p : field(j, "pts")) {
    if (!p.is_array() || p.size() != 2) throw ProtocolError("polygon points are [x, y] pairs");
    d.points.push_back({number(p[0], "x"), number(p[1], "y")});
  }
  d.color = field(j, "color").get<std::array<int, 3>>();
  d.opacity = field(j, "opacity").get<int>();
  return d;
}

}  // namespace

std::string encode(const Message& message) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        json j;
        if constexpr (std::is_same_v<T, Hello>) {
          j = {{"type", "hello"},
               {"action_spec", m.action_spec.to_json()},
               {"arena", {{"w", 1}, {"h", 1}}},
               {"fps", m.fps},
               {"recipe", m.recipe},
               {"seed", m.seed}};
        } else if constexpr (std::is_same_v<T, Input>) {
          j = {{"type", "input"}, {"payload", m.payload}};
        } else if constexpr (std::is_same_v<T, Frame>) {
          json polys = json::array();
          for (const Drawable& d : m.polygons) polys.push_back(polygon_json(d));
          j = {{"type", "frame"},
               {"step", m.step},
               {"trial", m.trial},
               {"kind", std::string(to_string(m.kind))},
               {"reward", m.reward},
               {"polygons", std::move(polys)}};
          if (m.phase) j["phase"] = *m.phase;
        } else {
          j = {{"type", "error"}, {"message", m.message}};
        }
        return j.dump();
      },
      message);
}

Message decode(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(fmt::format("message is not JSON: {}", e.what()));
  }
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  try {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "hello") {
      Hello h;
      try {
        h.action_spec = ActionSpec::from_json(field(j, "action_spec"));
      } catch (const ActionOutOfSpec& e) {
        throw ProtocolError(e.what());
      }
      h.fps = field(j, "fps").get<int>();
      h.recipe = j.value("recipe", "");
      h.seed = j.value("seed", std::uint64_t{0});
      return h;
    }
    if (type == "input") return Input{j.value("payload", json())};
    if (type == "frame") {
      Frame f;
      f.step = field(j, "step").get<int>();
      f.trial = j.value("trial", 0);
      f.kind = parse_kind(field(j, "kind").get<std::string>());
      f.reward = number(field(j, "reward"), "reward");
      for (const json& p : field(j, "polygons")) f.polygons.push_back(polygon_from(p));
      if (const auto it = j.find("phase"); it != j.end() && !it->is_null()) f.phase = it->get<std::string>();
      return f;
    }
    if (type == "error") return ErrorMessage{field(j, "message").get<std::string>()};
    throw ProtocolError(fmt::format("unknown message type '{}'", type));
  } catch (const json::exception& e) {
    throw ProtocolError(fmt::format("malformed message: {}", e.what()));
  }
}

Frame make_frame(const TimeStep& ts, DisplayList display_list) {
  return {ts.meta.step_index, ts.meta.trial_index, ts.kind, ts.reward, std::move(display_list), ts.meta.phase};
}

std::string encode_frame(const TimeStep& ts, const DisplayList& display_list) {
  return encode(make_frame(ts, display_list));
}

Action decode_action(const json& payload, const ActionSpec& spec) {
  if (payload.is_null()) return {};
  switch (spec.kind) {
    case ActionSpec::Kind::kBox:
    case ActionSpec::Kind::kClick: {
      const std::size_t n = spec.lo.size();
      std::vector<double> v(n, 0.0);
      const auto& keys = box_keys(spec);
      if (!keys.empty() && payload.is_object()) {
        for (const auto& [k, x] : payload.items()) {
          const auto it = std::find(keys.begin(), keys.end(), k);
          if (it == keys.end()) throw ProtocolError(fmt::format("unexpected key '{}' for {}", k, spec.space));
          v[static_cast<std::size_t>(it - keys.begin())] = number(x, k);
        }
        if (spec.kind == ActionSpec::Kind::kClick || spec.space == "set_position") {
          for (const auto& k : keys) {
            if (!payload.contains(k)) throw ProtocolError(fmt::format("{} input needs '{}'", spec.space, k));
          }
        }
      } else if (payload.is_array()) {
        if (payload.size() != n) {
          throw ProtocolError(fmt::format("{} input needs {} values, got {}", spec.space, n, payload.size()));
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = number(payload[i], "input value");
      } else {
        throw ProtocolError(fmt::format("cannot read {} as {} input", payload.dump(), spec.space));
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i], spec.lo[i], spec.hi[i]);
      return v;
    }
    case ActionSpec::Kind::kDiscrete: {
      const json* token = &payload;
      if (payload.is_object()) {
        if (payload.size() != 1 || !payload.contains("token")) throw ProtocolError("discrete input is {\"token\": ...}");
        token = &payload["token"];
      }
      if (!token->is_string()) throw ProtocolError("discrete token must be a string");
      const auto t = token->get<std::string>();
      if (std::find(spec.tokens.begin(), spec.tokens.end(), t) == spec.tokens.end()) {
        throw ProtocolError(fmt::format("unknown token '{}'", t));
      }
      return t;
    }
    case ActionSpec::Kind::kComposite: {
      if (!payload.is_object()) throw ProtocolError("composite input is an object keyed by sub-space");
      for (const auto& [k, x] : payload.items()) {
        const bool known = std::any_of(spec.children.begin(), spec.children.end(),
                                       [&](const auto& c) { return c.first == k; });
        if (!known) throw ProtocolError(fmt::format("no sub-space named '{}'", k));
      }
      Action::Named named;
      for (const auto& [name, child] : spec.children) {
        const auto it = payload.find(name);
        named.emplace_back(name, it == payload.end() ? Action{} : decode_action(*it, child));
      }
      return named;
    }
  }
  return {};
}

json encode_action(const Action& action, const ActionSpec& spec) {
  if (action.is_noop()) return nullptr;
  switch (spec.kind) {
    case ActionSpec::Kind::kBox:
    case ActionSpec::Kind::kClick: {
      const auto* v = std::get_if<std::vector<double>>(&action.value);
      if (!v || v->size() != spec.lo.size()) throw ProtocolError("action does not match a box spec");
      const auto& keys = box_keys(spec);
      if (keys.empty()) return *v;
      json o = json::object();
      for (std::size_t i = 0; i < keys.size(); ++i) o[keys[i]] = (*v)[i];
      return o;
    }
    case ActionSpec::Kind::kDiscrete: {
      const auto* t = std::get_if<std::string>(&action.value);
      if (!t) throw ProtocolError("action does not match a discrete spec");
      return {{"token", *t}};
    }
    case ActionSpec::Kind::kComposite: {
      const auto* named = std::get_if<Action::Named>(&action.value);
      if (!named) throw ProtocolError("action does not match a composite spec");
      json o = json::object();
      for (const auto& [name, sub] : *named) {
        const auto it = std::find_if(spec.children.begin(), spec.children.end(),
                                     [&](const auto& c) { return c.first == name; });
        if (it == spec.children.end()) throw ProtocolError(fmt::format("no sub-space named '{}'", name));
        if (!sub.is_noop()) o[name] = encode_action(sub, it->second);
      }
      return o;
    }
  }
  return nullptr;
}

Action held_part(const Action& action, const ActionSpec& spec) {
  switch (spec.kind) {
    case ActionSpec::Kind::kBox: return action;
    case ActionSpec::Kind::kDiscrete:
    case ActionSpec::Kind::kClick: return {};
    case ActionSpec::Kind::kComposite: {
      const auto* named = std::get_if<Action::Named>(&action.value);
      if (!named) return {};
      Action::Named out;
      for (const auto& [name, child] : spec.children) {
        const auto it = std::find_if(named->begin(), named->end(), [&](const auto& e) { return e.first == name; });
        out.emplace_back(name, it == named->end() ? Action{} : held_part(it->second, child));
      }
      return out;
    }
  }
  return {};
}

}  // namespace polyarena::protocol
