#pragma once

// Text-frame wire protocol between the play server and its clients.
//
//   server -> client  {"type":"hello","action_spec":{...},"arena":{"w":1,"h":1},"fps":60,"recipe":"pong","seed":7}
//   client -> server  {"type":"input","payload":<see encode_action>}
//   server -> client  {"type":"frame","step":3,"trial":0,"kind":"MID","reward":0,
//                      "polygons":[{"pts":[[x,y],...],"color":[r,g,b],"opacity":255}],"phase":"play"}
//   either way        {"type":"error","message":"..."}

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "polyarena/environment.hpp"

namespace polyarena::protocol {

struct Hello {
  ActionSpec action_spec;
  int fps = 60;
  std::string recipe;
  std::uint64_t seed = 0;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct Input {
  nlohmann::json payload;  ///< null is the neutral action
  friend bool operator==(const Input&, const Input&) = default;
};

struct Frame {
  int step = 0;
  int trial = 0;
  StepKind kind = StepKind::kMid;
  double reward = 0.0;
  DisplayList polygons;
  std::optional<std::string> phase;
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct ErrorMessage {
  std::string message;
  friend bool operator==(const ErrorMessage&, const ErrorMessage&) = default;
};

using Message = std::variant<Hello, Input, Frame, ErrorMessage>;

std::string encode(const Message& message);
/// Throws ProtocolError for malformed JSON, unknown types and missing fields.
Message decode(std::string_view text);

Frame make_frame(const TimeStep& timestep, DisplayList display_list);
std::string encode_frame(const TimeStep& timestep, const DisplayList& display_list);

/// Input payloads by space:
///   joystick      {"dx":..,"dy":..}        missing axes are 0
///   set_position  {"x":..,"y":..}
///   click         {"x0":..,"y0":..,"x1":..,"y1":..}
///   other boxes   [v0, v1, ...]
///   discrete      {"token":"left"}
///   composite     {"<child>":<payload>, ...}  missing children are neutral
/// Continuous values are clamped to the spec bounds. Throws ProtocolError on
/// unknown keys, non-numeric values, wrong arity or unknown tokens.
Action decode_action(const nlohmann::json& payload, const ActionSpec& spec);
/// Inverse of decode_action for in-spec actions.
nlohmann::json encode_action(const Action& action, const ActionSpec& spec);

/// The part of an action that persists to the next tick: continuous controls
/// hold their value, discrete moves and clicks fire once.
Action held_part(const Action& action, const ActionSpec& spec);

}  // namespace polyarena::protocol
