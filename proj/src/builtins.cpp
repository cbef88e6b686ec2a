#include <fmt/format.h>

#include "polyarena/errors.hpp"
#include "polyarena/recipes.hpp"

namespace polyarena {

namespace {

using nlohmann::json;

json node(std::string type, json params = json::object()) { return {{"type", std::move(type)}, {"params", std::move(params)}}; }

json uniform(std::string key, double lo, double hi) { return node("uniform", {{"key", std::move(key)}, {"lo", lo}, {"hi", hi}}); }
json fixed(json values) { return node("fixed", {{"values", std::move(values)}}); }
json product(std::vector<json> parts) { return node("product", {{"parts", std::move(parts)}}); }

/// JSON array of the arguments, immune to the object-vs-array ambiguity of brace lists.
template <class... T>
json arr(T&&... items) {
  json a = json::array();
  (a.push_back(json(std::forward<T>(items))), ...);
  return a;
}

json one(json factors) { return {{"count", 1}, {"factors", std::move(factors)}}; }

json layer(std::string name, std::vector<json> generators, std::vector<std::string> avoid = {}) {
  json l{{"name", std::move(name)}, {"generators", std::move(generators)}};
  if (!avoid.empty()) l["avoid_layers"] = avoid;
  return l;
}

json rectangle(double w, double h) {
  return json::array({{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}});
}

json slab(double x, double y, double w, double h, std::array<int, 3> rgb) {
  return one(fixed({{"x", x}, {"y", y}, {"vertices", rectangle(w, h)}, {"scale", 1.0}, {"mass", "inf"},
                    {"c0", rgb[0]}, {"c1", rgb[1]}, {"c2", rgb[2]}}));
}

constexpr std::array<int, 3> kGray{128, 128, 128};
constexpr double kWall = 0.04;

json left_wall() { return slab(0.0, 0.5, kWall, 1.0 + kWall, kGray); }
json right_wall() { return slab(1.0, 0.5, kWall, 1.0 + kWall, kGray); }
json top_wall() { return slab(0.5, 1.0, 1.0 + kWall, kWall, kGray); }
json bottom_wall() { return slab(0.5, 0.0, 1.0 + kWall, kWall, kGray); }

json image_observer(int size = 256) { return {{"image", node("image", {{"width", size}, {"height", size}})}}; }

/// Uniform position in [lo, hi]^2 excluding the central square [0.3, 0.7]^2.
json off_center(double lo, double hi) {
  return node("set_minus", {{"base", product({uniform("x", lo, hi), uniform("y", lo, hi)})},
                            {"hold_out", product({uniform("x", 0.3, 0.7), uniform("y", 0.3, 0.7)})}});
}

json header(std::string name) { return {{"schema_version", kRecipeSchemaVersion}, {"name", std::move(name)}, {"seed", 0}}; }

json navigate_to_goal() {
  json r = header("navigate_to_goal");
  json goal = fixed({{"x", 0.1}, {"y", 0.1}, {"shape", "square"}, {"scale", 0.1}, {"c0", 255}});
  json agent = fixed({{"x", 0.5}, {"y", 0.5}, {"shape", "circle"}, {"scale", 0.1}, {"c1", 255}});
  r["state_initializer"]["layers"] = arr(layer("goal", {one(goal)}), layer("agent", {one(agent)}));
  r["physics"]["forces"] = arr(node("drag", {{"coeff", 0.25}, {"layers", arr("agent")}}));
  r["task"] = node("contact_reward",
                   {{"reward", 1.0}, {"layer_a", "agent"}, {"layer_b", "goal"}, {"reset_steps_after_contact", 5}});
  r["action_space"] = node("joystick", {{"scaling", 0.01}, {"layer", "agent"}});
  r["observers"] = image_observer();
  r["policy_hint"] = {{"agent", "agent"}, {"target", "goal"}};
  return r;
}

json pong() {
  json r = header("pong");
  json ball = product({uniform("x", 0.2, 0.8), uniform("x_vel", -0.008, 0.008), uniform("y_vel", -0.012, -0.008),
                       fixed({{"y", 0.85}, {"shape", "circle"}, {"scale", 0.05}, {"c0", 255}, {"c1", 255}})});
  r["state_initializer"]["layers"] =
      arr(layer("walls", {left_wall(), right_wall(), top_wall()}),
          layer("floor", {slab(0.5, -0.06, 1.2, 0.1, {0, 0, 0})}),
          layer("ball", {one(ball)}),
          layer("paddle", {slab(0.5, 0.1, 0.2, 0.03, {0, 255, 0})}));
  r["physics"]["forces"] = arr(node("collision", {{"layer_pairs", arr(arr("ball", "walls"), arr("ball", "paddle"))},
                                                  {"elasticity", 1.0},
                                                  {"update_angular", false}}));
  r["task"] = node(
      "composite",
      {{"tasks", arr(node("contact_reward", {{"reward", 1.0},
                                             {"layer_a", "paddle"},
                                             {"layer_b", "ball"},
                                             {"reset_steps_after_contact", 10}}),
                     node("avoid_contact", {{"penalty", 0.0},
                                            {"layer_a", "ball"},
                                            {"layer_b", "floor"},
                                            {"terminate_on_contact", true}}),
                     node("timeout", {{"max_steps", 2000}}))}});
  r["action_space"] =
      node("joystick", {{"scaling", 0.02}, {"layer", "paddle"}, {"mode", "velocity"}, {"axes", arr(true, false)}});
  r["observers"] = image_observer();
  r["policy_hint"] = {{"agent", "paddle"}, {"target", "ball"}};
  return r;
}

json red_green() {
  json r = header("red_green");
  // Horizontal speed of at least 0.006 guarantees a side is reached; the
  // vertical component keeps the launch within about 60 degrees of horizontal.
  json x_vel = node("mixture", {{"components", arr(uniform("x_vel", -0.012, -0.006), uniform("x_vel", 0.006, 0.012))}});
  json ball = product({uniform("y", 0.3, 0.7), x_vel, uniform("y_vel", -0.01, 0.01),
                       fixed({{"x", 0.5}, {"shape", "circle"}, {"scale", 0.06}, {"c2", 255}})});
  r["state_initializer"]["layers"] = arr(layer("walls", {top_wall(), bottom_wall()}),
                                         layer("red", {slab(0.05, 0.5, 0.1, 1.0, {255, 0, 0})}),
                                         layer("green", {slab(0.95, 0.5, 0.1, 1.0, {0, 255, 0})}),
                                         layer("ball", {one(ball)}));
  r["physics"]["forces"] = arr(node(
      "collision", {{"layer_pairs", arr(arr("ball", "walls"))}, {"elasticity", 1.0}, {"update_angular", false}}));
  r["task"] = node(
      "composite",
      {{"tasks", arr(node("contact_reward", {{"reward", 1.0},
                                             {"layer_a", "ball"},
                                             {"layer_b", "green"},
                                             {"reset_steps_after_contact", 0}}),
                     node("contact_reward", {{"reward", 0.0},
                                             {"layer_a", "ball"},
                                             {"layer_b", "red"},
                                             {"reset_steps_after_contact", 0}}),
                     node("timeout", {{"max_steps", 500}}))}});
  r["action_space"] = node("composite", {{"children", json::array()}});
  r["observers"] = image_observer();
  return r;
}

json pacman() {
  json r = header("pacman");
  json pellet = {{"count", 10},
                 {"disjoint", true},
                 {"factors", product({off_center(0.1, 0.9),
                                      fixed({{"shape", "square"}, {"scale", 0.04}, {"c0", 255}, {"c1", 255}})})}};
  json ghost = {{"count", 2},
                {"disjoint", true},
                {"factors", product({off_center(0.1, 0.9), fixed({{"shape", "circle"}, {"scale", 0.08}, {"c0", 255}})})}};
  json agent = fixed({{"x", 0.5}, {"y", 0.5}, {"shape", "circle"}, {"scale", 0.07}, {"c1", 255}});
  r["state_initializer"]["layers"] = arr(layer("walls", {left_wall(), right_wall(), top_wall(), bottom_wall()}),
                                         layer("pellets", {pellet}),
                                         layer("agent", {one(agent)}),
                                         layer("ghosts", {ghost}, {"pellets", "agent"}));
  r["physics"]["forces"] =
      arr(node("drag", {{"coeff", 0.25}, {"layers", arr("agent")}}),
          node("collision", {{"layer_pairs", arr(arr("agent", "walls"), arr("ghosts", "walls"))},
                             {"elasticity", 1.0},
                             {"update_angular", false}}));
  r["rules"] = arr(node("vanish_on_contact", {{"predator", "agent"}, {"prey", "pellets"}}),
                   node("random_drift", {{"layer", "ghosts"}, {"speed", 0.006}, {"turn_probability", 0.02}}));
  r["phases"] = arr(json{{"name", "play"}, {"until", node("layer_empty", {{"layer", "pellets"}})}});
  r["task"] = node(
      "composite",
      {{"tasks",
        arr(node("contact_reward", {{"reward", 1.0}, {"layer_a", "agent"}, {"layer_b", "pellets"}, {"per_pair", true}}),
            node("avoid_contact",
                 {{"penalty", -5.0}, {"layer_a", "agent"}, {"layer_b", "ghosts"}, {"terminate_on_contact", true}}),
            node("timeout", {{"max_steps", 1500}}))}});
  r["action_space"] = node("joystick", {{"scaling", 0.01}, {"layer", "agent"}});
  r["observers"] = image_observer();
  r["policy_hint"] = {{"agent", "agent"}, {"target", "pellets"}};
  return r;
}

json collisions() {
  json r = header("collisions");
  json shapes = node("discrete", {{"key", "shape"}, {"values", arr("triangle", "square", "pentagon")}});
  json polygons = {{"count", 4},
                   {"disjoint", true},
                   {"factors", product({off_center(0.15, 0.85), shapes, uniform("scale", 0.1, 0.15),
                                        uniform("angle", 0.0, 6.283185307179586), uniform("x_vel", -0.01, 0.01),
                                        uniform("y_vel", -0.01, 0.01), uniform("angular_vel", -0.05, 0.05),
                                        uniform("c0", 64, 255), uniform("c2", 64, 255)})}};
  json agent = fixed({{"x", 0.5}, {"y", 0.5}, {"shape", "circle"}, {"scale", 0.07}, {"c1", 255}});
  r["state_initializer"]["layers"] = arr(layer("walls", {left_wall(), right_wall(), top_wall(), bottom_wall()}),
                                         layer("polygons", {polygons}),
                                         layer("agent", {one(agent)}, {"polygons"}));
  r["physics"]["forces"] =
      arr(node("drag", {{"coeff", 0.25}, {"layers", arr("agent")}}),
          node("collision",
               {{"layer_pairs", arr(arr("polygons", "polygons"), arr("polygons", "walls"), arr("agent", "walls"))},
                {"elasticity", 1.0},
                {"update_angular", true}}));
  r["task"] = node(
      "composite",
      {{"tasks", arr(node("avoid_contact", {{"penalty", -1.0},
                                            {"layer_a", "agent"},
                                            {"layer_b", "polygons"},
                                            {"terminate_on_contact", true}}),
                     node("timeout", {{"max_steps", 1000}}))}});
  r["action_space"] = node("joystick", {{"scaling", 0.01}, {"layer", "agent"}});
  r["observers"] = image_observer();
  return r;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"navigate_to_goal", "pong", "red_green", "pacman", "collisions"};
  return names;
}

Recipe builtin(std::string_view name) {
  if (name == "navigate_to_goal") return parse_recipe(navigate_to_goal());
  if (name == "pong") return parse_recipe(pong());
  if (name == "red_green") return parse_recipe(red_green());
  if (name == "pacman") return parse_recipe(pacman());
  if (name == "collisions") return parse_recipe(collisions());
  throw UnknownBuiltin(fmt::format("no builtin recipe named '{}'", name));
}

}  // namespace polyarena
