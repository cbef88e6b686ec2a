#include "polyarena/recipes.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "polyarena/errors.hpp"

namespace polyarena {

namespace {

using nlohmann::json;

std::string pointer_token(std::string_view key) {
  std::string out;
  for (const char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string child(const std::string& path, std::string_view key) { return path + "/" + pointer_token(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

std::string_view type_name(const json& j) { return j.type_name(); }

/// Strict object reader: every key must be consumed before done().
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, fmt::format("expected an object, got {}", type_name(j_)));
  }

  const std::string& path() const noexcept { return path_; }
  std::string at(std::string_view key) const { return child(path_, key); }

  const json& need(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) throw SchemaError(at(key), "required field is missing");
    seen_.insert(std::string(key));
    return *it;
  }

  const json* maybe(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) return nullptr;
    seen_.insert(std::string(key));
    return &*it;
  }

  double num(std::string_view key) { return as_num(need(key), at(key)); }
  double num(std::string_view key, double fallback) {
    const json* v = maybe(key);
    return v ? as_num(*v, at(key)) : fallback;
  }
  int integer(std::string_view key) { return as_int(need(key), at(key)); }
  int integer(std::string_view key, int fallback) {
    const json* v = maybe(key);
    return v ? as_int(*v, at(key)) : fallback;
  }
  std::optional<int> opt_integer(std::string_view key) {
    const json* v = maybe(key);
    if (!v || v->is_null()) return std::nullopt;
    return as_int(*v, at(key));
  }
  std::string str(std::string_view key) { return as_str(need(key), at(key)); }
  bool flag(std::string_view key, bool fallback) {
    const json* v = maybe(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw SchemaError(at(key), fmt::format("expected a boolean, got {}", type_name(*v)));
    return v->get<bool>();
  }
  std::vector<std::string> strings(std::string_view key) {
    const json& v = need(key);
    return as_strings(v, at(key));
  }
  std::vector<std::string> strings(std::string_view key, std::vector<std::string> fallback) {
    const json* v = maybe(key);
    return v ? as_strings(*v, at(key)) : fallback;
  }
  Vec2 vec2(std::string_view key) {
    const json& v = need(key);
    if (!v.is_array() || v.size() != 2) throw SchemaError(at(key), "expected [x, y]");
    return {as_num(v[0], child(at(key), 0)), as_num(v[1], child(at(key), 1))};
  }
  const json& array(std::string_view key) {
    const json& v = need(key);
    if (!v.is_array()) throw SchemaError(at(key), fmt::format("expected an array, got {}", type_name(v)));
    return v;
  }

  void done() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.contains(k)) throw SchemaError(at(k), "unknown field");
    }
  }

  static double as_num(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) return kInfiniteMass;
    throw SchemaError(path, fmt::format("expected a number, got {}", type_name(v)));
  }
  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, fmt::format("expected an integer, got {}", type_name(v)));
    return v.get<int>();
  }
  static std::string as_str(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path, fmt::format("expected a string, got {}", type_name(v)));
    return v.get<std::string>();
  }
  static std::vector<std::string> as_strings(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_str(v[i], child(path, i)));
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

/// {"type": name, "params": {...}} with params defaulting to {}.
struct Tagged {
  std::string type;
  Obj params;
};

const json kEmptyObject = json::object();

Tagged tagged(const json& j, const std::string& path) {
  Obj node(j, path);
  std::string type = node.str("type");
  const json* params = node.maybe("params");
  node.done();
  return {std::move(type), Obj(params ? *params : kEmptyObject, child(path, "params"))};
}

[[noreturn]] void unknown(const std::string& path, std::string_view kind, std::string_view type) {
  throw UnknownComponentName(fmt::format("{}: unknown {} '{}'", path, kind, type));
}

/// Converts engine invariant failures raised while constructing a component
/// into schema errors located at that component.
template <class F>
auto located(const std::string& path, F&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const SchemaError&) {
    throw;
  } catch (const UnknownComponentName&) {
    throw;
  } catch (const InvariantViolation& e) {
    throw SchemaError(path, e.what());
  } catch (const ImmutableField& e) {
    throw SchemaError(path, e.what());
  } catch (const UnknownShapeName& e) {
    throw SchemaError(path, e.what());
  }
}

FactorValue factor_value(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfiniteMass;
    return s;
  }
  if (v.is_array()) {
    std::vector<Vec2> verts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& p = v[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw SchemaError(child(path, i), "expected a vertex [x, y]");
      }
      verts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return verts;
  }
  throw SchemaError(path, fmt::format("expected a number, string or vertex list, got {}", type_name(v)));
}

/// Shape names resolve at generation time; reject unknown ones up front.
FactorValue keyed_value(const std::string& key, const json& v, const std::string& path) {
  FactorValue value = factor_value(v, path);
  if (key == "shape") {
    const auto* name = std::get_if<std::string>(&value);
    if (!name) throw SchemaError(path, "shape must be a name");
    located(path, [&] { return &named_shape(*name); });
  }
  return value;
}

Distribution distribution(const json& j, const std::string& path);

std::vector<Distribution> distributions(const json& arr, const std::string& path) {
  std::vector<Distribution> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(distribution(arr[i], child(path, i)));
  return out;
}

std::vector<double> numbers(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw SchemaError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(Obj::as_num(arr[i], child(path, i)));
  return out;
}

Distribution distribution(const json& j, const std::string& path) {
  auto [type, p] = tagged(j, path);
  const std::string& at = p.path();
  Distribution d = Distribution::product({});
  if (type == "uniform") {
    const std::string key = p.str("key");
    const double lo = p.num("lo"), hi = p.num("hi");
    d = located(at, [&] { return Distribution::uniform(key, lo, hi); });
  } else if (type == "discrete") {
    const std::string key = p.str("key");
    const json& vals = p.array("values");
    std::vector<FactorValue> values;
    for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(keyed_value(key, vals[i], child(p.at("values"), i)));
    std::vector<double> weights;
    if (const json* w = p.maybe("weights")) weights = numbers(*w, p.at("weights"));
    d = located(at, [&] { return Distribution::discrete(key, values, weights); });
  } else if (type == "fixed") {
    Obj vals(p.need("values"), p.at("values"));
    Assignment a;
    for (const auto& [k, v] : p.need("values").items()) a[k] = keyed_value(k, vals.need(k), vals.at(k));
    d = located(at, [&] { return Distribution::fixed(a); });
  } else if (type == "product") {
    auto parts = distributions(p.array("parts"), p.at("parts"));
    d = located(at, [&] { return Distribution::product(parts); });
  } else if (type == "mixture") {
    auto comps = distributions(p.array("components"), p.at("components"));
    std::vector<double> weights;
    if (const json* w = p.maybe("weights")) weights = numbers(*w, p.at("weights"));
    d = located(at, [&] { return Distribution::mixture(comps, weights); });
  } else if (type == "set_minus") {
    auto base = distribution(p.need("base"), p.at("base"));
    auto hold = distribution(p.need("hold_out"), p.at("hold_out"));
    d = located(at, [&] { return Distribution::set_minus(base, hold); });
  } else {
    unknown(child(path, "type"), "distribution", type);
  }
  p.done();
  return d;
}

SpriteGenerator generator(const json& j, const std::string& path) {
  Obj o(j, path);
  SpriteGenerator g;
  const json& count = o.need("count");
  if (count.is_number_integer()) {
    g.count = count.get<int>();
    if (count.get<int>() < 0) throw SchemaError(o.at("count"), "count must be >= 0");
  } else {
    auto d = distribution(count, o.at("count"));
    if (!d.keys().contains("count")) throw SchemaError(o.at("count"), "count distribution must assign 'count'");
    g.count = std::move(d);
  }
  if (const json* f = o.maybe("factors")) g.factors = distribution(*f, o.at("factors"));
  g.disjoint = o.flag("disjoint", false);
  g.max_rejections = o.integer("max_rejections", g.max_rejections);
  o.done();
  return g;
}

StateInitializer initializer(const json& j, const std::string& path) {
  Obj o(j, path);
  const json& layers = o.array("layers");
  StateInitializer init;
  std::set<std::string> names;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Obj l(layers[i], child(o.at("layers"), i));
    LayerInit li;
    li.name = l.str("name");
    if (!names.insert(li.name).second) throw SchemaError(l.at("name"), fmt::format("duplicate layer '{}'", li.name));
    if (const json* gens = l.maybe("generators")) {
      if (!gens->is_array()) throw SchemaError(l.at("generators"), "expected an array");
      for (std::size_t k = 0; k < gens->size(); ++k) li.generators.push_back(generator((*gens)[k], child(l.at("generators"), k)));
    }
    li.avoid_layers = l.strings("avoid_layers", {});
    for (std::size_t k = 0; k < li.avoid_layers.size(); ++k) {
      if (!names.contains(li.avoid_layers[k]) || li.avoid_layers[k] == li.name) {
        throw SchemaError(child(l.at("avoid_layers"), k), fmt::format("'{}' is not an earlier layer", li.avoid_layers[k]));
      }
    }
    l.done();
    init.layers.push_back(std::move(li));
  }
  o.done();
  return init;
}

/// Layer names declared by the initializer; references elsewhere must resolve.
class LayerCheck {
 public:
  explicit LayerCheck(const StateInitializer& init) {
    for (const auto& l : init.layers) names_.insert(l.name);
  }
  const std::string& operator()(const std::string& name, const std::string& path) const {
    if (!names_.contains(name)) throw SchemaError(path, fmt::format("layer '{}' is not declared", name));
    return name;
  }
  std::vector<std::string> all(const std::vector<std::string>& names, const std::string& path) const {
    for (std::size_t i = 0; i < names.size(); ++i) (*this)(names[i], child(path, i));
    return names;
  }

 private:
  std::set<std::string> names_;
};

Polymorphic<Force> force(const json& j, const std::string& path, const LayerCheck& layers) {
  auto [type, p] = tagged(j, path);
  Polymorphic<Force> out;
  if (type == "drag") {
    const double c = p.num("coeff");
    auto ls = layers.all(p.strings("layers"), p.at("layers"));
    out = Drag(c, ls);
  } else if (type == "constant_force") {
    const Vec2 f = p.vec2("force");
    auto ls = layers.all(p.strings("layers"), p.at("layers"));
    out = ConstantForce(f, ls);
  } else if (type == "friction") {
    const double c = p.num("coeff");
    auto ls = layers.all(p.strings("layers"), p.at("layers"));
    out = Friction(c, ls);
  } else if (type == "tether") {
    const std::string a = layers(p.str("layer_a"), p.at("layer_a"));
    const std::string b = layers(p.str("layer_b"), p.at("layer_b"));
    out = Tether(a, b, p.num("rest_length"));
  } else if (type == "collision") {
    const json& pairs = p.array("layer_pairs");
    std::vector<std::pair<std::string, std::string>> lp;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto names = Obj::as_strings(pairs[i], child(p.at("layer_pairs"), i));
      if (names.size() != 2) throw SchemaError(child(p.at("layer_pairs"), i), "expected [layer_a, layer_b]");
      layers.all(names, child(p.at("layer_pairs"), i));
      lp.emplace_back(names[0], names[1]);
    }
    const double e = p.num("elasticity", 1.0);
    const bool ang = p.flag("update_angular", true);
    out = located(p.path(), [&] { return Polymorphic<Force>(Collision(lp, e, ang)); });
  } else {
    unknown(child(path, "type"), "force", type);
  }
  p.done();
  return out;
}

Polymorphic<Task> task(const json& j, const std::string& path, const LayerCheck& layers) {
  auto [type, p] = tagged(j, path);
  Polymorphic<Task> out;
  if (type == "contact_reward") {
    const double r = p.num("reward");
    const std::string a = layers(p.str("layer_a"), p.at("layer_a"));
    const std::string b = layers(p.str("layer_b"), p.at("layer_b"));
    const auto steps = p.opt_integer("reset_steps_after_contact");
    const bool per_pair = p.flag("per_pair", false);
    out = located(p.path(), [&] { return Polymorphic<Task>(ContactReward(r, a, b, steps, per_pair)); });
  } else if (type == "timeout") {
    const int m = p.integer("max_steps");
    out = located(p.path(), [&] { return Polymorphic<Task>(TimeoutTask(m)); });
  } else if (type == "avoid_contact") {
    const double pen = p.num("penalty");
    const std::string a = layers(p.str("layer_a"), p.at("layer_a"));
    const std::string b = layers(p.str("layer_b"), p.at("layer_b"));
    out = AvoidContactPenalty(pen, a, b, p.flag("terminate_on_contact", true));
  } else if (type == "composite") {
    const json& tasks = p.array("tasks");
    std::vector<Polymorphic<Task>> subs;
    for (std::size_t i = 0; i < tasks.size(); ++i) subs.push_back(task(tasks[i], child(p.at("tasks"), i), layers));
    out = located(p.path(), [&] { return Polymorphic<Task>(CompositeTask(std::move(subs))); });
  } else {
    unknown(child(path, "type"), "task", type);
  }
  p.done();
  return out;
}

Polymorphic<ActionSpace> action_space(const json& j, const std::string& path, const LayerCheck& layers) {
  auto [type, p] = tagged(j, path);
  Polymorphic<ActionSpace> out;
  if (type == "joystick") {
    const double s = p.num("scaling");
    const std::string layer = layers(p.str("layer"), p.at("layer"));
    Joystick::Mode mode = Joystick::Mode::kForce;
    if (const json* m = p.maybe("mode")) {
      const std::string ms = Obj::as_str(*m, p.at("mode"));
      if (ms == "velocity") mode = Joystick::Mode::kVelocity;
      else if (ms != "force") throw SchemaError(p.at("mode"), fmt::format("mode must be force or velocity, got '{}'", ms));
    }
    std::array<bool, 2> axes{true, true};
    if (const json* a = p.maybe("axes")) {
      if (!a->is_array() || a->size() != 2 || !(*a)[0].is_boolean() || !(*a)[1].is_boolean()) {
        throw SchemaError(p.at("axes"), "expected [bool, bool]");
      }
      axes = {(*a)[0].get<bool>(), (*a)[1].get<bool>()};
    }
    out = located(p.path(), [&] { return Polymorphic<ActionSpace>(Joystick(s, layer, mode, axes)); });
  } else if (type == "grid") {
    const double step = p.num("step_size");
    const std::string layer = layers(p.str("layer"), p.at("layer"));
    out = located(p.path(), [&] { return Polymorphic<ActionSpace>(Grid(step, layer)); });
  } else if (type == "set_position") {
    out = SetPosition(layers(p.str("layer"), p.at("layer")));
  } else if (type == "click") {
    const std::string layer = layers(p.str("layer"), p.at("layer"));
    const double scale = p.num("motion_scale");
    out = located(p.path(), [&] { return Polymorphic<ActionSpace>(Click(layer, scale)); });
  } else if (type == "composite") {
    const json& kids = p.array("children");
    std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> children;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      Obj c(kids[i], child(p.at("children"), i));
      std::string name = c.str("name");
      auto space = action_space(c.need("space"), c.at("space"), layers);
      c.done();
      children.emplace_back(std::move(name), std::move(space));
    }
    out = located(p.path(), [&] { return Polymorphic<ActionSpace>(Composite(std::move(children))); });
  } else {
    unknown(child(path, "type"), "action space", type);
  }
  p.done();
  return out;
}

Polymorphic<Observer> observer(const json& j, const std::string& path, const LayerCheck& layers) {
  auto [type, p] = tagged(j, path);
  Polymorphic<Observer> out;
  if (type == "image") {
    const int w = p.integer("width", 256), h = p.integer("height", 256), k = p.integer("supersample", 1);
    out = located(p.path(), [&] { return Polymorphic<Observer>(ImageObserver(w, h, k)); });
  } else if (type == "features") {
    auto ls = layers.all(p.strings("layers", {}), p.at("layers"));
    auto fields = p.strings("fields");
    const int max = p.integer("max_sprites");
    if (max < 0) throw SchemaError(p.at("max_sprites"), "must be >= 0");
    const double pad = p.num("pad", -1.0);
    out = located(p.path(), [&] {
      return Polymorphic<Observer>(FeatureObserver(ls, fields, static_cast<std::size_t>(max), pad));
    });
  } else if (type == "display_list") {
    out = DisplayListObserver();
  } else {
    unknown(child(path, "type"), "observer", type);
  }
  p.done();
  return out;
}

Predicate predicate(const json& j, const std::string& path, const LayerCheck& layers) {
  auto [type, p] = tagged(j, path);
  Predicate out;
  if (type == "always") {
    out = Predicate::always();
  } else if (type == "never") {
    out = Predicate::never();
  } else if (type == "layer_empty") {
    out = Predicate::layer_empty(layers(p.str("layer"), p.at("layer")));
  } else if (type == "count_below") {
    const std::string layer = layers(p.str("layer"), p.at("layer"));
    out = Predicate::count_below(layer, p.integer("count"));
  } else if (type == "probability") {
    const double prob = p.num("p");
    if (!(prob >= 0.0 && prob <= 1.0)) throw SchemaError(p.at("p"), "probability must lie in [0, 1]");
    out = Predicate::chance(prob);
  } else {
    unknown(child(path, "type"), "predicate", type);
  }
  p.done();
  return out;
}

Polymorphic<Rule> rule(const json& j, const std::string& path, const LayerCheck& layers) {
  auto [type, p] = tagged(j, path);
  Polymorphic<Rule> out;
  if (type == "vanish_on_contact") {
    const std::string pred = layers(p.str("predator"), p.at("predator"));
    const std::string prey = layers(p.str("prey"), p.at("prey"));
    out = located(p.path(), [&] { return Polymorphic<Rule>(VanishOnContact(pred, prey)); });
  } else if (type == "modify_on_contact") {
    const std::string a = layers(p.str("layer_a"), p.at("layer_a"));
    const std::string b = layers(p.str("layer_b"), p.at("layer_b"));
    Obj as(p.need("assignments"), p.at("assignments"));
    Assignment assign;
    for (const auto& [k, v] : p.need("assignments").items()) assign[k] = factor_value(as.need(k), as.at(k));
    out = located(p.at("assignments"), [&] { return Polymorphic<Rule>(ModifyOnContact(a, b, assign)); });
  } else if (type == "conditional_create") {
    const Predicate when = predicate(p.need("when"), p.at("when"), layers);
    SpriteGenerator gen = generator(p.need("generator"), p.at("generator"));
    const std::string layer = layers(p.str("layer"), p.at("layer"));
    const int max = p.integer("max_count");
    out = located(p.path(), [&] { return Polymorphic<Rule>(ConditionalCreate(when, gen, layer, max)); });
  } else if (type == "timed") {
    const int start = p.integer("start_step");
    const auto end = p.opt_integer("end_step");
    auto inner = rule(p.need("rule"), p.at("rule"), layers);
    out = located(p.path(), [&] { return Polymorphic<Rule>(TimedRule(start, end, std::move(inner))); });
  } else if (type == "random_drift") {
    const std::string layer = layers(p.str("layer"), p.at("layer"));
    const double speed = p.num("speed"), turn = p.num("turn_probability");
    out = located(p.path(), [&] { return Polymorphic<Rule>(RandomDrift(layer, speed, turn)); });
  } else {
    unknown(child(path, "type"), "rule", type);
  }
  p.done();
  return out;
}

std::vector<Polymorphic<Rule>> rules(const json& arr, const std::string& path, const LayerCheck& layers) {
  if (!arr.is_array()) throw SchemaError(path, "expected an array");
  std::vector<Polymorphic<Rule>> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(rule(arr[i], child(path, i), layers));
  return out;
}

PhaseSequence phases(const json& arr, const std::string& path, const LayerCheck& layers) {
  if (!arr.is_array() || arr.empty()) throw SchemaError(path, "expected a non-empty array of phases");
  std::vector<Phase> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Obj o(arr[i], child(path, i));
    Phase ph;
    ph.name = o.str("name");
    ph.duration = o.opt_integer("duration");
    if (ph.duration && *ph.duration < 1) throw SchemaError(o.at("duration"), "duration must be >= 1");
    if (const json* u = o.maybe("until")) ph.until = predicate(*u, o.at("until"), layers);
    if (const json* r = o.maybe("rules")) ph.rules = rules(*r, o.at("rules"), layers);
    if (const json* t = o.maybe("task")) ph.task = task(*t, o.at("task"), layers);
    ph.frozen_layers = layers.all(o.strings("frozen_layers", {}), o.at("frozen_layers"));
    o.done();
    out.push_back(std::move(ph));
  }
  return PhaseSequence(std::move(out));
}

std::uint64_t seed_value(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError(path, "seed must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

struct Parsed {
  std::string name;
  EnvironmentConfig config;
  std::optional<PolicyHint> hint;
};

Parsed parse(const json& doc) {
  Obj root(doc, "");
  Parsed out;
  const json& version = root.need("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kRecipeSchemaVersion) {
    throw SchemaError("/schema_version", fmt::format("unsupported schema version {}", version.dump()));
  }
  out.name = root.maybe("name") ? Obj::as_str(*root.maybe("name"), "/name") : std::string("recipe");
  if (const json* s = root.maybe("seed")) out.config.seed = seed_value(*s, "/seed");

  EnvironmentConfig& c = out.config;
  c.initializer = initializer(root.need("state_initializer"), "/state_initializer");
  const LayerCheck layers(c.initializer);

  if (const json* ph = root.maybe("physics")) {
    Obj p(*ph, "/physics");
    if (const json* fs = p.maybe("forces")) {
      if (!fs->is_array()) throw SchemaError(p.at("forces"), "expected an array");
      for (std::size_t i = 0; i < fs->size(); ++i) c.forces.push_back(force((*fs)[i], child(p.at("forces"), i), layers));
    }
    c.physics.max_passes = p.integer("max_passes", c.physics.max_passes);
    if (c.physics.max_passes < 1) throw SchemaError(p.at("max_passes"), "must be >= 1");
    c.physics.correction = p.num("correction", c.physics.correction);
    if (!(c.physics.correction >= 0.0 && c.physics.correction <= 1.0)) {
      throw SchemaError(p.at("correction"), "must lie in [0, 1]");
    }
    p.done();
  }

  c.task = task(root.need("task"), "/task", layers);
  c.action_space = action_space(root.need("action_space"), "/action_space", layers);

  Obj obs(root.need("observers"), "/observers");
  for (const auto& [name, node] : root.need("observers").items()) {
    c.observers.emplace_back(name, observer(obs.need(name), obs.at(name), layers));
  }
  obs.done();
  if (c.observers.empty()) throw SchemaError("/observers", "at least one observer is required");

  if (const json* r = root.maybe("rules")) c.rules = rules(*r, "/rules", layers);
  if (const json* ph = root.maybe("phases")) c.phases = phases(*ph, "/phases", layers);

  if (const json* h = root.maybe("policy_hint")) {
    Obj hint(*h, "/policy_hint");
    PolicyHint ph;
    ph.agent = layers(hint.str("agent"), hint.at("agent"));
    ph.target = layers(hint.str("target"), hint.at("target"));
    hint.done();
    out.hint = std::move(ph);
  }
  root.done();
  return out;
}

}  // namespace

Recipe parse_recipe(const json& document) {
  Parsed p = parse(document);
  return {std::move(p.name), document};
}

Recipe parse_recipe_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", fmt::format("not valid JSON: {}", e.what()));
  }
  return parse_recipe(doc);
}

Recipe load_recipe(std::string_view name_or_path) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
  const std::filesystem::path path(name_or_path);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw UnknownBuiltin(fmt::format("'{}' is neither a builtin recipe ({}) nor a readable file", name_or_path,
                                     fmt::join(names, ", ")));
  }
  std::ifstream f(path);
  if (!f) throw IoError(fmt::format("cannot read {}", path.string()));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_recipe_text(ss.str());
}

std::string serialize(const Recipe& recipe) { return recipe.document.dump(2) + "\n"; }

std::uint64_t recipe_hash(const Recipe& recipe) { return fnv1a64(serialize(recipe)); }

EnvironmentConfig build_config(const Recipe& recipe, std::optional<std::uint64_t> seed) {
  Parsed p = parse(recipe.document);
  if (seed) p.config.seed = *seed;
  return std::move(p.config);
}

Environment build(const Recipe& recipe, std::optional<std::uint64_t> seed) {
  return Environment(build_config(recipe, seed));
}

std::optional<PolicyHint> policy_hint(const Recipe& recipe) { return parse(recipe.document).hint; }

}  // namespace polyarena
