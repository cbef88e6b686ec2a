#include "polyarena/recorder.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "polyarena/errors.hpp"

namespace polyarena {

using nlohmann::json;

void StreamSink::write(std::string_view line) {
  out_ << line << '\n';
  if (!out_) throw SinkWriteError("log stream rejected a record");
}

namespace {

void emit(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += json(k).dump();
        out += ':';
        emit(v, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) {
        out += "\"nan\"";
      } else if (std::isinf(v)) {
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        fmt::format_to(std::back_inserter(out), "{:.9g}", v);
      }
      break;
    }
    default:
      out += j.dump();
  }
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInfiniteMass;
    if (s == "-inf") return -kInfiniteMass;
    if (s == "nan") return std::nan("");
  }
  throw InvariantViolation(fmt::format("expected a number in log record, got {}", j.dump()));
}

json vertex_list(std::span<const Vec2> vertices) {
  json out = json::array();
  for (const Vec2& v : vertices) out.push_back(json::array({v.x, v.y}));
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw IoError(fmt::format("cannot write {}", path.string()));
}

void make_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

std::filesystem::path frame_path(const std::filesystem::path& dir, int t) {
  return dir / fmt::format("frame_{}.png", t);
}

json step_record(const TimeStep& ts, const json& action, const State& state) {
  return {{"step_index", ts.meta.step_index},
          {"trial_index", ts.meta.trial_index},
          {"kind", std::string(to_string(ts.kind))},
          {"reward", ts.reward},
          {"action", action},
          {"phase", ts.meta.phase ? json(*ts.meta.phase) : json()},
          {"state", state_record(state)}};
}

const json& record_fields() {
  static const json fields = json::array({"step_index", "trial_index", "kind", "reward", "action", "phase", "state"});
  return fields;
}

const json& sprite_fields() {
  static const json fields =
      json::array({"id", "shape", "vertices", "x", "y", "angle", "scale", "x_vel", "y_vel", "angular_vel", "mass",
                   "c0", "c1", "c2", "opacity", "meta"});
  return fields;
}

}  // namespace

std::string encode_record(const json& record) {
  std::string out;
  emit(record, out);
  return out;
}

json sprite_record(const Sprite& s) {
  json meta = json::object();
  for (const auto& [k, v] : s.metadata) {
    meta[k] = std::visit([](const auto& x) { return json(x); }, v);
  }
  return {{"id", s.id},
          {"shape", s.shape_name.empty() ? json() : json(s.shape_name)},
          {"vertices", vertex_list(s.shape->vertices())},
          {"x", s.position.x},
          {"y", s.position.y},
          {"angle", s.angle},
          {"scale", s.scale},
          {"x_vel", s.velocity.x},
          {"y_vel", s.velocity.y},
          {"angular_vel", s.angular_velocity},
          {"mass", s.mass},
          {"c0", s.color[0]},
          {"c1", s.color[1]},
          {"c2", s.color[2]},
          {"opacity", s.opacity},
          {"meta", std::move(meta)}};
}

json state_record(const State& state) {
  json layers = json::array();
  for (const auto& l : state.layers()) {
    json sprites = json::array();
    for (const Sprite& s : l.sprites) sprites.push_back(sprite_record(s));
    layers.push_back({{"layer", l.name}, {"sprites", std::move(sprites)}});
  }
  return layers;
}

State state_from_record(const json& layers) {
  State state;
  try {
    for (const json& l : layers) {
      const auto name = l.at("layer").get<std::string>();
      state.add_layer(name);
      for (const json& r : l.at("sprites")) {
        SpriteFactors f;
        if (r.at("shape").is_string()) {
          f.shape = r.at("shape").get<std::string>();
        } else {
          std::vector<Vec2> verts;
          for (const json& v : r.at("vertices")) verts.push_back({read_number(v.at(0)), read_number(v.at(1))});
          f.vertices = std::move(verts);
        }
        f.x = read_number(r.at("x"));
        f.y = read_number(r.at("y"));
        f.angle = read_number(r.at("angle"));
        f.scale = read_number(r.at("scale"));
        f.x_vel = read_number(r.at("x_vel"));
        f.y_vel = read_number(r.at("y_vel"));
        f.angular_vel = read_number(r.at("angular_vel"));
        f.mass = read_number(r.at("mass"));
        f.c0 = read_number(r.at("c0"));
        f.c1 = read_number(r.at("c1"));
        f.c2 = read_number(r.at("c2"));
        f.opacity = read_number(r.at("opacity"));
        for (const auto& [k, v] : r.at("meta").items()) {
          f.metadata[k] = v.is_string() ? MetaValue(v.get<std::string>()) : MetaValue(read_number(v));
        }
        Sprite s = make_sprite(f);
        s.id = r.at("id").get<SpriteId>();
        state.add_sprite(name, std::move(s));
      }
    }
  } catch (const json::exception& e) {
    throw InvariantViolation(fmt::format("malformed state record: {}", e.what()));
  }
  return state;
}

Action logged_action(const Action& action) {
  return Action::from_json(json::parse(encode_record(action.to_json())));
}

EpisodeSummary record_episode(Environment& env, const Policy& policy, RecordSink& sink, int max_steps,
                              const FrameHook& on_record) {
  if (max_steps < 0) throw InvariantViolation("max_steps must be >= 0");
  EpisodeSummary summary;
  const auto write = [&](const TimeStep& ts, const json& action) {
    sink.write(encode_record(step_record(ts, action, env.state())));
    if (on_record) on_record(summary.records, env.state());
    ++summary.records;
    summary.total_reward += ts.reward;
  };

  write(env.reset(), json());
  for (int t = 0; t < max_steps; ++t) {
    const Action action = logged_action(policy(env));
    const TimeStep ts = env.step(action, false);
    write(ts, action.to_json());
    if (ts.kind == StepKind::kLast) return summary;
  }
  summary.truncated = true;
  return summary;
}

json generate_dataset(const Recipe& recipe, const DatasetOptions& options, const std::filesystem::path& out_dir) {
  if (options.episodes < 1) throw InvariantViolation("a dataset needs at least one episode");
  const auto hint = policy_hint(recipe);
  if (options.policy == "seek" && !hint) {
    throw InvariantViolation(fmt::format("recipe '{}' has no policy hint for the seek policy", recipe.name));
  }
  if (options.policy != "seek" && options.policy != "random") {
    throw InvariantViolation(fmt::format("unknown policy '{}' (random, seek)", options.policy));
  }
  Rasterizer raster(options.width, options.height, options.supersample);
  make_dirs(out_dir);

  json episodes = json::array();
  for (int i = 0; i < options.episodes; ++i) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
    const auto dir = out_dir / fmt::format("episode_{}", i);
    make_dirs(dir);
    Environment env = build(recipe, seed);
    const Policy policy = options.policy == "seek" ? seek_policy(*hint) : random_policy(seed);

    const auto log_path = dir / "log.ndjson";
    std::ofstream log(log_path, std::ios::binary);
    if (!log) throw IoError(fmt::format("cannot write {}", log_path.string()));
    StreamSink sink(log);
    EpisodeSummary summary;
    try {
      summary = record_episode(env, policy, sink, options.max_steps, [&](int t, const State& state) {
        write_png(raster.render(state), frame_path(dir, t));
      });
    } catch (const SinkWriteError&) {
      throw IoError(fmt::format("cannot write {}", log_path.string()));
    }
    log.close();
    if (!log) throw IoError(fmt::format("cannot write {}", log_path.string()));

    episodes.push_back({{"index", i},
                        {"seed", seed},
                        {"frames", summary.records},
                        {"records", summary.records},
                        {"total_reward", summary.total_reward},
                        {"truncated", summary.truncated},
                        {"log", fmt::format("episode_{}/log.ndjson", i)}});
  }

  json manifest{{"format_version", kLogFormatVersion},
                {"recipe", recipe.name},
                {"recipe_hash", fmt::format("{:016x}", recipe_hash(recipe))},
                {"policy", options.policy},
                {"seed", options.seed},
                {"max_steps", options.max_steps},
                {"image", {{"width", options.width}, {"height", options.height}, {"supersample", options.supersample}}},
                {"episode_count", options.episodes},
                {"record_fields", record_fields()},
                {"sprite_fields", sprite_fields()},
                {"episodes", std::move(episodes)}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

std::vector<std::string> read_log(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot read {}", path.string()));
  std::vector<std::string> lines;
  for (std::string line; std::getline(f, line);) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (f.bad()) throw IoError(fmt::format("error reading {}", path.string()));
  return lines;
}

ReplayReport verify_replay(const Recipe& recipe, std::uint64_t seed, std::span<const std::string> lines) {
  ReplayReport report;
  report.records = static_cast<int>(lines.size());
  if (lines.empty()) return report;
  Environment env = build(recipe, seed);
  MemorySink sink;
  std::size_t next = 1;
  const Policy tape = [&](const Environment&) {
    if (next >= lines.size()) throw InvariantViolation("log ended before its trial");
    return Action::from_json(json::parse(lines[next++]).at("action"));
  };
  try {
    record_episode(env, tape, sink, static_cast<int>(lines.size()) - 1);
  } catch (const InvariantViolation&) {
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i >= sink.lines.size() || sink.lines[i] != lines[i]) {
      report.first_mismatch = static_cast<int>(i);
      break;
    }
  }
  return report;
}

int render_log(std::span<const std::string> lines, const std::filesystem::path& out_dir, int width, int height,
               int supersample) {
  Rasterizer raster(width, height, supersample);
  make_dirs(out_dir);
  int t = 0;
  for (const auto& line : lines) {
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InvariantViolation(fmt::format("log record {} is not JSON: {}", t, e.what()));
    }
    write_png(raster.render(state_from_record(record.at("state"))), frame_path(out_dir, t++));
  }
  return t;
}

}  // namespace polyarena
