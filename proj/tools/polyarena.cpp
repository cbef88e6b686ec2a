#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "polyarena/bench.hpp"
#include "polyarena/errors.hpp"
#include "polyarena/recorder.hpp"
#include "polyarena/server/server.hpp"

using namespace polyarena;

int main(int argc, char** argv) {
  CLI::App app{"polyarena: compose, play, benchmark and record 2-D physical tasks"};
  app.require_subcommand(1);

  std::string recipe = "pong";
  int fps = 60;
  int port = 8765;
  std::string address = "127.0.0.1";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> web_root;
  auto* serve = app.add_subcommand("serve", "Run the WebSocket play server");
  serve->add_option("--recipe", recipe, "Builtin name or recipe file")->capture_default_str();
  serve->add_option("--fps", fps, "Simulation and frame rate")->capture_default_str()->check(CLI::Range(1, 1000));
  serve->add_option("--port", port, "TCP port")->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--address", address, "Listen address")->capture_default_str();
  serve->add_option("--seed", seed, "Base seed; session i uses seed + i");
  serve->add_option("--web-root", web_root, "Directory of static client files")->check(CLI::ExistingDirectory);

  int size = 512, steps = 1000, supersample = 1;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Measure steps per second including rasterization");
  bench->add_option("--recipe", recipe, "Builtin name or recipe file")->capture_default_str();
  bench->add_option("--size", size, "Image side in pixels")->capture_default_str()->check(CLI::Range(1, 8192));
  bench->add_option("--steps", steps, "Steps to time")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--supersample", supersample, "1, 2 or 4")->capture_default_str()->check(CLI::IsMember({1, 2, 4}));
  bench->add_option("--seed", bench_seed)->capture_default_str();

  DatasetOptions ds;
  std::string out_dir;
  auto* dataset = app.add_subcommand("dataset", "Record episodes to PNG frames, logs and a manifest");
  dataset->add_option("--recipe", recipe, "Builtin name or recipe file")->capture_default_str();
  dataset->add_option("--episodes", ds.episodes)->capture_default_str()->check(CLI::PositiveNumber);
  dataset->add_option("--policy", ds.policy)->capture_default_str()->check(CLI::IsMember({"random", "seek"}));
  dataset->add_option("--size", ds.width, "Frame side in pixels")->capture_default_str()->check(CLI::Range(1, 8192));
  dataset->add_option("--supersample", ds.supersample)->capture_default_str()->check(CLI::IsMember({1, 2, 4}));
  dataset->add_option("--max-steps", ds.max_steps)->capture_default_str()->check(CLI::NonNegativeNumber);
  dataset->add_option("--seed", ds.seed)->capture_default_str();
  dataset->add_option("--out", out_dir, "Output directory")->required();

  std::string log_path, frames_dir;
  std::optional<std::uint64_t> verify_seed;
  int replay_size = 256;
  auto* replay = app.add_subcommand("replay", "Render a recorded log to frames, optionally verifying it");
  replay->add_option("--log", log_path, "log.ndjson from a dataset")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", frames_dir, "Directory for frame_{t}.png");
  replay->add_option("--size", replay_size)->capture_default_str()->check(CLI::Range(1, 8192));
  replay->add_option("--recipe", recipe, "Recipe used for --verify")->capture_default_str();
  replay->add_option("--verify", verify_seed, "Re-simulate from this seed and compare with the log");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      ServerOptions o;
      o.recipe = recipe;
      o.fps = fps;
      o.port = static_cast<unsigned short>(port);
      o.address = address;
      o.seed = seed;
      if (web_root) o.web_root = *web_root;
      PlayServer server(o);
      fmt::print("serving {} at {} fps on http://{}:{}/ (WebSocket /ws)\n", recipe, fps, address, server.port());
      std::fflush(stdout);
      server.run(true);
    } else if (*bench) {
      const BenchResult r = run_benchmark(load_recipe(recipe), size, steps, bench_seed, supersample);
      fmt::print("recipe={} size={} steps={} seconds={:.3f} fps={:.1f} trials={}\n", recipe, size, r.steps, r.seconds,
                 r.fps, r.trials);
    } else if (*dataset) {
      ds.height = ds.width;
      const auto manifest = generate_dataset(load_recipe(recipe), ds, out_dir);
      int frames = 0;
      for (const auto& e : manifest["episodes"]) frames += e["frames"].get<int>();
      fmt::print("wrote {} episodes, {} frames to {}\n", ds.episodes, frames, out_dir);
    } else if (*replay) {
      const auto lines = read_log(log_path);
      if (verify_seed) {
        const ReplayReport rep = verify_replay(load_recipe(recipe), *verify_seed, lines);
        if (!rep.identical()) {
          fmt::print(stderr, "replay diverges at record {} of {}\n", rep.first_mismatch, rep.records);
          return 1;
        }
        fmt::print("replay identical over {} records\n", rep.records);
      }
      if (!frames_dir.empty()) {
        const int n = render_log(lines, frames_dir, replay_size, replay_size);
        fmt::print("rendered {} frames to {}\n", n, frames_dir);
      }
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
