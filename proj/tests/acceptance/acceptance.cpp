// Acceptance gate: one PASS/FAIL line per primary criterion. Exit status is
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>

#include <fmt/format.h>

#include "collision_scenarios.hpp"
#include "oracles.hpp"
#include "polyarena/bench.hpp"
#include "polyarena/errors.hpp"
#include "polyarena/recorder.hpp"

using namespace polyarena;
using namespace polyarena::testing;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

void require(Verdict& v, bool ok, const std::string& what) {
  if (!ok && v.pass) {
    v.pass = false;
    v.detail = what;
  }
}

int failures = 0;

void criterion(const std::string& name, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, fmt::format("threw: {}", e.what())};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !v.pass;
  fmt::print("{} {} ({:.2f} s): {}\n", v.pass ? "PASS" : "FAIL", name, s, v.detail);
  std::fflush(stdout);
}

std::vector<Vec2> world(const Sprite& s) { return sprite_world_vertices(s); }

const Sprite& only(const State& s, std::string_view layer) { return s.layer(layer).sprites.at(0); }

bool agent_touches_goal(const State& s) { return convex_overlap(world(only(s, "agent")), world(only(s, "goal"))); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Verdict throughput() {
  const BenchResult r = run_benchmark(builtin("pong"), 512, 1000);
  Verdict v{true, fmt::format("pong 512x512, {} steps in {:.3f} s = {:.1f} fps (need >= 100 fps, <= 30 s)", r.steps,
                              r.seconds, r.fps)};
  require(v, r.fps >= 100.0, v.detail);
  require(v, r.seconds <= 30.0, v.detail);
  return v;
}

Verdict navigate_listing() {
  const auto t0 = std::chrono::steady_clock::now();
  Environment env = build(builtin("navigate_to_goal"));
  const TimeStep first = env.reset();
  Verdict v;
  require(v, only(env.state(), "agent").position == Vec2{0.5, 0.5}, "agent does not start at (0.5, 0.5)");
  require(v, only(env.state(), "goal").position == Vec2{0.1, 0.1}, "goal is not at (0.1, 0.1)");
  require(v, first.kind == StepKind::kFirst, "reset is not FIRST");

  const std::vector<double> toward_goal{-1.0, -1.0};
  int contact_step = -1, rewarded_steps = 0, last_step = -1;
  double total = 0.0;
  for (int t = 1; t <= 500 && last_step < 0; ++t) {
    const TimeStep ts = env.step(toward_goal, false);
    if (contact_step < 0 && agent_touches_goal(env.state())) contact_step = t;
    if (ts.reward != 0.0) {
      ++rewarded_steps;
      require(v, t == contact_step, fmt::format("reward at step {} but oracle contact at step {}", t, contact_step));
    }
    total += ts.reward;
    if (ts.kind == StepKind::kLast) last_step = t;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(v, contact_step > 0, "agent never reached the goal");
  require(v, total == 1.0 && rewarded_steps == 1, fmt::format("reward total {} over {} steps", total, rewarded_steps));
  require(v, last_step == contact_step + 5,
          fmt::format("contact at {}, LAST at {} (want contact + 5)", contact_step, last_step));
  require(v, secs < 1.0, fmt::format("took {:.3f} s", secs));
  if (v.pass) {
    v.detail = fmt::format("contact at step {}, reward 1.0 once, LAST at step {} (+5), {:.1f} ms", contact_step,
                           last_step, 1e3 * secs);
  }
  return v;
}

Verdict conservation() {
  std::mt19937_64 rng(20240517);
  double worst_p = 0.0, worst_e = 0.0, worst_vn = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CollisionCase c = random_collision(rng);
    const double scale = c.a.mass * c.a.velocity.norm() + c.b.mass * c.b.velocity.norm();
    for (const double e : {0.0, 1.0}) {
      for (const bool angular : {false, true}) {
        Sprite a = c.a, b = c.b;
        const Vec2 p0 = linear_momentum(a, b);
        const double e0 = kinetic_energy(a, b, angular);
        const double vn0 = normal_relative_velocity(a, b, c.contact, angular);
        apply_kicks(resolve_collision(c.contact, a, b, e, angular), a, b);
        worst_p = std::max(worst_p, (linear_momentum(a, b) - p0).norm() / scale);
        if (e == 1.0 && !angular) worst_e = std::max(worst_e, relative_error(kinetic_energy(a, b, false), e0));
        // Only approaching contacts are resolved; separating ones must be left alone.
        const double vn = normal_relative_velocity(a, b, c.contact, angular);
        if (e == 0.0) worst_vn = std::max(worst_vn, vn0 < 0.0 ? std::abs(vn) : std::abs(vn - vn0));
      }
    }
  }
  Verdict v{true, fmt::format("1000 collisions x 4 modes: max |dp|/sum m|v| = {:.2e}, max KE rel (e=1) = {:.2e}, "
                              "max |v_rel.n| after approaching contacts (e=0) = {:.2e}",
                              worst_p, worst_e, worst_vn)};
  require(v, worst_p <= 1e-9, v.detail);
  require(v, worst_e <= 1e-6, v.detail);
  require(v, worst_vn <= 1e-9, v.detail);
  return v;
}

Verdict geometry() {
  std::mt19937_64 rng(77);
  double worst_moment = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto verts = random_convex_polygon(rng, {0.2, -0.1}, 0.7);
    const PlanarMoments m = integrate_moments(verts);
    const double oracle = m.polar_about_centroid / m.area;
    worst_moment = std::max(worst_moment, std::abs(moment_of_inertia(Polygon::from_vertices(verts), 1.0) - oracle) / oracle);
  }
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int mismatches = 0, cases = 0;
  while (cases < 10'000) {
    const auto verts = random_convex_polygon(rng, {0.0, 0.0}, 1.0);
    for (int k = 0; k < 100; ++k, ++cases) {
      const Vec2 p{u(rng), u(rng)};
      mismatches += point_in_polygon(p, verts) != (winding_number(p, verts) != 0);
    }
  }
  Verdict v{true, fmt::format("moment of inertia max rel error {:.2e} on 20 polygons (tol 1e-4); point-in-polygon "
                              "{} mismatches in {} cases",
                              worst_moment, mismatches, cases)};
  require(v, worst_moment <= 1e-4, v.detail);
  require(v, mismatches == 0, v.detail);
  return v;
}

Verdict determinism() {
  Verdict v;
  // (seed, tape) -> byte-identical logs and frames.
  for (const auto& name : builtin_names()) {
    const Recipe r = builtin(name);
    Environment a = build(r, 31), b = build(r, 31);
    MemorySink sa, sb;
    std::vector<std::vector<std::uint8_t>> fa, fb;
    record_episode(a, random_policy(31), sa, 300, [&](int, const State& s) { fa.push_back(encode_png(rasterize(s, 64, 64))); });
    record_episode(b, random_policy(31), sb, 300, [&](int, const State& s) { fb.push_back(encode_png(rasterize(s, 64, 64))); });
    require(v, sa.lines == sb.lines, fmt::format("{}: logs differ", name));
    require(v, fa == fb, fmt::format("{}: frames differ", name));
    require(v, verify_replay(r, 31, sa.lines).identical(), fmt::format("{}: replay diverges", name));
  }

  // A clone stepped 100 times leaves the origin's next observation unchanged.
  for (const auto& name : builtin_names()) {
    Environment origin = build(builtin(name), 5), twin = build(builtin(name), 5);
    const Policy p = random_policy(5), q = random_policy(5);
    origin.reset();
    twin.reset();
    for (int i = 0; i < 10; ++i) {
      origin.step(p(origin), false);
      twin.step(q(twin), false);
    }
    Environment sim = origin.clone_for_simulation();
    const Policy noise = random_policy(999);
    for (int i = 0; i < 100; ++i) sim.step(noise(sim), false);
    const Action next = p(origin);
    q(twin);
    require(v, origin.step(next) == twin.step(next), fmt::format("{}: clone disturbed its origin", name));
  }

  // 1-step lookahead over the 9-action grid versus an exhaustive oracle that
  // rebuilds each successor from scratch and checks contact geometrically.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), radius(0.095, 0.135), vel(-0.01, 0.01);
  const Recipe nav = builtin("navigate_to_goal");
  int scenarios = 0, decisive = 0, disagreements = 0;
  while (scenarios < 300) {
    Environment env = build(nav);
    env.reset();
    Sprite& agent = env.mutable_state().layer("agent").sprites.at(0);
    const double th = angle(rng), rad = radius(rng);
    agent.position = {0.1 + rad * std::cos(th), 0.1 + rad * std::sin(th)};
    agent.velocity = {vel(rng), vel(rng)};
    if (agent_touches_goal(env.state())) continue;
    ++scenarios;
    const State start = env.state();

    double best = -1.0;
    std::vector<double> chosen;
    bool any_contact = false;
    for (double ax : {-1.0, 0.0, 1.0}) {
      for (double ay : {-1.0, 0.0, 1.0}) {
        const std::vector<double> a{ax, ay};
        Environment sim = env.clone_for_simulation();
        const double reward = sim.step(a, false).reward;
        if (reward > best) {
          best = reward;
          chosen = a;
        }
        Environment fresh = build(nav);
        fresh.reset();
        fresh.mutable_state() = start;
        fresh.step(a, false);
        any_contact = any_contact || agent_touches_goal(fresh.state());
      }
    }
    Environment fresh = build(nav);
    fresh.reset();
    fresh.mutable_state() = start;
    fresh.step(chosen, false);
    const bool chosen_contacts = agent_touches_goal(fresh.state());
    decisive += any_contact;
    disagreements += chosen_contacts != any_contact;
  }
  require(v, disagreements == 0, fmt::format("lookahead disagreed with the oracle {} times", disagreements));
  require(v, decisive >= 30, fmt::format("only {} scenarios had a contacting action", decisive));
  if (v.pass) {
    v.detail = fmt::format("5 builtins byte-identical over 300-step tapes and replays; clone isolation on 5 builtins; "
                           "lookahead agrees with oracle on {} scenarios ({} with a contacting action)",
                           scenarios, decisive);
  }
  return v;
}

Verdict renderer() {
  Verdict v;
  Environment env = build(builtin("navigate_to_goal"));
  const Image img = std::get<Image>(env.reset().observation("image"));
  int red = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) red += img.pixel(x, y) == std::array<std::uint8_t, 3>{255, 0, 0};
  }
  const double target = 0.1 * 256 * 0.1 * 256;
  require(v, std::abs(red - target) <= 0.05 * target, fmt::format("{} red pixels vs {}", red, target));

  // Agent layer is drawn after the goal layer.
  env.mutable_state().layer("agent").sprites.at(0).position = {0.12, 0.12};
  const Image over = rasterize(env.state(), 256, 256);
  const auto px = [&](Vec2 p) { return over.pixel(int(p.x * 256), int((1.0 - p.y) * 256)); };
  require(v, px({0.1, 0.1}) == std::array<std::uint8_t, 3>{0, 255, 0}, "overlap is not drawn in the front color");
  require(v, px({0.06, 0.06}) == std::array<std::uint8_t, 3>{255, 0, 0}, "goal-only pixel lost its color");

  const auto dir = std::filesystem::temp_directory_path() / "polyarena_acceptance";
  std::filesystem::create_directories(dir);
  Environment a = build(builtin("collisions"), 12), b = build(builtin("collisions"), 12);
  a.reset();
  b.reset();
  write_png(rasterize(a.state(), 256, 256, 4), dir / "a.png");
  write_png(rasterize(b.state(), 256, 256, 4), dir / "b.png");
  const std::string pa = slurp(dir / "a.png"), pb = slurp(dir / "b.png");
  require(v, !pa.empty() && pa == pb, "identical states produced different PNG bytes");
  if (v.pass) {
    v.detail = fmt::format("goal sprite {} red px vs {:.2f} (+-5%); z-order holds; identical states give identical "
                           "{}-byte PNGs",
                           red, target, pa.size());
  }
  return v;
}

Verdict procgen() {
  Verdict v;
  const auto square = [](double lo, double hi) {
    return Distribution::product({Distribution::uniform("x", lo, hi), Distribution::uniform("y", lo, hi)});
  };
  const Distribution off_center = Distribution::set_minus(square(0.1, 0.9), square(0.3, 0.7));
  Rng rng(808);
  int held = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Assignment a = sample(off_center, rng);
    const double x = std::get<double>(a.at("x")), y = std::get<double>(a.at("y"));
    held += x >= 0.3 && x <= 0.7 && y >= 0.3 && y <= 0.7;
  }
  require(v, held == 0, fmt::format("{} hold-out members emitted", held));

  const std::vector<double> w{0.2, 0.3, 0.5};
  const Distribution mix = Distribution::mixture(
      {Distribution::discrete("k", {0.0}), Distribution::discrete("k", {1.0}), Distribution::discrete("k", {2.0})}, w);
  constexpr int kDraws = 10'000;
  std::array<int, 3> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[static_cast<std::size_t>(std::get<double>(sample(mix, rng).at("k")))];
  double worst_z = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double sigma = std::sqrt(w[i] * (1 - w[i]) / kDraws);
    worst_z = std::max(worst_z, std::abs(counts[i] / double(kDraws) - w[i]) / sigma);
  }
  require(v, worst_z <= 3.0, fmt::format("mixture frequency off by {:.2f} sigma", worst_z));

  int contacting = 0, pairs = 0;
  for (const auto& name : {"pacman", "collisions"}) {
    Environment env = build(builtin(name), 0);
    for (int trial = 0; trial < 200; ++trial) {
      env.reset();
      std::vector<const Sprite*> placed;
      for (const char* layer : {"pellets", "ghosts", "polygons", "agent"}) {
        if (!env.state().has_layer(layer)) continue;
        for (const Sprite& s : env.state().layer(layer).sprites) placed.push_back(&s);
      }
      for (std::size_t i = 0; i < placed.size(); ++i) {
        for (std::size_t j = i + 1; j < placed.size(); ++j) {
          ++pairs;
          contacting += convex_overlap(world(*placed[i]), world(*placed[j]));
        }
      }
    }
  }
  require(v, contacting == 0, fmt::format("{} contacting pairs among disjoint placements", contacting));
  if (v.pass) {
    v.detail = fmt::format("set_minus 0 of 10^4 in hold-out; mixture within {:.2f} sigma; 0 contacts over {} placed "
                           "pairs",
                           worst_z, pairs);
  }
  return v;
}

Verdict builtins() {
  Verdict v;
  for (const auto& name : builtin_names()) {
    Environment env = build(builtin(name), 1);
    const Policy policy = random_policy(1);
    env.reset();
    for (int i = 0; i < 1000; ++i) {
      try {
        env.step(policy(env), i % 10 == 0);
      } catch (const Error& e) {
        require(v, false, fmt::format("{} failed at step {}: {}", name, i, e.what()));
        break;
      }
    }
  }
  Environment rg = build(builtin("red_green"), 2);
  rg.reset();
  int trials = 0, longest = 0, green = 0;
  while (trials < 1000) {
    const TimeStep ts = rg.step(Action{}, false);
    if (ts.kind != StepKind::kLast) continue;
    ++trials;
    longest = std::max(longest, ts.meta.step_index);
    green += ts.reward > 0.0;
    const Sprite& ball = only(rg.state(), "ball");
    const bool touching = convex_overlap(world(ball), world(only(rg.state(), "red"))) ||
                          convex_overlap(world(ball), world(only(rg.state(), "green")));
    require(v, touching, fmt::format("red_green trial {} ended without touching a bar", trials));
  }
  require(v, longest < 500, fmt::format("a red_green trial reached the 500-step cap"));
  if (v.pass) {
    v.detail = fmt::format("5 builtins x 1000 random steps; red_green 1000/1000 trials ended on a bar within {} steps "
                           "(cap 500), {} green",
                           longest, green);
  }
  return v;
}

}  // namespace

int main() {
  criterion("throughput", throughput);
  criterion("navigate_to_goal listing", navigate_listing);
  criterion("physics conservation", conservation);
  criterion("geometry oracles", geometry);
  criterion("determinism and simulation isolation", determinism);
  criterion("renderer", renderer);
  criterion("procedural generation", procgen);
  criterion("builtins", builtins);
  fmt::print("{} of 8 criteria passed\n", 8 - failures);
  return failures;
}
