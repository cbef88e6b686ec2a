#include "polyarena/bench.hpp"

#include <chrono>

#include <fmt/format.h>

#include "polyarena/errors.hpp"
#include "polyarena/policies.hpp"

namespace polyarena {

BenchResult run_benchmark(const Recipe& recipe, int size, int steps, std::uint64_t seed, int supersample) {
  if (steps < 1) throw InvariantViolation(fmt::format("steps must be >= 1, got {}", steps));
  EnvironmentConfig config = build_config(recipe, seed);
  config.observers.clear();
  config.observers.emplace_back("image", ImageObserver(size, size, supersample));
  Environment env(std::move(config));
  const Policy policy = random_policy(seed);

  BenchResult r;
  r.steps = steps;
  const auto t0 = std::chrono::steady_clock::now();
  env.reset();
  for (int i = 0; i < steps; ++i) r.trials += env.step(policy(env)).kind == StepKind::kLast;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.fps = steps / r.seconds;
  return r;
}

}  // namespace polyarena
