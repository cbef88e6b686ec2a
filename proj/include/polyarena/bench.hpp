#pragma once

#include <cstdint>

#include "polyarena/recipes.hpp"

namespace polyarena {

struct BenchResult {
  int steps = 0;
  double seconds = 0.0;
  double fps = 0.0;
  int trials = 0;  ///< trials completed during the run
};

/// Steps the recipe with a random policy, rendering a size x size image every
/// step, and times the loop. The recipe's own observers are replaced.
BenchResult run_benchmark(const Recipe& recipe, int size, int steps, std::uint64_t seed = 0, int supersample = 1);

}  // namespace polyarena
