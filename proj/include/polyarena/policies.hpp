#pragma once

#include <functional>
#include <optional>

#include "polyarena/environment.hpp"
#include "polyarena/recipes.hpp"
#include "polyarena/rng.hpp"

namespace polyarena {

/// Chooses the next action from the environment's current state.
using Policy = std::function<Action(const Environment&)>;

/// Uniform over the spec: boxes componentwise, discrete tokens equally likely,
/// composites recursively.
Action random_action(const ActionSpec& spec, Rng& rng);

/// Steers the first sprite of `hint.agent` toward the nearest sprite of
/// `hint.target`, translated into whatever the action spec accepts.
Action seek_action(const ActionSpec& spec, const State& state, const PolicyHint& hint);

Policy random_policy(std::uint64_t seed);
/// Falls back to the no-op action while either layer is empty.
Policy seek_policy(PolicyHint hint);

}  // namespace polyarena
