#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyarena/action_spaces.hpp"
#include "polyarena/distributions.hpp"
#include "polyarena/game_rules.hpp"
#include "polyarena/observers.hpp"
#include "polyarena/physics.hpp"
#include "polyarena/rng.hpp"
#include "polyarena/tasks.hpp"

namespace polyarena {

enum class StepKind { kFirst, kMid, kLast };

std::string_view to_string(StepKind kind);

struct StepMeta {
  int step_index = 0;   ///< 0 for the reset timestep, then 1, 2, ...
  int trial_index = 0;  ///< 0 for the first trial after construction
  std::optional<std::string> phase;
  friend bool operator==(const StepMeta&, const StepMeta&) = default;
};

struct TimeStep {
  StepKind kind = StepKind::kFirst;
  std::vector<std::pair<std::string, Observation>> observations;  ///< declaration order
  double reward = 0.0;
  StepMeta meta;

  /// Throws InvariantViolation when no observer has that name.
  const Observation& observation(std::string_view name) const;
  friend bool operator==(const TimeStep&, const TimeStep&) = default;
};

struct EnvironmentConfig {
  StateInitializer initializer;
  std::vector<Polymorphic<Force>> forces;
  PhysicsConfig physics;
  Polymorphic<Task> task;
  Polymorphic<ActionSpace> action_space;
  std::vector<std::pair<std::string, Polymorphic<Observer>>> observers;
  std::vector<Polymorphic<Rule>> rules;
  std::optional<PhaseSequence> phases;
  std::uint64_t seed = 0;
  /// Stepping after LAST starts the next trial instead of throwing.
  bool auto_reset = true;
};

/// The step loop. Within step(): phase bookkeeping, action, rules, physics,
/// task, phase advance, observers. Copying an environment yields an
/// independent simulator with identical future behavior.
class Environment {
 public:
  /// Throws InvariantViolation for a missing task, action space or observer.
  explicit Environment(EnvironmentConfig config);

  TimeStep reset();
  /// With `observe` false the observation list is left empty, which saves the
  /// render cost for lookahead and streaming. Throws ActionOutOfSpec, and
  /// SteppedAfterLast when the trial ended and auto-reset is off.
  TimeStep step(const Action& action, bool observe = true);

  Environment clone_for_simulation() const { return *this; }

  const State& state() const noexcept { return state_; }
  /// Direct access for scripted scenarios and tests.
  State& mutable_state() noexcept { return state_; }

  ActionSpec action_spec() const { return config_.action_space->spec(); }
  std::vector<std::pair<std::string, ObservationSpec>> observation_spec() const;
  bool awaiting_reset() const noexcept { return awaiting_reset_; }
  int step_index() const noexcept { return step_index_; }
  int trial_index() const noexcept { return trial_index_; }
  std::optional<std::string> phase_name() const;
  const EnvironmentConfig& config() const noexcept { return config_; }

 private:
  void observe_into(TimeStep& ts);

  EnvironmentConfig config_;
  State state_;
  Rng init_rng_;
  Rng rules_rng_;
  int step_index_ = 0;
  int trial_index_ = -1;
  bool awaiting_reset_ = true;
  bool phase_finish_pending_ = false;
};

}  // namespace polyarena
