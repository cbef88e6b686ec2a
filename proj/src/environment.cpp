#include "polyarena/environment.hpp"

#include <map>

#include <fmt/format.h>

#include "polyarena/errors.hpp"

namespace polyarena {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kFirst: return "FIRST";
    case StepKind::kMid: return "MID";
    case StepKind::kLast: return "LAST";
  }
  return "MID";
}

const Observation& TimeStep::observation(std::string_view name) const {
  for (const auto& [n, o] : observations) {
    if (n == name) return o;
  }
  throw InvariantViolation(fmt::format("no observation named '{}'", name));
}

Environment::Environment(EnvironmentConfig config)
    : config_(std::move(config)),
      init_rng_(Rng::stream(config_.seed, "init")),
      rules_rng_(Rng::stream(config_.seed, "rules")) {
  if (!config_.task) throw InvariantViolation("environment needs a task");
  if (!config_.action_space) throw InvariantViolation("environment needs an action space");
  if (config_.observers.empty()) throw InvariantViolation("environment needs at least one observer");
  for (const auto& [name, obs] : config_.observers) {
    if (!obs) throw InvariantViolation(fmt::format("observer '{}' is empty", name));
  }
}

std::vector<std::pair<std::string, ObservationSpec>> Environment::observation_spec() const {
  std::vector<std::pair<std::string, ObservationSpec>> out;
  for (const auto& [name, obs] : config_.observers) out.emplace_back(name, obs->spec());
  return out;
}

std::optional<std::string> Environment::phase_name() const {
  if (!config_.phases) return std::nullopt;
  return config_.phases->current().name;
}

void Environment::observe_into(TimeStep& ts) {
  ts.observations.reserve(config_.observers.size());
  for (auto& [name, obs] : config_.observers) ts.observations.emplace_back(name, obs->observe(state_));
}

TimeStep Environment::reset() {
  state_ = config_.initializer(init_rng_);
  config_.task->reset();
  for (auto& r : config_.rules) r->reset();
  if (config_.phases) config_.phases->reset();
  step_index_ = 0;
  ++trial_index_;
  awaiting_reset_ = false;
  phase_finish_pending_ = false;

  TimeStep ts;
  ts.kind = StepKind::kFirst;
  ts.meta = {0, trial_index_, phase_name()};
  if (config_.phases) {
    const auto adv = config_.phases->advance(state_, 0, rules_rng_);
    phase_finish_pending_ = adv.finished;
  }
  observe_into(ts);
  return ts;
}

TimeStep Environment::step(const Action& action, bool observe) {
  if (awaiting_reset_) {
    if (!config_.auto_reset) {
      throw SteppedAfterLast(trial_index_ < 0 ? "reset() must be called before step()"
                                              : "trial ended; call reset() before stepping again");
    }
    return reset();
  }
  Phase* phase = config_.phases ? &config_.phases->current() : nullptr;
  const std::optional<std::string> phase_label = phase_name();

  struct Pose {
    Vec2 position;
    double angle;
    Vec2 velocity;
    double angular_velocity;
  };
  std::map<SpriteId, Pose> frozen;
  if (phase) {
    for (const auto& name : phase->frozen_layers) {
      for (const Sprite& s : state_.layer(name).sprites) {
        frozen[s.id] = {s.position, s.angle, s.velocity, s.angular_velocity};
      }
    }
  }

  config_.action_space->apply(action, state_);
  ++step_index_;

  RuleContext ctx{rules_rng_, step_index_};
  for (auto& r : config_.rules) r->apply(state_, ctx);
  if (phase) {
    for (auto& r : phase->rules) r->apply(state_, ctx);
  }

  step_physics(state_, config_.forces, config_.physics);

  if (!frozen.empty()) {
    for (auto& layer : state_.layers()) {
      for (Sprite& s : layer.sprites) {
        const auto it = frozen.find(s.id);
        if (it == frozen.end()) continue;
        s.position = it->second.position;
        s.angle = it->second.angle;
        s.velocity = it->second.velocity;
        s.angular_velocity = it->second.angular_velocity;
      }
    }
  }

  Task& task = phase && phase->task ? *phase->task : *config_.task;
  const TaskVerdict verdict = task.step(state_, step_index_);

  bool finished = phase_finish_pending_;
  phase_finish_pending_ = false;
  if (config_.phases) finished = config_.phases->advance(state_, step_index_, rules_rng_).finished || finished;

  TimeStep ts;
  ts.kind = verdict.reset || finished ? StepKind::kLast : StepKind::kMid;
  ts.reward = verdict.reward;
  ts.meta = {step_index_, trial_index_, phase_label};
  awaiting_reset_ = ts.kind == StepKind::kLast;
  if (observe) observe_into(ts);
  return ts;
}

}  // namespace polyarena
