#include "polyarena/tasks.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "polyarena/contacts.hpp"
#include "polyarena/errors.hpp"

namespace polyarena {

ContactReward::ContactReward(double reward, std::string layer_a, std::string layer_b,
                             std::optional<int> reset_steps_after_contact, bool per_pair)
    : reward_(reward),
      layer_a_(std::move(layer_a)),
      layer_b_(std::move(layer_b)),
      reset_steps_(reset_steps_after_contact),
      per_pair_(per_pair) {
  if (reset_steps_ && *reset_steps_ < 0) throw InvariantViolation("reset_steps_after_contact must be >= 0");
}

TaskVerdict ContactReward::step(const State& state, int /*step_index*/) {
  TaskVerdict v;
  if (countdown_) {
    // Already past the rewarded contact; the layers must still exist.
    state.layer(layer_a_);
    state.layer(layer_b_);
    --*countdown_;
  }

  bool contacted = false;
  if (per_pair_) {
    const auto& sa = state.layer(layer_a_).sprites;
    const auto& sb = state.layer(layer_b_).sprites;
    for (const LayerContact& c : layer_contacts(state, layer_a_, layer_b_)) {
      if (rewarded_pairs_.emplace(sa[c.a].id, sb[c.b].id).second) {
        v.reward += reward_;
        contacted = true;
      }
    }
  } else if (!rewarded_ && any_layer_contact(state, layer_a_, layer_b_)) {
    rewarded_ = true;
    v.reward = reward_;
    contacted = true;
  }
  if (contacted && !countdown_ && reset_steps_) countdown_ = *reset_steps_;

  if (countdown_) {
    if (*countdown_ <= 0) {
      v.reset = true;
      v.reset_countdown = 0;
    } else {
      v.reset_countdown = *countdown_;
    }
  }
  return v;
}

void ContactReward::reset() {
  rewarded_ = false;
  rewarded_pairs_.clear();
  countdown_.reset();
}

TimeoutTask::TimeoutTask(int max_steps) : max_steps_(max_steps) {
  if (max_steps_ < 1) throw InvariantViolation(fmt::format("timeout needs max_steps >= 1, got {}", max_steps_));
}

TaskVerdict TimeoutTask::step(const State& /*state*/, int step_index) {
  TaskVerdict v;
  v.reset = step_index >= max_steps_;
  v.reset_countdown = std::max(0, max_steps_ - step_index);
  return v;
}

AvoidContactPenalty::AvoidContactPenalty(double penalty, std::string layer_a, std::string layer_b,
                                         bool terminate_on_contact)
    : penalty_(penalty), layer_a_(std::move(layer_a)), layer_b_(std::move(layer_b)), terminate_(terminate_on_contact) {}

TaskVerdict AvoidContactPenalty::step(const State& state, int /*step_index*/) {
  TaskVerdict v;
  if (any_layer_contact(state, layer_a_, layer_b_)) {
    v.reward = penalty_;
    v.reset = terminate_;
    if (terminate_) v.reset_countdown = 0;
  }
  return v;
}

CompositeTask::CompositeTask(std::vector<Polymorphic<Task>> tasks) : tasks_(std::move(tasks)) {
  if (tasks_.empty()) throw InvariantViolation("composite task needs at least one sub-task");
}

TaskVerdict CompositeTask::step(const State& state, int step_index) {
  TaskVerdict v;
  for (auto& t : tasks_) {
    const TaskVerdict s = t->step(state, step_index);
    v.reward += s.reward;
    v.reset = v.reset || s.reset;
    if (s.reset_countdown && (!v.reset_countdown || *s.reset_countdown < *v.reset_countdown)) {
      v.reset_countdown = s.reset_countdown;
    }
  }
  return v;
}

void CompositeTask::reset() {
  for (auto& t : tasks_) t->reset();
}

}  // namespace polyarena
