#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyarena/polymorphic.hpp"
#include "polyarena/sprite.hpp"

namespace polyarena {

struct TaskVerdict {
  double reward = 0.0;
  bool reset = false;
  std::optional<int> reset_countdown;  ///< steps left before a pending reset

  friend bool operator==(const TaskVerdict&, const TaskVerdict&) = default;
};

/// Reward and termination logic. Tasks read the state but never modify it;
/// per-trial memory lives in the task object and is cleared by reset().
class Task {
 public:
  virtual ~Task() = default;
  /// Evaluated once per step after physics. `step_index` counts steps since
  /// the trial began, so the first step() of a trial sees 1.
  virtual TaskVerdict step(const State& state, int step_index) = 0;
  virtual void reset() {}
  virtual std::unique_ptr<Task> clone() const = 0;
};

/// Rewards the first contact between layers A and B in a trial, then resets
/// `reset_steps_after_contact` steps later (never, when unset). In per-pair
/// mode every newly contacting sprite pair is rewarded once.
class ContactReward final : public Task {
 public:
  ContactReward(double reward, std::string layer_a, std::string layer_b,
                std::optional<int> reset_steps_after_contact = std::nullopt, bool per_pair = false);
  TaskVerdict step(const State& state, int step_index) override;
  void reset() override;
  std::unique_ptr<Task> clone() const override { return std::make_unique<ContactReward>(*this); }

 private:
  double reward_;
  std::string layer_a_, layer_b_;
  std::optional<int> reset_steps_;
  bool per_pair_;

  bool rewarded_ = false;
  std::set<std::pair<SpriteId, SpriteId>> rewarded_pairs_;
  std::optional<int> countdown_;
};

/// Ends the trial at step `max_steps`.
class TimeoutTask final : public Task {
 public:
  explicit TimeoutTask(int max_steps);
  TaskVerdict step(const State& state, int step_index) override;
  std::unique_ptr<Task> clone() const override { return std::make_unique<TimeoutTask>(*this); }

 private:
  int max_steps_;
};

/// A single (negative) penalty per step while any A-B pair is in contact.
class AvoidContactPenalty final : public Task {
 public:
  AvoidContactPenalty(double penalty, std::string layer_a, std::string layer_b, bool terminate_on_contact);
  TaskVerdict step(const State& state, int step_index) override;
  std::unique_ptr<Task> clone() const override { return std::make_unique<AvoidContactPenalty>(*this); }

 private:
  double penalty_;
  std::string layer_a_, layer_b_;
  bool terminate_;
};

/// Sum of rewards; resets when any sub-task does; the shortest pending countdown.
class CompositeTask final : public Task {
 public:
  explicit CompositeTask(std::vector<Polymorphic<Task>> tasks);
  TaskVerdict step(const State& state, int step_index) override;
  void reset() override;
  std::unique_ptr<Task> clone() const override { return std::make_unique<CompositeTask>(*this); }

 private:
  std::vector<Polymorphic<Task>> tasks_;
};

}  // namespace polyarena
