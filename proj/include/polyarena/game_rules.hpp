#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyarena/distributions.hpp"
#include "polyarena/polymorphic.hpp"
#include "polyarena/rng.hpp"
#include "polyarena/sprite.hpp"
#include "polyarena/tasks.hpp"

namespace polyarena {

struct RuleContext {
  Rng& rng;
  int step_index = 0;  ///< index of the step being executed, 1 for a trial's first step
};

/// Non-physical dynamics applied once per step between the action and physics.
class Rule {
 public:
  virtual ~Rule() = default;
  virtual void apply(State& state, RuleContext& ctx) = 0;
  virtual void reset() {}
  virtual std::unique_ptr<Rule> clone() const = 0;
};

/// Condition on the state used by creation rules and phase exits.
struct Predicate {
  enum class Kind { kAlways, kNever, kLayerEmpty, kCountBelow, kProbability };
  Kind kind = Kind::kAlways;
  std::string layer;
  int count = 0;
  double probability = 0.0;

  static Predicate always() { return {}; }
  static Predicate never() { return {Kind::kNever, {}, 0, 0.0}; }
  static Predicate layer_empty(std::string layer) { return {Kind::kLayerEmpty, std::move(layer), 0, 0.0}; }
  static Predicate count_below(std::string layer, int n) { return {Kind::kCountBelow, std::move(layer), n, 0.0}; }
  static Predicate chance(double p) { return {Kind::kProbability, {}, 0, p}; }

  /// Only kProbability draws from the rng.
  bool operator()(const State& state, Rng& rng) const;
};

/// Removes every prey sprite touching a predator sprite.
class VanishOnContact final : public Rule {
 public:
  VanishOnContact(std::string predator_layer, std::string prey_layer);
  void apply(State& state, RuleContext& ctx) override;
  std::unique_ptr<Rule> clone() const override { return std::make_unique<VanishOnContact>(*this); }

 private:
  std::string predator_, prey_;
};

/// Applies field assignments to each layer-A sprite touching a layer-B sprite.
class ModifyOnContact final : public Rule {
 public:
  /// Throws ImmutableField when an assignment targets shape, vertices or id.
  ModifyOnContact(std::string layer_a, std::string layer_b, Assignment assignments);
  void apply(State& state, RuleContext& ctx) override;
  std::unique_ptr<Rule> clone() const override { return std::make_unique<ModifyOnContact>(*this); }

 private:
  std::string layer_a_, layer_b_;
  Assignment assignments_;
};

/// Adds generated sprites to a layer while the predicate holds, never letting
/// the layer grow past max_count. A failed disjoint placement skips the step.
class ConditionalCreate final : public Rule {
 public:
  ConditionalCreate(Predicate when, SpriteGenerator factory, std::string layer, int max_count);
  void apply(State& state, RuleContext& ctx) override;
  std::unique_ptr<Rule> clone() const override { return std::make_unique<ConditionalCreate>(*this); }

 private:
  Predicate when_;
  SpriteGenerator factory_;
  std::string layer_;
  int max_count_;
};

/// Runs the inner rule for steps in [start, end).
class TimedRule final : public Rule {
 public:
  TimedRule(int start_step, std::optional<int> end_step, Polymorphic<Rule> inner);
  void apply(State& state, RuleContext& ctx) override;
  void reset() override { inner_->reset(); }
  std::unique_ptr<Rule> clone() const override { return std::make_unique<TimedRule>(*this); }

 private:
  int start_;
  std::optional<int> end_;
  Polymorphic<Rule> inner_;
};

/// Constant-speed wandering: each sprite keeps moving at `speed` and picks a
/// fresh uniformly random heading with probability `turn_probability` per step.
class RandomDrift final : public Rule {
 public:
  RandomDrift(std::string layer, double speed, double turn_probability);
  void apply(State& state, RuleContext& ctx) override;
  std::unique_ptr<Rule> clone() const override { return std::make_unique<RandomDrift>(*this); }

 private:
  std::string layer_;
  double speed_;
  double turn_probability_;
};

struct Phase {
  std::string name;
  std::optional<int> duration;    ///< steps; unset runs until `until` fires or forever
  std::optional<Predicate> until; ///< checked on the state after each step
  std::vector<Polymorphic<Rule>> rules;
  Polymorphic<Task> task;          ///< replaces the environment task while active
  std::vector<std::string> frozen_layers;
};

/// Ordered trial phases. Timestep 0 (the reset observation) belongs to the
/// first phase, so a phase of duration d covers d consecutive timesteps.
class PhaseSequence {
 public:
  struct Advance {
    bool transitioned = false;
    bool finished = false;  ///< the last phase ended; the trial should reset
  };

  explicit PhaseSequence(std::vector<Phase> phases);

  /// Called after timestep `completed_step` with its final state. Moves to the
  /// next phase when the current one has run its duration or its predicate holds.
  Advance advance(const State& state, int completed_step, Rng& rng);
  void reset();

  Phase& current() { return phases_[index_]; }
  const Phase& current() const { return phases_[index_]; }
  std::size_t index() const noexcept { return index_; }
  std::size_t size() const noexcept { return phases_.size(); }

 private:
  std::vector<Phase> phases_;
  std::size_t index_ = 0;
  int start_ = 0;
};

}  // namespace polyarena
