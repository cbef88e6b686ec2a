#include "polyarena/game_rules.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "polyarena/contacts.hpp"
#include "polyarena/errors.hpp"

namespace polyarena {

bool Predicate::operator()(const State& state, Rng& rng) const {
  switch (kind) {
    case Kind::kAlways: return true;
    case Kind::kNever: return false;
    case Kind::kLayerEmpty: return state.layer(layer).sprites.empty();
    case Kind::kCountBelow: return static_cast<int>(state.layer(layer).sprites.size()) < count;
    case Kind::kProbability: return rng.uniform() < probability;
  }
  return false;
}

VanishOnContact::VanishOnContact(std::string predator_layer, std::string prey_layer)
    : predator_(std::move(predator_layer)), prey_(std::move(prey_layer)) {
  if (predator_ == prey_) throw InvariantViolation("predator and prey layers must differ");
}

void VanishOnContact::apply(State& state, RuleContext&) {
  const auto contacts = layer_contacts(state, predator_, prey_);
  if (contacts.empty()) return;
  const auto& prey = state.layer(prey_).sprites;
  std::set<SpriteId> eaten;
  for (const LayerContact& c : contacts) eaten.insert(prey[c.b].id);
  mutate_layer(state, prey_, {}, [&](const Sprite& s) { return eaten.contains(s.id); });
}

ModifyOnContact::ModifyOnContact(std::string layer_a, std::string layer_b, Assignment assignments)
    : layer_a_(std::move(layer_a)), layer_b_(std::move(layer_b)), assignments_(std::move(assignments)) {
  for (const auto& [key, value] : assignments_) {
    if (!is_mutable_field(key)) throw ImmutableField(fmt::format("field '{}' cannot be reassigned in place", key));
  }
}

void ModifyOnContact::apply(State& state, RuleContext&) {
  const auto contacts = layer_contacts(state, layer_a_, layer_b_);
  if (contacts.empty()) return;
  auto& sprites = state.layer(layer_a_).sprites;
  std::vector<bool> hit(sprites.size(), false);
  for (const LayerContact& c : contacts) {
    hit[c.a] = true;
    if (layer_a_ == layer_b_) hit[c.b] = true;
  }
  for (std::size_t i = 0; i < sprites.size(); ++i) {
    if (!hit[i]) continue;
    for (const auto& [key, value] : assignments_) assign_field(sprites[i], key, value);
  }
}

ConditionalCreate::ConditionalCreate(Predicate when, SpriteGenerator factory, std::string layer, int max_count)
    : when_(std::move(when)), factory_(std::move(factory)), layer_(std::move(layer)), max_count_(max_count) {
  if (max_count_ < 0) throw InvariantViolation("max_count must be >= 0");
}

void ConditionalCreate::apply(State& state, RuleContext& ctx) {
  const auto& existing = state.layer(layer_).sprites;
  if (static_cast<int>(existing.size()) >= max_count_) return;
  if (!when_(state, ctx.rng)) return;
  std::vector<Sprite> made;
  try {
    made = generate_layer(factory_, ctx.rng, existing);
  } catch (const PlacementBudgetExceeded&) {
    return;
  }
  const std::size_t room = static_cast<std::size_t>(max_count_) - existing.size();
  if (made.size() > room) made.resize(room);
  for (Sprite& s : made) state.add_sprite(layer_, std::move(s));
}

TimedRule::TimedRule(int start_step, std::optional<int> end_step, Polymorphic<Rule> inner)
    : start_(start_step), end_(end_step), inner_(std::move(inner)) {
  if (!inner_) throw InvariantViolation("timed rule needs an inner rule");
  if (end_ && *end_ < start_) throw InvariantViolation("timed rule ends before it starts");
}

void TimedRule::apply(State& state, RuleContext& ctx) {
  if (ctx.step_index < start_ || (end_ && ctx.step_index >= *end_)) return;
  inner_->apply(state, ctx);
}

RandomDrift::RandomDrift(std::string layer, double speed, double turn_probability)
    : layer_(std::move(layer)), speed_(speed), turn_probability_(turn_probability) {
  if (!(speed_ >= 0.0)) throw InvariantViolation("drift speed must be >= 0");
  if (!(turn_probability_ >= 0.0 && turn_probability_ <= 1.0)) {
    throw InvariantViolation("turn probability must lie in [0, 1]");
  }
}

void RandomDrift::apply(State& state, RuleContext& ctx) {
  for (Sprite& s : state.layer(layer_).sprites) {
    const double v = s.velocity.norm();
    if (v == 0.0 || ctx.rng.uniform() < turn_probability_) {
      const double heading = ctx.rng.uniform(0.0, 2.0 * std::numbers::pi);
      s.velocity = {speed_ * std::cos(heading), speed_ * std::sin(heading)};
    } else {
      s.velocity = (speed_ / v) * s.velocity;
    }
  }
}

PhaseSequence::PhaseSequence(std::vector<Phase> phases) : phases_(std::move(phases)) {
  if (phases_.empty()) throw InvariantViolation("phase sequence needs at least one phase");
  for (const Phase& p : phases_) {
    if (p.duration && *p.duration < 1) {
      throw InvariantViolation(fmt::format("phase '{}' has duration {} < 1", p.name, *p.duration));
    }
  }
}

PhaseSequence::Advance PhaseSequence::advance(const State& state, int completed_step, Rng& rng) {
  Advance out;
  const int next = completed_step + 1;
  const Phase& p = phases_[index_];
  const bool timed_out = p.duration && next >= start_ + *p.duration;
  if (!timed_out && !(p.until && (*p.until)(state, rng))) return out;
  out.transitioned = true;
  if (index_ + 1 == phases_.size()) {
    out.finished = true;
    return out;
  }
  ++index_;
  start_ = next;
  return out;
}

void PhaseSequence::reset() {
  index_ = 0;
  start_ = 0;
  for (Phase& p : phases_) {
    for (auto& r : p.rules) r->reset();
    if (p.task) p.task->reset();
  }
}

}  // namespace polyarena
