#include "polyarena/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyarena {

namespace {

constexpr double kSeekGain = 20.0;

std::optional<std::pair<Vec2, Vec2>> agent_and_target(const State& state, const PolicyHint& hint) {
  if (!state.has_layer(hint.agent) || !state.has_layer(hint.target)) return std::nullopt;
  const auto& agents = state.layer(hint.agent).sprites;
  const auto& targets = state.layer(hint.target).sprites;
  if (agents.empty() || targets.empty()) return std::nullopt;
  const Vec2 a = agents.front().position;
  double best = std::numeric_limits<double>::infinity();
  Vec2 t;
  for (const Sprite& s : targets) {
    const double d = (s.position - a).norm();
    if (d < best) {
      best = d;
      t = s.position;
    }
  }
  return std::pair{a, t};
}

}  // namespace

Action random_action(const ActionSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case ActionSpec::Kind::kBox:
    case ActionSpec::Kind::kClick: {
      std::vector<double> v(spec.lo.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(spec.lo[i], spec.hi[i]);
      return v;
    }
    case ActionSpec::Kind::kDiscrete:
      return spec.tokens[static_cast<std::size_t>(rng.uniform() * static_cast<double>(spec.tokens.size())) %
                         spec.tokens.size()];
    case ActionSpec::Kind::kComposite: {
      Action::Named named;
      for (const auto& [name, child] : spec.children) named.emplace_back(name, random_action(child, rng));
      return named;
    }
  }
  return {};
}

Action seek_action(const ActionSpec& spec, const State& state, const PolicyHint& hint) {
  const auto at = agent_and_target(state, hint);
  if (!at) return {};
  const auto [agent, target] = *at;
  const Vec2 d = target - agent;
  switch (spec.kind) {
    case ActionSpec::Kind::kBox: {
      if (spec.space == "set_position") return std::vector<double>{target.x, target.y};
      return std::vector<double>{std::clamp(kSeekGain * d.x, -1.0, 1.0), std::clamp(kSeekGain * d.y, -1.0, 1.0)};
    }
    case ActionSpec::Kind::kClick:
      return std::vector<double>{agent.x, agent.y, std::clamp(0.5 + d.x, 0.0, 1.0), std::clamp(0.5 + d.y, 0.0, 1.0)};
    case ActionSpec::Kind::kDiscrete: {
      if (std::abs(d.x) >= std::abs(d.y)) return d.x > 0 ? "right" : d.x < 0 ? "left" : "none";
      return d.y > 0 ? "up" : d.y < 0 ? "down" : "none";
    }
    case ActionSpec::Kind::kComposite: {
      Action::Named named;
      for (const auto& [name, child] : spec.children) named.emplace_back(name, seek_action(child, state, hint));
      return named;
    }
  }
  return {};
}

Policy random_policy(std::uint64_t seed) {
  return [rng = Rng::stream(seed, "policy")](const Environment& env) mutable {
    return random_action(env.action_spec(), rng);
  };
}

Policy seek_policy(PolicyHint hint) {
  return [hint = std::move(hint)](const Environment& env) { return seek_action(env.action_spec(), env.state(), hint); };
}

}  // namespace polyarena
