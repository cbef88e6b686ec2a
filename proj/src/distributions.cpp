#include "polyarena/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyarena/errors.hpp"

namespace polyarena {
namespace {

std::vector<double> normalized(std::vector<double> weights, std::size_t n, const char* what) {
  if (weights.empty()) weights.assign(n, 1.0);
  if (weights.size() != n) throw InvariantViolation(std::string(what) + ": weight count mismatch");
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvariantViolation(std::string(what) + ": weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw InvariantViolation(std::string(what) + ": weights sum to zero");
  for (double& w : weights) w /= total;
  return weights;
}

template <class T>
const T* as(const Distribution& d) {
  return std::get_if<T>(static_cast<const Distribution::Node::variant*>(&d.node()));
}

}  // namespace

Distribution Distribution::uniform(std::string key, double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw InvariantViolation("Uniform '" + key + "': need finite lo <= hi");
  }
  return Distribution(std::make_shared<const Node>(dist::Uniform{std::move(key), lo, hi}));
}

Distribution Distribution::discrete(std::string key, std::vector<FactorValue> values, std::vector<double> weights) {
  if (values.empty()) throw InvariantViolation("Discrete '" + key + "': no values");
  weights = normalized(std::move(weights), values.size(), "Discrete");
  return Distribution(std::make_shared<const Node>(dist::Discrete{std::move(key), std::move(values), std::move(weights)}));
}

Distribution Distribution::fixed(const Assignment& values) {
  std::vector<Distribution> parts;
  for (const auto& [key, value] : values) parts.push_back(discrete(key, {value}));
  return product(std::move(parts));
}

Distribution Distribution::product(std::vector<Distribution> parts) {
  std::set<std::string> seen;
  for (const Distribution& p : parts) {
    for (const std::string& k : p.keys()) {
      if (!seen.insert(k).second) throw InvariantViolation("Product: key '" + k + "' assigned twice");
    }
  }
  return Distribution(std::make_shared<const Node>(dist::Product{std::move(parts)}));
}

Distribution Distribution::mixture(std::vector<Distribution> components, std::vector<double> weights) {
  if (components.empty()) throw InvariantViolation("Mixture: no components");
  weights = normalized(std::move(weights), components.size(), "Mixture");
  return Distribution(std::make_shared<const Node>(dist::Mixture{std::move(components), std::move(weights)}));
}

Distribution Distribution::set_minus(Distribution base, Distribution hold_out) {
  const auto base_keys = base.keys();
  for (const std::string& k : hold_out.keys()) {
    if (!base_keys.contains(k)) throw InvariantViolation("SetMinus: hold-out key '" + k + "' not in base");
  }
  return Distribution(std::make_shared<const Node>(dist::SetMinus{std::move(base), std::move(hold_out)}));
}

std::set<std::string> Distribution::keys() const {
  if (const auto* u = as<dist::Uniform>(*this)) return {u->key};
  if (const auto* d = as<dist::Discrete>(*this)) return {d->key};
  std::set<std::string> out;
  if (const auto* p = as<dist::Product>(*this)) {
    for (const auto& part : p->parts) out.merge(part.keys());
  } else if (const auto* m = as<dist::Mixture>(*this)) {
    for (const auto& c : m->components) out.merge(c.keys());
  } else if (const auto* s = as<dist::SetMinus>(*this)) {
    out = s->base.keys();
  }
  return out;
}

Assignment sample(const Distribution& d, Rng& rng) {
  if (const auto* u = as<dist::Uniform>(d)) return {{u->key, rng.uniform(u->lo, u->hi)}};
  if (const auto* di = as<dist::Discrete>(d)) return {{di->key, di->values[rng.weighted(di->weights)]}};
  if (const auto* p = as<dist::Product>(d)) {
    Assignment out;
    for (const auto& part : p->parts) out.merge(sample(part, rng));
    return out;
  }
  if (const auto* m = as<dist::Mixture>(d)) return sample(m->components[rng.weighted(m->weights)], rng);
  const auto& s = *as<dist::SetMinus>(d);
  for (int attempt = 0; attempt < Distribution::kSetMinusBudget; ++attempt) {
    Assignment draw = sample(s.base, rng);
    if (!membership(s.hold_out, draw)) return draw;
  }
  throw RejectionBudgetExceeded("SetMinus: every draw fell inside the hold-out set");
}

namespace {

const FactorValue& lookup(const Assignment& a, const std::string& key) {
  const auto it = a.find(key);
  if (it == a.end()) throw KeyMissing("assignment lacks key '" + key + "'");
  return it->second;
}

bool covers(const Assignment& a, const std::set<std::string>& keys) {
  return std::all_of(keys.begin(), keys.end(), [&](const std::string& k) { return a.contains(k); });
}

}  // namespace

bool membership(const Distribution& d, const Assignment& a) {
  if (const auto* u = as<dist::Uniform>(d)) {
    const FactorValue& v = lookup(a, u->key);
    const double* x = std::get_if<double>(&v);
    return x && *x >= u->lo && *x <= u->hi;
  }
  if (const auto* di = as<dist::Discrete>(d)) {
    const FactorValue& v = lookup(a, di->key);
    for (std::size_t i = 0; i < di->values.size(); ++i) {
      if (di->weights[i] > 0.0 && di->values[i] == v) return true;
    }
    return false;
  }
  if (const auto* p = as<dist::Product>(d)) {
    return std::all_of(p->parts.begin(), p->parts.end(), [&](const Distribution& part) { return membership(part, a); });
  }
  if (const auto* m = as<dist::Mixture>(d)) {
    bool any_covered = false;
    for (std::size_t i = 0; i < m->components.size(); ++i) {
      const Distribution& c = m->components[i];
      if (!covers(a, c.keys())) continue;
      any_covered = true;
      if (m->weights[i] > 0.0 && membership(c, a)) return true;
    }
    if (!any_covered) throw KeyMissing("assignment covers no mixture component");
    return false;
  }
  const auto& s = *as<dist::SetMinus>(d);
  return membership(s.base, a) && !membership(s.hold_out, a);
}

std::vector<Sprite> generate_layer(const SpriteGenerator& gen, Rng& rng, std::span<const Sprite> avoid) {
  if (gen.max_rejections < 1) throw InvariantViolation("max_rejections must be >= 1");
  int count = 0;
  if (const int* fixed = std::get_if<int>(&gen.count)) {
    count = *fixed;
  } else {
    const Assignment a = sample(std::get<Distribution>(gen.count), rng);
    const double* n = std::get_if<double>(&lookup(a, "count"));
    if (!n) throw InvariantViolation("count distribution must produce a number");
    count = static_cast<int>(std::lround(*n));
  }
  if (count < 0) throw InvariantViolation("sprite count must be >= 0");

  std::vector<Sprite> placed;
  placed.reserve(static_cast<std::size_t>(count));
  std::vector<std::vector<Vec2>> occupied;
  if (gen.disjoint) {
    for (const Sprite& s : avoid) occupied.push_back(sprite_world_vertices(s));
  }

  for (int i = 0; i < count; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= gen.max_rejections) {
        throw PlacementBudgetExceeded("could not place sprite " + std::to_string(i) + " without overlap after " +
                                      std::to_string(gen.max_rejections) + " draws");
      }
      Sprite s = make_sprite(SpriteFactors::from_assignment(sample(gen.factors, rng)));
      if (gen.disjoint) {
        std::vector<Vec2> verts = sprite_world_vertices(s);
        const bool clash = std::any_of(occupied.begin(), occupied.end(),
                                       [&](const auto& other) { return detect_contact(verts, other).has_value(); });
        if (clash) continue;
        occupied.push_back(std::move(verts));
      }
      placed.push_back(std::move(s));
      break;
    }
  }
  return placed;
}

State StateInitializer::operator()(Rng& rng) const {
  State state;
  for (const LayerInit& layer : layers) {
    state.add_layer(layer.name);
    std::vector<Sprite> avoid;
    for (const std::string& other : layer.avoid_layers) {
      const auto& sprites = state.layer(other).sprites;
      avoid.insert(avoid.end(), sprites.begin(), sprites.end());
    }
    for (const SpriteGenerator& gen : layer.generators) {
      const auto& current = state.layer(layer.name).sprites;
      std::vector<Sprite> keep_clear = avoid;
      keep_clear.insert(keep_clear.end(), current.begin(), current.end());
      for (Sprite& s : generate_layer(gen, rng, keep_clear)) state.add_sprite(layer.name, std::move(s));
    }
  }
  return state;
}

}  // namespace polyarena
