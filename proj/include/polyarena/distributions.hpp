#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "polyarena/rng.hpp"
#include "polyarena/sprite.hpp"

namespace polyarena {

/// Immutable compositional distribution over factor assignments. Copies share
/// the same immutable tree.
class Distribution {
 public:
  struct Node;

  /// Number of base draws SetMinus attempts before giving up.
  static constexpr int kSetMinusBudget = 10'000;

  static Distribution uniform(std::string key, double lo, double hi);
  /// Empty weights mean equal weights.
  static Distribution discrete(std::string key, std::vector<FactorValue> values,
                               std::vector<double> weights = {});
  /// Shorthand for a product of single-atom Discretes.
  static Distribution fixed(const Assignment& values);
  static Distribution product(std::vector<Distribution> parts);
  static Distribution mixture(std::vector<Distribution> components, std::vector<double> weights = {});
  static Distribution set_minus(Distribution base, Distribution hold_out);

  const Node& node() const noexcept { return *node_; }
  /// Keys this distribution assigns.
  std::set<std::string> keys() const;

 private:
  explicit Distribution(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace dist {

struct Uniform {
  std::string key;
  double lo = 0.0;
  double hi = 1.0;
};

struct Discrete {
  std::string key;
  std::vector<FactorValue> values;
  std::vector<double> weights;  ///< normalized on construction
};

struct Product {
  std::vector<Distribution> parts;
};

struct Mixture {
  std::vector<Distribution> components;
  std::vector<double> weights;  ///< normalized on construction
};

/// Rejection-samples `base` until the draw falls outside `hold_out`.
struct SetMinus {
  Distribution base;
  Distribution hold_out;
};

}  // namespace dist

struct Distribution::Node
    : std::variant<dist::Uniform, dist::Discrete, dist::Product, dist::Mixture, dist::SetMinus> {
  using variant::variant;
};

/// Draws one assignment. Throws RejectionBudgetExceeded from SetMinus.
Assignment sample(const Distribution& dist, Rng& rng);

/// Support membership. Throws KeyMissing if the assignment lacks one of the
/// distribution's keys.
bool membership(const Distribution& dist, const Assignment& assignment);

/// Draws a sprite count plus per-sprite factors, optionally rejecting overlaps.
struct SpriteGenerator {
  std::variant<int, Distribution> count = 1;  ///< Distribution must assign "count"
  Distribution factors = Distribution::product({});
  bool disjoint = false;
  int max_rejections = 100;
};

/// Throws PlacementBudgetExceeded when a disjoint placement cannot be found.
/// `avoid` lists sprites already placed elsewhere that disjoint placement must
/// also keep clear of.
std::vector<Sprite> generate_layer(const SpriteGenerator& gen, Rng& rng,
                                   std::span<const Sprite> avoid = {});

/// Layer-by-layer initial state recipe.
struct LayerInit {
  std::string name;
  std::vector<SpriteGenerator> generators;
  /// Earlier layers whose sprites disjoint generators must also avoid.
  std::vector<std::string> avoid_layers;
};

struct StateInitializer {
  std::vector<LayerInit> layers;
  State operator()(Rng& rng) const;
};

}  // namespace polyarena
