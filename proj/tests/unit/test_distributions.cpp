#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyarena/distributions.hpp"
#include "polyarena/errors.hpp"

using namespace polyarena;

namespace {

double num(const Assignment& a, const std::string& k) { return std::get<double>(a.at(k)); }

}  // namespace

TEST_CASE("sample examples") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(num(sample(Distribution::uniform("x", 0, 0), rng), "x") == 0.0);
    CHECK(std::get<std::string>(sample(Distribution::discrete("shape", {std::string("square")}, {1}), rng).at("shape")) ==
          "square");
  }
  const auto colors = Distribution::discrete("c0", {0.0, 255.0}, {0.5, 0.5});
  const auto no_red = Distribution::set_minus(colors, Distribution::discrete("c0", {255.0}));
  for (int i = 0; i < 1000; ++i) CHECK(num(sample(no_red, rng), "c0") == 0.0);
}

TEST_CASE("construction validates weights and keys") {
  CHECK_THROWS_AS(Distribution::discrete("x", {1.0, 2.0}, {1.0, -1.0}), InvariantViolation);
  CHECK_THROWS_AS(Distribution::discrete("x", {1.0, 2.0}, {1.0}), InvariantViolation);
  CHECK_THROWS_AS(Distribution::product({Distribution::uniform("x", 0, 1), Distribution::uniform("x", 0, 1)}),
                  InvariantViolation);
  CHECK_THROWS_AS(Distribution::uniform("x", 1, 0), InvariantViolation);
  CHECK_THROWS_AS(Distribution::set_minus(Distribution::uniform("x", 0, 1), Distribution::uniform("y", 0, 1)),
                  InvariantViolation);
  const auto d = Distribution::discrete("x", {1.0, 2.0}, {1.0, 3.0});
  const auto& node = std::get<dist::Discrete>(static_cast<const Distribution::Node::variant&>(d.node()));
  CHECK(node.weights[0] + node.weights[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("membership") {
  const auto u = Distribution::uniform("x", 0, 1);
  CHECK(membership(u, {{"x", 0.5}}));
  CHECK_FALSE(membership(u, {{"x", 1.5}}));
  CHECK_THROWS_AS(membership(u, {{"y", 0.5}}), KeyMissing);

  const auto prod = Distribution::product({u, Distribution::discrete("shape", {std::string("square"), std::string("circle")})});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(membership(prod, sample(prod, rng)));
  CHECK_FALSE(membership(prod, {{"x", 0.5}, {"shape", std::string("triangle")}}));

  const auto mix = Distribution::mixture({Distribution::uniform("x", 0, 1), Distribution::uniform("x", 2, 3)});
  CHECK(membership(mix, {{"x", 2.5}}));
  CHECK_FALSE(membership(mix, {{"x", 1.5}}));
}

TEST_CASE("SetMinus never emits hold-out members") {
  // Continuous hold-out region: the middle third of the square.
  const auto base = Distribution::product({Distribution::uniform("x", 0, 1), Distribution::uniform("y", 0, 1)});
  const auto hold = Distribution::product({Distribution::uniform("x", 1.0 / 3, 2.0 / 3), Distribution::uniform("y", 0, 1)});
  const auto d = Distribution::set_minus(base, hold);
  Rng rng(17);
  int violations = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Assignment a = sample(d, rng);
    const double x = num(a, "x");
    if (x >= 1.0 / 3 && x <= 2.0 / 3) ++violations;
    if (!membership(d, a)) ++violations;
  }
  CHECK(violations == 0);

  const auto impossible = Distribution::set_minus(Distribution::uniform("x", 0, 1), Distribution::uniform("x", -1, 2));
  CHECK_THROWS_AS(sample(impossible, rng), RejectionBudgetExceeded);
}

TEST_CASE("Mixture component frequencies are within 3 sigma of the weights") {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto d = Distribution::mixture(
      {Distribution::discrete("k", {0.0}), Distribution::discrete("k", {1.0}), Distribution::discrete("k", {2.0})}, w);
  Rng rng(23);
  constexpr int kDraws = 10'000;
  std::array<int, 3> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[static_cast<std::size_t>(num(sample(d, rng), "k"))];
  for (std::size_t i = 0; i < 3; ++i) {
    const double sigma = std::sqrt(w[i] * (1 - w[i]) / kDraws);
    CHECK(std::abs(counts[i] / double(kDraws) - w[i]) <= 3 * sigma);
  }
}

TEST_CASE("seed determinism") {
  StateInitializer init;
  SpriteGenerator gen;
  gen.count = 5;
  gen.factors = Distribution::product({Distribution::uniform("x", 0.1, 0.9), Distribution::uniform("y", 0.1, 0.9),
                                       Distribution::uniform("angle", 0, 3),
                                       Distribution::discrete("shape", {std::string("square"), std::string("triangle")})});
  init.layers.push_back({"things", {gen}, {}});
  Rng a(99), b(99), c(100);
  CHECK(init(a) == init(b));
  CHECK_FALSE(init(a) == init(c));
}

TEST_CASE("generate_layer counts") {
  Rng rng(5);
  SpriteGenerator zero;
  zero.count = 0;
  CHECK(generate_layer(zero, rng).empty());

  SpriteGenerator three;
  three.count = 3;
  three.factors = Distribution::uniform("x", 0, 1);
  CHECK(generate_layer(three, rng).size() == 3);

  SpriteGenerator varied;
  varied.count = Distribution::discrete("count", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0});
  constexpr int kTrials = 10'000;
  double total = 0.0;
  for (int i = 0; i < kTrials; ++i) total += static_cast<double>(generate_layer(varied, rng).size());
  // uniform{1..7}: mean 4, variance 4.
  const double sigma_mean = 2.0 / std::sqrt(kTrials);
  CHECK(std::abs(total / kTrials - 4.0) <= 3 * sigma_mean);
}

TEST_CASE("disjoint placement yields no contacting pairs") {
  SpriteGenerator gen;
  gen.count = 8;
  gen.disjoint = true;
  gen.factors = Distribution::product({Distribution::uniform("x", 0.1, 0.9), Distribution::uniform("y", 0.1, 0.9),
                                       Distribution::uniform("angle", 0, 6.28),
                                       Distribution::discrete("shape", {std::string("square"), std::string("pentagon")})});
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sprites = generate_layer(gen, rng);
    for (std::size_t i = 0; i < sprites.size(); ++i) {
      for (std::size_t j = i + 1; j < sprites.size(); ++j) {
        CHECK_FALSE(detect_contact(sprite_world_vertices(sprites[i]), sprite_world_vertices(sprites[j])).has_value());
      }
    }
  }

  SpriteGenerator crowded = gen;
  crowded.count = 3;
  crowded.factors = Distribution::fixed({{"x", 0.5}, {"y", 0.5}});
  crowded.max_rejections = 5;
  CHECK_THROWS_AS(generate_layer(crowded, rng), PlacementBudgetExceeded);
}
