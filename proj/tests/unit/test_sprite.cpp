#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "polyarena/errors.hpp"
#include "polyarena/sprite.hpp"

using namespace polyarena;
using doctest::Approx;

namespace {

Sprite goal_sprite() {
  SpriteFactors f;
  f.x = 0.1;
  f.y = 0.1;
  f.shape = "square";
  f.scale = 0.1;
  f.c0 = 255;
  return make_sprite(f);
}

Sprite agent_sprite() {
  SpriteFactors f;
  f.x = 0.5;
  f.y = 0.5;
  f.shape = "circle";
  f.scale = 0.1;
  f.c1 = 255;
  return make_sprite(f);
}

}  // namespace

TEST_CASE("make_sprite fills documented defaults") {
  const Sprite s = make_sprite({});
  CHECK(s.shape_name == "square");
  CHECK(s.scale == 0.1);
  CHECK(s.position == Vec2{0.5, 0.5});
  CHECK(s.velocity == Vec2{});
  CHECK(s.angular_velocity == 0.0);
  CHECK(s.mass == 1.0);
  CHECK(s.color == std::array<int, 3>{0, 0, 0});
  CHECK(s.opacity == 255);
  CHECK(s.id == 0);
}

TEST_CASE("make_sprite builds the listing sprites") {
  const Sprite goal = goal_sprite();
  CHECK(goal.color == std::array<int, 3>{255, 0, 0});
  CHECK(goal.position == Vec2{0.1, 0.1});
  const Sprite agent = agent_sprite();
  CHECK(agent.color == std::array<int, 3>{0, 255, 0});
  CHECK(agent.shape->size() == 24);
  CHECK(make_sprite(SpriteFactors{}) == make_sprite(SpriteFactors{}));
}

TEST_CASE("make_sprite rejects invalid factors") {
  SpriteFactors bad_shape;
  bad_shape.shape = "star";
  CHECK_THROWS_AS(make_sprite(bad_shape), UnknownShapeName);

  SpriteFactors bad_scale;
  bad_scale.scale = 0.0;
  CHECK_THROWS_WITH_AS(make_sprite(bad_scale), doctest::Contains("scale"), InvariantViolation);

  SpriteFactors bad_color;
  bad_color.c2 = 300;
  CHECK_THROWS_WITH_AS(make_sprite(bad_color), doctest::Contains("c2"), InvariantViolation);

  SpriteFactors bad_mass;
  bad_mass.mass = -1;
  CHECK_THROWS_WITH_AS(make_sprite(bad_mass), doctest::Contains("mass"), InvariantViolation);

  CHECK_THROWS_AS(SpriteFactors::from_assignment({{"colour", 1.0}}), InvariantViolation);
}

TEST_CASE("factors from assignments") {
  const auto f = SpriteFactors::from_assignment(
      {{"x", 0.2}, {"shape", std::string("triangle")}, {"meta.is_ghost", 1.0}, {"meta.tag", std::string("a")}});
  const Sprite s = make_sprite(f);
  CHECK(s.position.x == 0.2);
  CHECK(s.shape_name == "triangle");
  CHECK(std::get<double>(s.metadata.at("is_ghost")) == 1.0);
  CHECK(std::get<std::string>(s.metadata.at("tag")) == "a");

  const auto wall = make_sprite(SpriteFactors::from_assignment(
      {{"vertices", std::vector<Vec2>{{0, 0}, {0.1, 0}, {0.1, 1}, {0, 1}}}, {"scale", 1.0}, {"mass", kInfiniteMass}}));
  CHECK(wall.shape_name.empty());
  CHECK(wall.inverse_mass() == 0.0);
  CHECK(wall.inverse_inertia() == 0.0);
}

TEST_CASE("sprite_world_vertices") {
  const Sprite d = make_sprite({});
  const auto v = sprite_world_vertices(d);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i].x == Approx(d.shape->vertices()[i].x * 0.1 + 0.5));
    CHECK(v[i].y == Approx(d.shape->vertices()[i].y * 0.1 + 0.5));
  }
  const Bounds b = bounds_of(sprite_world_vertices(goal_sprite()));
  CHECK(b.lo.x == Approx(0.05));
  CHECK(b.hi.y == Approx(0.15));

  Sprite turned = agent_sprite();
  const auto before = sprite_world_vertices(turned);
  turned.angle += 2.0 * std::numbers::pi;
  const auto after = sprite_world_vertices(turned);
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(std::abs(before[i].x - after[i].x) < 1e-9);
    CHECK(std::abs(before[i].y - after[i].y) < 1e-9);
  }
}

TEST_CASE("sprite_contains") {
  const Sprite goal = goal_sprite();
  CHECK(sprite_contains(goal, goal.position));
  CHECK_FALSE(sprite_contains(goal, {1.1, 0.1}));
  CHECK(sprite_contains(goal, {0.149, 0.149}));
  CHECK_FALSE(sprite_contains(goal, {0.151, 0.149}));
}

TEST_CASE("State layers and z-order") {
  State empty;
  CHECK(z_order(empty).empty());

  State s;
  s.add_layer("goal");
  s.add_layer("agent");
  CHECK_THROWS_AS(s.add_layer("goal"), InvariantViolation);
  s.add_sprite("agent", agent_sprite());
  s.add_sprite("goal", goal_sprite());
  const auto order = z_order(s);
  REQUIRE(order.size() == 2);
  CHECK(order[0]->color[0] == 255);
  CHECK(order[1]->color[1] == 255);
  // Ids increase in creation order.
  CHECK(order[1]->id == 1);
  CHECK(order[0]->id == 2);
  CHECK_THROWS_AS(s.add_sprite("missing", make_sprite({})), UnknownLayer);

  Sprite broken = make_sprite({});
  broken.velocity.x = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(s.add_sprite("goal", broken), InvariantViolation);

  State one;
  one.add_layer("l");
  for (int i = 0; i < 3; ++i) one.add_sprite("l", make_sprite({}));
  const auto seq = z_order(one);
  CHECK(seq[0]->id == 1);
  CHECK(seq[2]->id == 3);
}

TEST_CASE("mutate_layer removes then adds, preserving order") {
  State s;
  s.add_layer("pellets");
  for (int i = 0; i < 5; ++i) {
    SpriteFactors f;
    f.x = 0.1 + 0.2 * i;
    f.y = 0.5;
    s.add_sprite("pellets", make_sprite(f));
  }
  const State before = s;
  mutate_layer(s, "pellets", {}, [](const Sprite&) { return false; });
  CHECK(s == before);

  State empty_layer;
  empty_layer.add_layer("l");
  mutate_layer(empty_layer, "l", {make_sprite({})});
  CHECK(empty_layer.layer("l").sprites.size() == 1);

  // Agent covering pellets at x = 0.3 and 0.5; count contacts independently.
  SpriteFactors af;
  af.x = 0.4;
  af.y = 0.5;
  af.scale = 0.25;
  const Sprite agent = make_sprite(af);
  const auto agent_verts = sprite_world_vertices(agent);
  int contacted = 0;
  for (const Sprite& p : s.layer("pellets").sprites) {
    if (detect_contact(agent_verts, sprite_world_vertices(p))) ++contacted;
  }
  CHECK(contacted == 2);
  mutate_layer(s, "pellets", {}, [&](const Sprite& p) {
    return detect_contact(agent_verts, sprite_world_vertices(p)).has_value();
  });
  const auto& left = s.layer("pellets").sprites;
  REQUIRE(left.size() == 3);
  CHECK(left[0].id == 1);
  CHECK(left[1].id == 4);
  CHECK(left[2].id == 5);

  CHECK_THROWS_AS(mutate_layer(s, "nope", {}), UnknownLayer);
}

TEST_CASE("field assignment") {
  Sprite s = make_sprite({});
  assign_field(s, "c1", 255.0);
  CHECK(s.color[1] == 255);
  assign_field(s, "meta.flag", std::string("on"));
  CHECK(std::get<std::string>(s.metadata.at("flag")) == "on");
  CHECK_THROWS_AS(assign_field(s, "shape", std::string("circle")), ImmutableField);
  CHECK_THROWS_AS(assign_field(s, "opacity", 256.0), InvariantViolation);
  CHECK(numeric_field(s, "c1") == 255.0);
}
