#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyarena/action_spaces.hpp"
#include "polyarena/errors.hpp"

using namespace polyarena;
using doctest::Approx;

namespace {

State one_sprite(Vec2 pos = {0.5, 0.5}, double mass = 1.0) {
  State s;
  s.add_layer("agent");
  SpriteFactors f;
  f.x = pos.x;
  f.y = pos.y;
  f.mass = mass;
  s.add_sprite("agent", make_sprite(f));
  return s;
}

const Sprite& agent(const State& s) { return s.layer("agent").sprites.at(0); }

}  // namespace

TEST_CASE("joystick law") {
  const State s = one_sprite();
  auto d = joystick_apply({1, 0}, 0.01, "agent", s);
  CHECK(d.at(1).dv.x == Approx(0.01));
  CHECK(d.at(1).dv.y == 0.0);
  CHECK(joystick_apply({0, 0}, 0.01, "agent", s).empty());
  d = joystick_apply({0.5, -0.5}, 0.01, "agent", s);
  CHECK(d.at(1).dv.x == Approx(0.005));
  CHECK(d.at(1).dv.y == Approx(-0.005));
  // Clamped, not rejected.
  CHECK(joystick_apply({7, 0}, 0.01, "agent", s).at(1).dv.x == Approx(0.01));
  CHECK(joystick_apply({1, 0}, 0.01, "agent", one_sprite({0.5, 0.5}, 4.0)).at(1).dv.x == Approx(0.0025));
  CHECK_THROWS_AS(joystick_apply({1, 0}, 0.01, "ghost", s), UnknownLayer);
}

TEST_CASE("joystick is linear in the action") {
  const State s = one_sprite();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const Vec2 sum = joystick_apply(a + b, 0.03, "agent", s).at(1).dv;
    const Vec2 parts = joystick_apply(a, 0.03, "agent", s).at(1).dv + joystick_apply(b, 0.03, "agent", s).at(1).dv;
    CHECK((sum - parts).norm() < 1e-15);
  }
}

TEST_CASE("joystick space applies in place and supports velocity mode") {
  State s = one_sprite();
  Joystick(0.01, "agent").apply(std::vector<double>{1, 0}, s);
  CHECK(agent(s).velocity.x == Approx(0.01));
  Joystick(0.01, "agent").apply(Action{}, s);
  CHECK(agent(s).velocity.x == Approx(0.01));
  CHECK_THROWS_AS(Joystick(0.01, "agent").apply(std::vector<double>{1}, s), ActionOutOfSpec);
  CHECK_THROWS_AS(Joystick(0.01, "agent").apply("up", s), ActionOutOfSpec);

  State paddle = one_sprite({0.5, 0.1}, kInfiniteMass);
  const Joystick slide(0.02, "agent", Joystick::Mode::kVelocity, {true, false});
  slide.apply(std::vector<double>{-1, 1}, paddle);
  CHECK(agent(paddle).velocity == Vec2{-0.02, 0.0});
  slide.apply(Action{}, paddle);
  CHECK(agent(paddle).velocity == Vec2{});
}

TEST_CASE("grid moves") {
  State s = one_sprite();
  const State start = s;
  grid_apply(GridMove::kNone, 0.05, "agent", s);
  CHECK(s == start);
  grid_apply(GridMove::kRight, 0.05, "agent", s);
  CHECK(agent(s).position.x == Approx(0.55));
  CHECK(agent(s).position.y == 0.5);
  grid_apply(GridMove::kLeft, 0.05, "agent", s);
  grid_apply(GridMove::kUp, 0.05, "agent", s);
  grid_apply(GridMove::kDown, 0.05, "agent", s);
  CHECK(agent(s).position.x == Approx(0.5));
  CHECK(agent(s).position.y == Approx(0.5));

  State a = start, b = start;
  grid_apply(GridMove::kUp, 0.05, "agent", a);
  grid_apply(GridMove::kRight, 0.05, "agent", a);
  grid_apply(GridMove::kRight, 0.05, "agent", b);
  grid_apply(GridMove::kUp, 0.05, "agent", b);
  CHECK(agent(a).position == agent(b).position);

  CHECK_THROWS_AS(Grid(0.05, "agent").apply("sideways", s), ActionOutOfSpec);
  CHECK(parse_grid_move("down") == GridMove::kDown);
}

TEST_CASE("set_position") {
  State s = one_sprite({0.2, 0.3});
  s.layer("agent").sprites[0].velocity = {0.01, 0.02};
  set_position_apply({0.5, 0.5}, "agent", s);
  CHECK(agent(s).position == Vec2{0.5, 0.5});
  CHECK(agent(s).velocity == Vec2{0.01, 0.02});
  const State once = s;
  set_position_apply({0.5, 0.5}, "agent", s);
  CHECK(s == once);
  set_position_apply({1, 1}, "agent", s);
  CHECK(agent(s).position == Vec2{1, 1});
  set_position_apply({1.5, -2}, "agent", s);
  CHECK(agent(s).position == Vec2{1, 0});
}

TEST_CASE("click") {
  const State s = one_sprite({0.5, 0.5});
  const double miss[4] = {0.9, 0.9, 1.0, 1.0};
  CHECK(click_apply(miss, "agent", 0.02, s).empty());
  const double centred[4] = {0.5, 0.5, 0.5, 0.5};
  CHECK(click_apply(centred, "agent", 0.02, s).empty());
  const double push[4] = {0.5, 0.5, 1.0, 0.5};
  const auto d = click_apply(push, "agent", 0.02, s);
  CHECK(d.at(1).dv.x == Approx(0.01));
  CHECK(d.at(1).dv.y == Approx(0.0));

  // Two overlapping sprites: the later-drawn one receives the click.
  State two = s;
  SpriteFactors f;
  f.x = 0.52;
  f.y = 0.5;
  two.add_sprite("agent", make_sprite(f));
  const auto hit = click_apply(push, "agent", 0.02, two);
  CHECK(hit.at(1).dv == Vec2{});
  CHECK(hit.at(2).dv.x == Approx(0.01));

  State applied = two;
  Click("agent", 0.02).apply(std::vector<double>{0.5, 0.5, 1.0, 0.5}, applied);
  CHECK(applied.layer("agent").sprites[1].velocity.x == Approx(0.01));
  CHECK(applied.layer("agent").sprites[0].velocity.x == 0.0);
}

TEST_CASE("composite") {
  State s;
  s.add_layer("left");
  s.add_layer("right");
  s.add_sprite("left", make_sprite({}));
  s.add_sprite("right", make_sprite({}));
  std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> kids;
  kids.emplace_back("p1", Joystick(0.01, "left"));
  kids.emplace_back("p2", Joystick(0.01, "right"));
  const Composite both(kids);
  both.apply(Action::Named{{"p2", std::vector<double>{0, 1}}, {"p1", std::vector<double>{1, 0}}}, s);
  CHECK(s.layer("left").sprites[0].velocity == Vec2{0.01, 0});
  CHECK(s.layer("right").sprites[0].velocity == Vec2{0, 0.01});

  const State before = s;
  CHECK_THROWS_AS(both.apply(Action::Named{{"p1", std::vector<double>{1, 0}}}, s), MissingSubAction);
  CHECK(s == before);
  Composite().apply(Action::Named{}, s);
  CHECK(s == before);

  std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> ordered;
  ordered.emplace_back("grid", Grid(0.05, "left"));
  ordered.emplace_back("touch", SetPosition("left"));
  Composite(ordered).apply(Action::Named{{"touch", std::vector<double>{0.2, 0.7}}, {"grid", "right"}}, s);
  CHECK(s.layer("left").sprites[0].position == Vec2{0.2, 0.7});
  CHECK(Composite(ordered).layers() == std::vector<std::string>{"left"});
}

TEST_CASE("apply is a pure function of action and state") {
  std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> kids;
  kids.emplace_back("stick", Joystick(0.01, "agent"));
  kids.emplace_back("click", Click("agent", 0.02));
  const Composite space(kids);
  const Action a = Action::Named{{"stick", std::vector<double>{0.3, -0.2}}, {"click", std::vector<double>{0.5, 0.5, 0.1, 0.9}}};
  State x = one_sprite(), y = one_sprite();
  space.apply(a, x);
  space.apply(a, y);
  CHECK(x == y);
}

TEST_CASE("spec and action json round trip") {
  std::vector<std::pair<std::string, Polymorphic<ActionSpace>>> kids;
  kids.emplace_back("a", Joystick(0.01, "x"));
  kids.emplace_back("b", Grid(0.1, "y"));
  kids.emplace_back("c", Click("z", 0.02));
  const ActionSpec spec = Composite(kids).spec();
  CHECK(ActionSpec::from_json(spec.to_json()) == spec);
  CHECK(spec.children[1].second.tokens.size() == 5);
  CHECK_THROWS_AS(ActionSpec::from_json({{"kind", "box"}, {"lo", {1}}, {"hi", {0}}}), ActionOutOfSpec);
  CHECK_THROWS_AS(ActionSpec::from_json({{"kind", "discrete"}, {"tokens", nlohmann::json::array()}}), ActionOutOfSpec);

  const Action named = Action::Named{{"a", std::vector<double>{0.1, 0.2}}, {"b", "up"}, {"c", Action{}}};
  CHECK(Action::from_json(named.to_json()) == named);
  CHECK(Action::from_json(nullptr).is_noop());
  CHECK_THROWS_AS(Action::from_json(3.0), ActionOutOfSpec);
}
