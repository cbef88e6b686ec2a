#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "polyarena/errors.hpp"
#include "polyarena/server/server.hpp"
#include "protocol_client.hpp"

using namespace polyarena;
using namespace polyarena::protocol;
using polyarena::testing::ProtocolClient;
using nlohmann::json;

namespace {

ServerOptions local(std::string recipe = "navigate_to_goal") {
  ServerOptions o;
  o.port = 0;
  o.recipe = std::move(recipe);
  o.seed = 100;
  return o;
}

template <class T>
T expect(const Message& m) {
  REQUIRE(std::holds_alternative<T>(m));
  return std::get<T>(m);
}

}  // namespace

TEST_CASE("headless client steers navigate_to_goal to reward 1") {
  PlayServer server(local());
  server.start();
  ProtocolClient client(server.port(), "/ws");
  const Hello hello = expect<Hello>(client.receive());
  CHECK(hello.recipe == "navigate_to_goal");
  CHECK(hello.action_spec.space == "joystick");
  const Frame first = expect<Frame>(client.receive());
  CHECK(first.kind == StepKind::kFirst);
  REQUIRE(first.polygons.size() == 2);

  client.send_input(json{{"dx", -1.0}, {"dy", -1.0}});
  bool rewarded = false;
  for (int i = 0; i < 600 && !rewarded; ++i) rewarded = expect<Frame>(client.receive()).reward == 1.0;
  CHECK(rewarded);
  CHECK(server.stats().sessions_active == 1);
}

TEST_CASE("60 fps pacing over 600 ticks") {
  PlayServer server(local("pong"));
  server.start();
  ProtocolClient client(server.port(), "/ws?recipe=pong");
  expect<Hello>(client.receive());
  expect<Frame>(client.receive());
  const auto t0 = std::chrono::steady_clock::now();
  int last_step = 0;
  for (int i = 0; i < 600; ++i) last_step = expect<Frame>(client.receive()).step;
  const double mean_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / 600.0;
  MESSAGE("mean inter-frame interval ", mean_ms, " ms");
  CHECK(mean_ms == doctest::Approx(1000.0 / 60.0).epsilon(0.10));
  // A shared single core may lose the odd tick to the scheduler.
  CHECK(server.stats().overruns <= 6);
  CHECK(last_step > 0);
}

TEST_CASE("concurrent sessions get distinct seeds and trajectories") {
  PlayServer server(local("collisions"));
  server.start();
  ProtocolClient a(server.port(), "/ws"), b(server.port(), "/ws");
  const Hello ha = expect<Hello>(a.receive()), hb = expect<Hello>(b.receive());
  CHECK(ha.seed != hb.seed);
  CHECK(expect<Frame>(a.receive()).polygons != expect<Frame>(b.receive()).polygons);

  ProtocolClient c(server.port(), "/ws?seed=" + std::to_string(ha.seed));
  CHECK(expect<Hello>(c.receive()).seed == ha.seed);
  CHECK(server.stats().sessions_started == 3);
}

TEST_CASE("malformed input gets an error frame and a close") {
  PlayServer server(local());
  server.start();
  ProtocolClient client(server.port(), "/ws");
  expect<Hello>(client.receive());
  client.send_text("{\"type\":\"input\",\"payload\":{\"dx\":\"left\"}}");
  bool got_error = false;
  try {
    for (int i = 0; i < 100 && !got_error; ++i) {
      got_error = std::holds_alternative<ErrorMessage>(client.receive());
    }
  } catch (const boost::system::system_error&) {
  }
  CHECK(got_error);
  CHECK_THROWS(client.receive_text());
}

TEST_CASE("unknown recipe query yields an error message") {
  PlayServer server(local());
  server.start();
  ProtocolClient client(server.port(), "/ws?recipe=chess");
  const auto err = expect<ErrorMessage>(client.receive());
  CHECK(err.message.find("chess") != std::string::npos);
}

TEST_CASE("static HTTP endpoint") {
  const auto root = std::filesystem::temp_directory_path() / "polyarena_test_web";
  std::filesystem::create_directories(root / "js");
  std::ofstream(root / "index.html") << "<html>hi</html>";
  std::ofstream(root / "js" / "app.js") << "console.log(1)";

  ServerOptions o = local();
  o.web_root = root;
  PlayServer server(o);
  server.start();
  auto r = testing::http_get(server.port(), "/");
  CHECK(r.status == 200);
  CHECK(r.body == "<html>hi</html>");
  CHECK(r.content_type.starts_with("text/html"));
  r = testing::http_get(server.port(), "/js/app.js");
  CHECK(r.status == 200);
  CHECK(r.content_type == "text/javascript");
  CHECK(testing::http_get(server.port(), "/nope.css").status == 404);
  CHECK(testing::http_get(server.port(), "/../secret").status == 400);
  CHECK(testing::http_get(server.port(), "/%2e%2e/secret").status == 400);

  r = testing::http_get(server.port(), "/recipes");
  CHECK(json::parse(r.body)["default"] == "navigate_to_goal");
  r = testing::http_get(server.port(), "/stats");
  CHECK(json::parse(r.body).contains("overruns"));

  PlayServer bare(local());
  bare.start();
  CHECK(testing::http_get(bare.port(), "/").status == 200);
}

TEST_CASE("server construction errors") {
  ServerOptions o = local();
  o.recipe = "chess";
  CHECK_THROWS_AS(PlayServer{o}, UnknownBuiltin);
  o = local();
  o.address = "not an address";
  CHECK_THROWS_AS(PlayServer{o}, IoError);
  PlayServer first(local());
  o = local();
  o.port = first.port();
  CHECK_THROWS_AS(PlayServer{o}, IoError);
}
