#include "polyarena/server/server.hpp"

#include <deque>
#include <map>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "polyarena/errors.hpp"
#include "polyarena/recipes.hpp"
#include "polyarena/server/session.hpp"

namespace polyarena {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

constexpr std::string_view kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>polyarena</title></head>
<body><p>polyarena play server. Connect a client to <code>/ws?recipe=NAME</code>; builtins are listed at
<a href="/recipes">/recipes</a>.</p></body></html>
)";

struct Shared {
  ServerOptions options;
  Recipe default_recipe;
  std::atomic<std::uint64_t> sessions_started{0};
  std::atomic<std::uint64_t> sessions_active{0};
  std::atomic<std::uint64_t> frames_dropped{0};
  std::atomic<std::uint64_t> overruns{0};
  std::mt19937_64 seed_source{std::random_device{}()};
};

std::string_view std_view(beast::string_view s) { return {s.data(), s.size()}; }

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const int hi = hex_digit(s[i + 1]), lo = hex_digit(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += s[i] == '+' ? ' ' : s[i];
  }
  return out;
}

/// Splits "/path?a=1&b=2" into the path and its query parameters.
std::pair<std::string, std::map<std::string, std::string>> split_target(std::string_view target) {
  std::map<std::string, std::string> query;
  const auto q = target.find('?');
  const std::string path = url_decode(target.substr(0, q));
  if (q == std::string_view::npos) return {path, query};
  std::string_view rest = target.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string_view pair = rest.substr(0, amp);
    const auto eq = pair.find('=');
    query[url_decode(pair.substr(0, eq))] = eq == std::string_view::npos ? "" : url_decode(pair.substr(eq + 1));
    rest = amp == std::string_view::npos ? std::string_view{} : rest.substr(amp + 1);
  }
  return {path, query};
}

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, std::shared_ptr<Shared> shared)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), shared_(std::move(shared)) {}

  ~WsSession() {
    if (accepted_) --shared_->sessions_active;
    if (core_) shared_->frames_dropped += core_->stats().frames_dropped;
  }

  void run(http::request<http::string_body> req) {
    const auto [path, query] = split_target(std_view(req.target()));
    std::string setup_error;
    try {
      Recipe recipe = shared_->default_recipe;
      if (const auto it = query.find("recipe"); it != query.end() && it->second != recipe.name) {
        recipe = builtin(it->second);
      }
      std::uint64_t seed;
      if (const auto it = query.find("seed"); it != query.end()) {
        seed = std::stoull(it->second);
      } else if (shared_->options.seed) {
        seed = *shared_->options.seed + shared_->sessions_started;
      } else {
        seed = shared_->seed_source();
      }
      core_.emplace(std::move(recipe), seed, shared_->options.fps, shared_->options.outbox_capacity);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    ++shared_->sessions_started;

    beast::get_lowest_layer(ws_).expires_never();
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this(), setup_error](beast::error_code ec) {
      if (ec) return;
      self->accepted_ = true;
      ++self->shared_->sessions_active;
      if (!setup_error.empty()) {
        self->fail(setup_error);
        return;
      }
      self->control_.push_back(self->core_->hello());
      self->flush();
      self->read();
      self->schedule_.emplace(self->core_->fps(), TickSchedule::Clock::now());
      self->arm();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closing_ = true;
        self->timer_.cancel();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      if (self->closing_) return;
      try {
        self->core_->on_message(text);
      } catch (const ProtocolError& e) {
        self->fail(e.what());
        return;
      }
      self->read();
    });
  }

  void fail(const std::string& message) {
    closing_ = true;
    timer_.cancel();
    control_.push_back(protocol::encode(protocol::ErrorMessage{message}));
    flush();
  }

  void arm() {
    timer_.expires_at(schedule_->next_deadline());
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closing_) return;
      const std::uint64_t skipped = self->schedule_->on_wake(TickSchedule::Clock::now());
      self->core_->note_overruns(skipped);
      self->shared_->overruns += skipped;
      self->core_->tick();
      self->flush();
      self->arm();
    });
  }

  void flush() {
    if (writing_) return;
    if (!control_.empty()) {
      out_ = std::move(control_.front());
      control_.pop_front();
    } else if (auto frame = closing_ ? std::nullopt : core_->pop_frame()) {
      out_ = std::move(*frame);
    } else {
      if (closing_ && !close_sent_) {
        close_sent_ = true;
        ws_.async_close(websocket::close_code::policy_error, [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(out_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) {
        self->closing_ = true;
        self->close_sent_ = true;
        self->timer_.cancel();
        return;
      }
      self->flush();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  std::shared_ptr<Shared> shared_;
  beast::flat_buffer buffer_;
  std::optional<SessionCore> core_;
  std::optional<TickSchedule> schedule_;
  std::deque<std::string> control_;
  std::string out_;
  bool accepted_ = false;
  bool writing_ = false;
  bool closing_ = false;
  bool close_sent_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, std::shared_ptr<Shared> shared)
      : stream_(std::move(socket)), shared_(std::move(shared)) {}

  void run() { read(); }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      if (websocket::is_upgrade(self->req_)) {
        std::make_shared<WsSession>(self->stream_.release_socket(), self->shared_)->run(std::move(self->req_));
        return;
      }
      self->send(self->respond());
    });
  }

  http::response<http::string_body> reply(http::status status, std::string_view type, std::string body) {
    http::response<http::string_body> res{status, req_.version()};
    res.set(http::field::server, "polyarena");
    res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
    res.keep_alive(req_.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> respond() {
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return reply(http::status::method_not_allowed, "text/plain", "only GET and HEAD are served\n");
    }
    const auto [path, query] = split_target(std_view(req_.target()));
    if (path == "/stats") {
      const json j{{"sessions_started", shared_->sessions_started.load()},
                   {"sessions_active", shared_->sessions_active.load()},
                   {"frames_dropped", shared_->frames_dropped.load()},
                   {"overruns", shared_->overruns.load()}};
      return reply(http::status::ok, "application/json", j.dump());
    }
    if (path == "/recipes") {
      const json j{{"default", shared_->default_recipe.name}, {"builtins", builtin_names()}};
      return reply(http::status::ok, "application/json", j.dump());
    }
    const auto& root = shared_->options.web_root;
    if (!root) {
      if (path == "/" || path == "/index.html") return reply(http::status::ok, "text/html; charset=utf-8", std::string(kIndexPage));
      return reply(http::status::not_found, "text/plain", "not found\n");
    }
    if (path.empty() || path[0] != '/' || path.find("..") != std::string::npos) {
      return reply(http::status::bad_request, "text/plain", "bad path\n");
    }
    std::filesystem::path file = *root / path.substr(1);
    if (path.back() == '/') file /= "index.html";
    std::ifstream f(file, std::ios::binary);
    if (!f) return reply(http::status::not_found, "text/plain", "not found\n");
    std::stringstream body;
    body << f.rdbuf();
    return reply(http::status::ok, mime_type(file), body.str());
  }

  void send(http::response<http::string_body> res) {
    auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
    if (req_.method() == http::verb::head) sp->body().clear();
    auto write_done = [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
      if (!ec && sp->keep_alive()) {
        self->read();
        return;
      }
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    };
    http::async_write(stream_, *sp, std::move(write_done));
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<Shared> shared_;
};

}  // namespace

struct PlayServer::Impl {
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::shared_ptr<Shared> shared = std::make_shared<Shared>();

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpSession>(std::move(socket), shared)->run();
      if (acceptor.is_open()) accept();
    });
  }
};

PlayServer::PlayServer(ServerOptions options) : impl_(std::make_shared<Impl>()) {
  if (options.fps < 1) throw InvariantViolation(fmt::format("fps must be >= 1, got {}", options.fps));
  impl_->shared->default_recipe = load_recipe(options.recipe);
  impl_->shared->options = std::move(options);
  const auto& o = impl_->shared->options;
  beast::error_code ec;
  const auto address = net::ip::make_address(o.address, ec);
  if (ec) throw IoError(fmt::format("bad listen address '{}': {}", o.address, ec.message()));
  const tcp::endpoint endpoint{address, o.port};
  auto& acc = impl_->acceptor;
  if (acc.open(endpoint.protocol(), ec); ec) throw IoError(fmt::format("open: {}", ec.message()));
  acc.set_option(net::socket_base::reuse_address(true), ec);
  if (acc.bind(endpoint, ec); ec) {
    throw IoError(fmt::format("cannot bind {}:{}: {}", o.address, o.port, ec.message()));
  }
  if (acc.listen(net::socket_base::max_listen_connections, ec); ec) {
    throw IoError(fmt::format("listen: {}", ec.message()));
  }
}

PlayServer::~PlayServer() { stop(); }

unsigned short PlayServer::port() const noexcept {
  beast::error_code ec;
  return impl_->acceptor.local_endpoint(ec).port();
}

void PlayServer::run(bool stop_on_signal) {
  net::signal_set signals(impl_->ioc);
  if (stop_on_signal) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
      if (!ec) impl_->ioc.stop();
    });
  }
  impl_->accept();
  impl_->ioc.run();
}

void PlayServer::start() {
  thread_ = std::thread([this] { run(); });
}

void PlayServer::stop() {
  impl_->ioc.stop();
  if (thread_.joinable()) thread_.join();
}

ServerStats PlayServer::stats() const {
  const auto& s = *impl_->shared;
  return {s.sessions_started.load(), s.sessions_active.load(), s.frames_dropped.load(), s.overruns.load()};
}

}  // namespace polyarena
