#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace polyarena {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  ///< 0 picks a free port
  std::string recipe = "pong";  ///< default for sessions without ?recipe=
  int fps = 60;
  /// Session i gets seed + i; without a seed each session draws a random one.
  std::optional<std::uint64_t> seed;
  /// Directory served over HTTP; a minimal index page is served without one.
  std::optional<std::filesystem::path> web_root;
  std::size_t outbox_capacity = 8;
};

struct ServerStats {
  std::uint64_t sessions_started = 0;
  std::uint64_t sessions_active = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t overruns = 0;
};

/// HTTP and WebSocket on one port. GET /ws?recipe=<name|path>&seed=<n>
/// upgrades to a play session; GET /stats reports counters as JSON; any other
/// GET is a static file.
class PlayServer {
 public:
  /// Binds immediately. Throws IoError when the address is unavailable and
  /// UnknownBuiltin / SchemaError when the default recipe does not load.
  explicit PlayServer(ServerOptions options);
  ~PlayServer();
  PlayServer(const PlayServer&) = delete;
  PlayServer& operator=(const PlayServer&) = delete;

  unsigned short port() const noexcept;
  /// Serves on the calling thread until stop(), or SIGINT / SIGTERM when
  /// `stop_on_signal` is set.
  void run(bool stop_on_signal = false);
  /// Serves on a background thread.
  void start();
  void stop();
  ServerStats stats() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace polyarena
