#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>

#include "polyarena/recipes.hpp"
#include "polyarena/server/protocol.hpp"

namespace polyarena {

struct SessionStats {
  std::uint64_t ticks = 0;
  std::uint64_t inputs = 0;
  std::uint64_t frames_dropped = 0;  ///< evicted from a full outbox
  std::uint64_t overruns = 0;        ///< ticks skipped because the clock fell behind
  friend bool operator==(const SessionStats&, const SessionStats&) = default;
};

/// Fixed-rate deadlines on a monotonic clock. Deadlines are multiples of the
/// period from the start time, so jitter does not accumulate.
class TickSchedule {
 public:
  using Clock = std::chrono::steady_clock;

  TickSchedule(int fps, Clock::time_point start);

  Clock::time_point next_deadline() const noexcept { return start_ + period_ * index_; }
  /// Consumes the tick due at or before `now` and returns how many further
  /// ticks were missed entirely; those are skipped rather than run late.
  std::uint64_t on_wake(Clock::time_point now);
  Clock::duration period() const noexcept { return period_; }

 private:
  Clock::time_point start_;
  Clock::duration period_;
  std::int64_t index_ = 1;
};

/// Transport-free half of a play session: one environment, the latest-input
/// slot and a bounded outbox that drops its oldest frame when full.
class SessionCore {
 public:
  SessionCore(Recipe recipe, std::uint64_t seed, int fps, std::size_t outbox_capacity = 8);

  std::string hello() const;
  /// Parses one client message. Throws ProtocolError.
  void on_message(std::string_view text);
  /// Steps once with the latest input (neutral before any) and queues a frame.
  void tick();
  void note_overruns(std::uint64_t skipped) { stats_.overruns += skipped; }

  std::optional<std::string> pop_frame();
  std::size_t pending() const noexcept { return outbox_.size(); }

  const SessionStats& stats() const noexcept { return stats_; }
  const Environment& environment() const noexcept { return env_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int fps() const noexcept { return fps_; }

 private:
  Recipe recipe_;
  std::uint64_t seed_;
  int fps_;
  std::size_t capacity_;
  Environment env_;
  ActionSpec spec_;
  Action latest_;
  std::deque<std::string> outbox_;
  SessionStats stats_;
};

}  // namespace polyarena
