#include "polyarena/server/session.hpp"

#include <fmt/format.h>

#include "polyarena/errors.hpp"

namespace polyarena {

TickSchedule::TickSchedule(int fps, Clock::time_point start) : start_(start) {
  if (fps < 1) throw InvariantViolation(fmt::format("fps must be >= 1, got {}", fps));
  period_ = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / fps));
}

std::uint64_t TickSchedule::on_wake(Clock::time_point now) {
  const auto late = now - next_deadline();
  ++index_;
  if (late < period_) return 0;
  const auto skipped = static_cast<std::int64_t>(late / period_);
  index_ += skipped;
  return static_cast<std::uint64_t>(skipped);
}

SessionCore::SessionCore(Recipe recipe, std::uint64_t seed, int fps, std::size_t outbox_capacity)
    : recipe_(std::move(recipe)),
      seed_(seed),
      fps_(fps),
      capacity_(outbox_capacity),
      env_(build(recipe_, seed)),
      spec_(env_.action_spec()) {
  if (fps < 1) throw InvariantViolation(fmt::format("fps must be >= 1, got {}", fps));
  if (capacity_ < 1) throw InvariantViolation("outbox capacity must be >= 1");
  const TimeStep first = env_.reset();
  outbox_.push_back(protocol::encode_frame(first, render_display_list(env_.state())));
}

std::string SessionCore::hello() const {
  return protocol::encode(protocol::Hello{spec_, fps_, recipe_.name, seed_});
}

void SessionCore::on_message(std::string_view text) {
  const protocol::Message m = protocol::decode(text);
  const auto* input = std::get_if<protocol::Input>(&m);
  if (!input) throw ProtocolError("clients may only send input messages");
  latest_ = protocol::decode_action(input->payload, spec_);
  ++stats_.inputs;
}

void SessionCore::tick() {
  const TimeStep ts = env_.step(latest_, false);
  latest_ = protocol::held_part(latest_, spec_);
  ++stats_.ticks;
  if (outbox_.size() >= capacity_) {
    outbox_.pop_front();
    ++stats_.frames_dropped;
  }
  outbox_.push_back(protocol::encode_frame(ts, render_display_list(env_.state())));
}

std::optional<std::string> SessionCore::pop_frame() {
  if (outbox_.empty()) return std::nullopt;
  std::string f = std::move(outbox_.front());
  outbox_.pop_front();
  return f;
}

}  // namespace polyarena
