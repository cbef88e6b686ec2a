#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polyarena/environment.hpp"
#include "polyarena/policies.hpp"
#include "polyarena/recipes.hpp"

namespace polyarena {

/// Bumped whenever a record or manifest field changes meaning.
inline constexpr int kLogFormatVersion = 1;

/// Destination for newline-delimited log records.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  /// One record without its trailing newline. Throws SinkWriteError.
  virtual void write(std::string_view line) = 0;
};

class StreamSink final : public RecordSink {
 public:
  explicit StreamSink(std::ostream& out) : out_(out) {}
  void write(std::string_view line) override;

 private:
  std::ostream& out_;
};

class MemorySink final : public RecordSink {
 public:
  void write(std::string_view line) override { lines.emplace_back(line); }
  std::vector<std::string> lines;
};

/// Compact JSON with floating-point numbers at 9 significant digits and
/// non-finite values spelled "inf", "-inf", "nan".
std::string encode_record(const nlohmann::json& record);

nlohmann::json sprite_record(const Sprite& sprite);
nlohmann::json state_record(const State& state);
/// Rebuilds a renderable state from a logged one. Throws InvariantViolation.
State state_from_record(const nlohmann::json& layers);

/// The action as it reads back from the log. Recording applies this form so a
/// replay of the logged text is exact.
Action logged_action(const Action& action);

struct EpisodeSummary {
  int records = 0;
  double total_reward = 0.0;
  bool truncated = false;  ///< stopped at max_steps before LAST
};

/// Called with the record index and state of every record, after it is written.
using FrameHook = std::function<void(int index, const State& state)>;

/// Resets `env` and writes one record per timestep until LAST or `max_steps`
/// steps. Record fields: step_index, trial_index, kind, reward, action (null on
/// FIRST), phase, state.
EpisodeSummary record_episode(Environment& env, const Policy& policy, RecordSink& sink, int max_steps = 10000,
                              const FrameHook& on_record = {});

struct DatasetOptions {
  std::string policy = "random";  ///< random, or seek (needs a policy hint)
  int episodes = 1;
  int width = 64;
  int height = 64;
  int supersample = 1;
  std::uint64_t seed = 0;  ///< episode i uses seed + i
  int max_steps = 1000;
};

/// Writes out_dir/manifest.json, out_dir/episode_{i}/frame_{t}.png and
/// out_dir/episode_{i}/log.ndjson. Returns the manifest. Throws IoError naming
/// the path, InvariantViolation for bad options.
nlohmann::json generate_dataset(const Recipe& recipe, const DatasetOptions& options,
                                const std::filesystem::path& out_dir);

/// Throws IoError.
std::vector<std::string> read_log(const std::filesystem::path& path);

struct ReplayReport {
  int records = 0;
  int first_mismatch = -1;  ///< record index, -1 when every record matches
  bool identical() const noexcept { return first_mismatch < 0; }
};

/// Re-simulates a log from its seed and logged actions and compares every
/// regenerated record with the logged text.
ReplayReport verify_replay(const Recipe& recipe, std::uint64_t seed, std::span<const std::string> lines);

/// Renders each logged state to out_dir/frame_{t}.png. Returns the frame count.
int render_log(std::span<const std::string> lines, const std::filesystem::path& out_dir, int width, int height,
               int supersample = 1);

}  // namespace polyarena
