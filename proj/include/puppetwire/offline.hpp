#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "puppetwire/runtime.hpp"
#include "puppetwire/session.hpp"

namespace puppetwire {

/// Frames covering a command's whole timeline at fps: ceil(total * fps / 1000)
/// frames (at least one), the last of which falls at or after the end.
std::vector<StateFrame> render_command(const CommandCorpus& corpus, std::string_view key, int fps,
                                       std::uint64_t seed);

/// One compact JSON object per line.
std::string frames_to_ndjson(const std::vector<StateFrame>& frames);

struct ScenarioEvent {
  std::int64_t t_ms = 0;
  EngineInput input;
};

struct Scenario {
  CommandCorpus corpus;
  int tick_rate = kDefaultTickRate;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> duration_ms;  // default: last event + 1000 ms
  std::vector<ScenarioEvent> events;        // non-decreasing t_ms

  std::int64_t effective_duration_ms() const;
};

/// Newline-delimited records {"t_ms", "kind": "sensor"|"trigger", ...}, with
/// an optional leading {"kind": "config", ...} record. Relative corpus paths
/// resolve against base_dir. Throws Error(MALFORMED_DOCUMENT /
/// SCHEMA_VIOLATION) on bad input.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);

struct SimulationResult {
  std::vector<StateFrame> frames;
  std::vector<LogRecord> log;
  nlohmann::json summary;
};

/// Runs a headless performer session over the scenario. Events are
/// delivered at the start of the first tick whose start time is >= t_ms.
SimulationResult simulate(const Scenario& scenario);

inline constexpr const char* kSimulationSessionId = "simulation";

}  // namespace puppetwire
