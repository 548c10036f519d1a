#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "puppetwire/behavior_tree.hpp"
#include "puppetwire/emotion.hpp"
#include "puppetwire/estimation.hpp"
#include "puppetwire/particles.hpp"
#include "puppetwire/recommend.hpp"

namespace puppetwire {

inline constexpr int kDefaultTickRate = 60;

/// Controllable puppet parameters (x, y, i, eye-closed flags, mouth-open flag).
struct PuppetState {
  double x = 0.5;
  double y = 0.5;
  EmotionTemplate emotion = EmotionTemplate::Neutral;
  int eye_closed_l = 0;
  int eye_closed_r = 0;
  int mouth_open = 0;
  Character character = Character::Boy;

  bool operator==(const PuppetState&) const = default;
};

struct VibrationOffset {
  Component component = Component::Face;
  Axis axis = Axis::X;
  double offset = 0.0;

  bool operator==(const VibrationOffset&) const = default;
};

struct DanmakuEntity {
  std::string text;
  double font_size = 0.0;
  Rgb color;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const DanmakuEntity&) const = default;
};

struct ParticleSprite {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;
  std::string texture_id;

  bool operator==(const ParticleSprite&) const = default;
};

/// Render description of everything the running command contributes.
struct ActiveEffects {
  std::optional<std::string> command;      // key of the running command
  std::optional<double> timeline_ms;       // local time within it
  std::vector<VibrationOffset> vibration;  // only components with a live vibration
  std::vector<DanmakuEntity> danmaku;
  std::vector<ParticleSprite> particles;
  std::vector<std::string> sounds;  // fired on this tick
  std::optional<std::string> background;

  bool operator==(const ActiveEffects&) const = default;
};

struct StateFrame {
  std::uint64_t tick = 0;
  double time_ms = 0.0;
  PuppetState puppet;
  ActiveEffects effects;
  Recommendation recommendations;
  int valence = 5;
  int arousal = 70;

  bool operator==(const StateFrame&) const = default;
};

/// Frequency in Hz for a vibration level: 2 / 5 / 10.
double vibration_frequency_hz(Level level);
/// Amplitude in scene units for a vibration level: 0.005 / 0.01 / 0.02.
double vibration_amplitude(Level level);
/// amplitude * sin(2 pi f t) with t the time since the entry started.
double vibration_offset(const VibrationAction& action, double t_entry_ms);

/// Left edge of a danmaku string t_entry_ms into a traversal lasting
/// duration_ms; runs from one text width off one side to one text width
/// past the other.
double danmaku_x(const DanmakuAction& action, double t_entry_ms, double duration_ms);

struct TriggerInput {
  std::string key;
  bool operator==(const TriggerInput&) const = default;
};
using EngineInput = std::variant<SensorSample, TriggerInput>;

struct EngineConfig {
  int tick_rate = kDefaultTickRate;
  std::uint64_t seed = 0;
  Character character = Character::Boy;
  RecommendConfig recommend;
  FaceFilterConfig face;
};

/// Single-threaded, fixed-step live animation engine. Identical inputs,
/// seed and tick rate produce bitwise-identical frames.
class Engine {
 public:
  explicit Engine(CommandCorpus corpus, EngineConfig config = {});

  /// Binds sensor-derived parameters. Invalid samples are dropped with a
  /// warning; returns whether the sample was applied.
  bool apply_sensor(const SensorSample& sample);

  /// Installs the command's timeline at the current time, replacing any
  /// running one. Throws UNKNOWN_KEY.
  void trigger(std::string_view key);

  /// Queued inputs are applied in order at the start of the next tick.
  void enqueue(EngineInput input) { queue_.push_back(std::move(input)); }

  /// Drains the queue, advances one fixed step and emits the frame.
  StateFrame tick();

  void set_corpus(CommandCorpus corpus) { corpus_ = std::move(corpus); }
  const CommandCorpus& corpus() const { return corpus_; }
  const PuppetState& puppet() const { return puppet_; }
  const EngineConfig& config() const { return config_; }
  double dt_ms() const { return 1000.0 / static_cast<double>(config_.tick_rate); }
  std::uint64_t ticks() const { return ticks_; }
  bool timeline_active() const { return active_.has_value(); }
  AffectEstimate affect() const { return affect_.estimate(); }

 private:
  struct RunningCommand {
    std::string key;
    ActionTimeline timeline;
    std::uint64_t start_tick = 0;
    std::vector<bool> sound_fired;
    std::map<std::size_t, Emitter> emitters;  // by entry index
  };

  ActiveEffects advance_timeline();

  CommandCorpus corpus_;
  EngineConfig config_;
  PuppetState puppet_;
  FaceFilter face_filter_;
  AffectSmoother affect_;
  std::optional<RunningCommand> active_;
  std::deque<EngineInput> queue_;
  std::uint64_t ticks_ = 0;
  std::uint64_t trigger_count_ = 0;
};

}  // namespace puppetwire
