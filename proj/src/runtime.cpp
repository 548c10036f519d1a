#include "puppetwire/runtime.hpp"

#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

namespace puppetwire {

double vibration_frequency_hz(Level level) {
  switch (level) {
    case Level::Low: return 2.0;
    case Level::Med: return 5.0;
    case Level::High: return 10.0;
  }
  return 5.0;
}

double vibration_amplitude(Level level) {
  switch (level) {
    case Level::Low: return 0.005;
    case Level::Med: return 0.01;
    case Level::High: return 0.02;
  }
  return 0.01;
}

double vibration_offset(const VibrationAction& action, double t_entry_ms) {
  const double t = t_entry_ms / 1000.0;
  return vibration_amplitude(action.amplitude) *
         std::sin(2.0 * std::numbers::pi * vibration_frequency_hz(action.frequency) * t);
}

double danmaku_x(const DanmakuAction& action, double t_entry_ms, double duration_ms) {
  const double margin = danmaku_text_width(action);
  const double progress = t_entry_ms / duration_ms;
  const double left = -margin;
  const double right = 1.0 + margin;
  return action.direction == Direction::LeftToRight ? std::lerp(left, right, progress)
                                                    : std::lerp(right, left, progress);
}

Engine::Engine(CommandCorpus corpus, EngineConfig config)
    : corpus_(std::move(corpus)), config_(config), face_filter_(mix_seed(config.seed, 0xFACE), config.face) {
  puppet_.character = config_.character;
}

bool Engine::apply_sensor(const SensorSample& sample) {
  if (const auto diags = validate_sample(sample); !diags.empty()) {
    spdlog::warn("dropping sensor sample at {} ms: {} ({})", sample.timestamp_ms, to_string(diags.front().code),
                 diags.front().message);
    return false;
  }
  if (sample.landmarks) {
    const Vec2 p = face_filter_.update(*sample.landmarks);
    puppet_.x = p.x;
    puppet_.y = p.y;
  }
  if (sample.eye_open_l) puppet_.eye_closed_l = *sample.eye_open_l ? 0 : 1;
  if (sample.eye_open_r) puppet_.eye_closed_r = *sample.eye_open_r ? 0 : 1;
  if (sample.volume) puppet_.mouth_open = mouth_state(*sample.volume) == MouthState::Open ? 1 : 0;
  if (sample.emotion_probs) affect_.observe_valence(encode_valence(*sample.emotion_probs), sample.timestamp_ms);
  if (sample.bpm) affect_.observe_arousal(estimate_arousal(*sample.bpm), sample.timestamp_ms);
  return true;
}

void Engine::trigger(std::string_view key) {
  const auto* cmd = corpus_.find(key);
  if (cmd == nullptr) throw Error(Code::UnknownKey, "no command bound to key '" + std::string(key) + "'");
  RunningCommand run;
  run.key = cmd->key;
  run.timeline = compile_timeline(cmd->behavior);
  run.start_tick = ticks_;
  run.sound_fired.assign(run.timeline.entries.size(), false);
  active_ = std::move(run);
  ++trigger_count_;
}

ActiveEffects Engine::advance_timeline() {
  ActiveEffects fx;
  fx.background = corpus_.default_background;
  puppet_.emotion = EmotionTemplate::Neutral;
  if (!active_) return fx;

  auto& run = *active_;
  const double dt = dt_ms();
  const double t = static_cast<double>(ticks_ - run.start_tick) * dt;
  const auto& entries = run.timeline.entries;
  const bool expired = t >= static_cast<double>(run.timeline.total_ms);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto* sound = std::get_if<SoundAction>(&entries[i].action);
    if (sound != nullptr && !run.sound_fired[i] && static_cast<double>(entries[i].start_ms) <= t) {
      run.sound_fired[i] = true;
      fx.sounds.push_back(sound->sound_id);
    }
  }
  if (expired) {
    active_.reset();
    return fx;
  }

  fx.command = run.key;
  fx.timeline_ms = t;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double start = static_cast<double>(e.start_ms);
    const double end = static_cast<double>(e.end_ms);
    const double local = t - start;
    if (const auto* bg = std::get_if<BackgroundImageAction>(&e.action)) {
      if (start <= t) fx.background = bg->image_id;
      continue;
    }
    const bool live = start <= t && t < end;
    if (const auto* particle = std::get_if<ParticleAction>(&e.action)) {
      if (!live) {
        run.emitters.erase(i);
        continue;
      }
      auto it = run.emitters.find(i);
      if (it == run.emitters.end()) {
        auto cfg = EmitterConfig::defaults(particle->pattern, particle->emitter, particle->speed, particle->texture_id);
        const std::uint64_t seed = mix_seed(mix_seed(config_.seed, trigger_count_), i);
        it = run.emitters.emplace(i, Emitter(std::move(cfg), seed)).first;
      }
      it->second.advance(dt);
      for (const auto& p : it->second.particles()) {
        fx.particles.push_back({p.position.x, p.position.y, p.alpha, particle->texture_id});
      }
      continue;
    }
    if (!live) continue;
    if (const auto* swap = std::get_if<SwapAction>(&e.action)) {
      puppet_.emotion = swap->emotion;
    } else if (const auto* vib = std::get_if<VibrationAction>(&e.action)) {
      fx.vibration.push_back({e.component, vib->axis, vibration_offset(*vib, local)});
    } else if (const auto* dm = std::get_if<DanmakuAction>(&e.action)) {
      fx.danmaku.push_back({dm->text, dm->font_size, dm->color, danmaku_x(*dm, local, end - start), dm->shift});
    }
  }
  return fx;
}

StateFrame Engine::tick() {
  while (!queue_.empty()) {
    EngineInput input = std::move(queue_.front());
    queue_.pop_front();
    if (const auto* sample = std::get_if<SensorSample>(&input)) {
      apply_sensor(*sample);
    } else {
      const auto& key = std::get<TriggerInput>(input).key;
      try {
        trigger(key);
      } catch (const Error& e) {
        spdlog::warn("dropping queued trigger: {}", e.what());
      }
    }
  }

  ++ticks_;
  StateFrame frame;
  frame.tick = ticks_ - 1;
  frame.time_ms = static_cast<double>(ticks_) * dt_ms();
  frame.effects = advance_timeline();
  frame.puppet = puppet_;
  const AffectEstimate affect = affect_.estimate();
  frame.valence = affect.valence;
  frame.arousal = affect.arousal;
  if (!corpus_.commands.empty()) {
    frame.recommendations = recommend3(corpus_, affect.valence, affect.arousal, config_.recommend);
  } else {
    frame.recommendations.polarity = affect.valence >= kValenceNeutral ? Polarity::Positive : Polarity::Negative;
  }
  return frame;
}

}  // namespace puppetwire
