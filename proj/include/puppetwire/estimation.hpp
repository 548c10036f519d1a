#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "puppetwire/error.hpp"
#include "puppetwire/rng.hpp"
#include "puppetwire/types.hpp"

namespace puppetwire {

/// Order of the emotion-probability vector delivered by the recognizer.
enum class EmotionClass { Happy, Sad, Fearful, Angry, Surprised, Disgusted, Neutral };
inline constexpr std::size_t kEmotionClassCount = 7;
using EmotionProbs = std::array<double, kEmotionClassCount>;

/// Right semicircle of the circumplex. Neutral is neither.
constexpr bool is_positive_emotion(EmotionClass e) {
  return e == EmotionClass::Happy || e == EmotionClass::Surprised;
}

/// One reading from the client's external detectors. Any subset of fields
/// may be present.
struct SensorSample {
  std::int64_t timestamp_ms = 0;
  std::optional<std::vector<Vec2>> landmarks;
  std::optional<EmotionProbs> emotion_probs;
  std::optional<double> volume;  // RMS amplitude
  std::optional<double> bpm;
  std::optional<bool> eye_open_l;
  std::optional<bool> eye_open_r;

  bool operator==(const SensorSample&) const = default;
};

/// Empty when the sample is usable; otherwise one diagnostic per bad field.
Diagnostics validate_sample(const SensorSample& sample);

inline constexpr double kMouthOpenVolume = 0.02;
enum class MouthState { Closed, Open };

/// Open iff volume is strictly larger than 0.02.
MouthState mouth_state(double volume);

/// Mean of the landmark positions. Throws EMPTY_LANDMARKS.
Vec2 landmark_mean(std::span<const Vec2> landmarks);

/// V = floor(P_max * 4) + 5 for a positive argmax, + 1 for a negative one,
/// 5 when neutral holds the strict maximum. Throws INVALID_PROBS.
int encode_valence(const EmotionProbs& probs);

inline constexpr double kArousalGamma = 1.05;

/// 70 + gamma * (bpm - 60), neither clamped nor rounded. Throws INVALID_BPM.
double arousal_raw(double bpm, double gamma = kArousalGamma);

/// arousal_raw clamped to [50, 90] and rounded half up. Throws INVALID_BPM.
int estimate_arousal(double bpm, double gamma = kArousalGamma);

struct FaceFilterConfig {
  std::size_t particle_count = 500;
  double process_noise = 0.01;      // delta, std dev of the velocity kick per update
  double observation_noise = 0.02;  // sigma_obs
};

/// Hidden state h = [x, y, dx/dt, dy/dt].
struct FaceParticle {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  bool operator==(const FaceParticle&) const = default;
};

/// Condensation (sampling-importance-resampling) tracker of the face
/// position under a random-walk velocity model.
class FaceFilter {
 public:
  explicit FaceFilter(std::uint64_t seed, FaceFilterConfig config = {});

  /// One predict / weight / resample cycle against the landmark mean.
  /// Returns the weighted mean position clamped to the unit square.
  Vec2 update(std::span<const Vec2> landmarks);

  Vec2 estimate() const { return estimate_; }
  const std::vector<FaceParticle>& particles() const { return particles_; }
  const std::vector<double>& weights() const { return weights_; }
  const FaceFilterConfig& config() const { return config_; }

 private:
  FaceFilterConfig config_;
  Rng rng_;
  std::vector<FaceParticle> particles_;
  std::vector<double> weights_;
  Vec2 estimate_{0.5, 0.5};
};

struct AffectEstimate {
  int valence = 5;
  int arousal = 70;
  std::int64_t valence_timestamp_ms = -1;  // -1 until a reading arrives
  std::int64_t arousal_timestamp_ms = -1;

  bool operator==(const AffectEstimate&) const = default;
};

/// Exponential moving average over per-sample V and A estimates, seeded at
/// the scale defaults (5, 70).
class AffectSmoother {
 public:
  static constexpr double kFactor = 0.2;

  void observe_valence(int valence, std::int64_t timestamp_ms);
  void observe_arousal(int arousal, std::int64_t timestamp_ms);

  double valence() const { return valence_; }
  double arousal() const { return arousal_; }
  /// Smoothed values rounded to the integer scales.
  AffectEstimate estimate() const;

 private:
  double valence_ = 5.0;
  double arousal_ = 70.0;
  std::int64_t valence_ts_ = -1;
  std::int64_t arousal_ts_ = -1;
};

}  // namespace puppetwire
