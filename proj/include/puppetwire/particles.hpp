#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "puppetwire/rng.hpp"
#include "puppetwire/types.hpp"

namespace puppetwire {

inline constexpr std::size_t kMaxLiveParticles = 1000;

struct EmitterConfig {
  ParticlePattern pattern = ParticlePattern::Exploding;
  Vec2 emitter{0.5, 0.5};
  double speed = 0.3;                         // scene units / s
  double half_angle = std::numbers::pi / 6;   // jet cone half-angle, radians
  Vec2 direction{0.0, -1.0};                  // jet axis, unit vector
  double segment_half_length = 0.25;          // rain span is [E.x - L, E.x + L]
  double spawn_rate = 30.0;                   // particles / s
  double lifetime_ms = 1500.0;
  double gravity = 0.5;                       // scene units / s^2, +y
  double noise_sigma = 0.05 * 0.3;            // velocity noise std dev, scene units / s
  std::string texture_id;

  /// Defaults for a given pattern and speed (noise scales with speed).
  static EmitterConfig defaults(ParticlePattern pattern, Vec2 emitter, double speed, std::string texture_id = {});

  bool valid() const;
};

struct Particle {
  Vec2 position;
  Vec2 velocity;
  double age_ms = 0.0;
  double alpha = 1.0;

  bool operator==(const Particle&) const = default;
};

/// Draws one particle at age 0 according to the pattern's spawn rule.
Particle spawn(const EmitterConfig& config, Rng& rng);

/// One fixed step. Particles already at or past their lifetime are removed
/// first; survivors age by dt and move with semi-implicit Euler (gravity on
/// the velocity, then velocity on the position; jets are force free).
void step(std::vector<Particle>& particles, const EmitterConfig& config, double dt_ms);

/// A live emitter: spawns at the configured rate and steps its particles.
class Emitter {
 public:
  Emitter(EmitterConfig config, std::uint64_t seed);

  /// Spawns the particles due in this interval, then steps everything.
  void advance(double dt_ms);

  const std::vector<Particle>& particles() const { return particles_; }
  const EmitterConfig& config() const { return config_; }
  /// Particles evicted because the live cap was reached.
  std::uint64_t evicted() const { return evicted_; }

 private:
  EmitterConfig config_;
  Rng rng_;
  std::vector<Particle> particles_;  // oldest first
  double spawn_credit_ = 0.0;
  std::uint64_t evicted_ = 0;
};

}  // namespace puppetwire
