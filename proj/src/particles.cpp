#include "puppetwire/particles.hpp"

#include <algorithm>
#include <cmath>

namespace puppetwire {

EmitterConfig EmitterConfig::defaults(ParticlePattern pattern, Vec2 emitter, double speed, std::string texture_id) {
  EmitterConfig c;
  c.pattern = pattern;
  c.emitter = emitter;
  c.speed = speed;
  c.noise_sigma = 0.05 * speed;
  c.texture_id = std::move(texture_id);
  return c;
}

bool EmitterConfig::valid() const {
  return half_angle > 0.0 && half_angle <= std::numbers::pi && spawn_rate > 0.0 && lifetime_ms > 0.0 &&
         gravity >= 0.0 && noise_sigma >= 0.0;
}

Particle spawn(const EmitterConfig& config, Rng& rng) {
  Particle p;
  switch (config.pattern) {
    case ParticlePattern::Jet: {
      const double phi = rng.uniform(-config.half_angle, config.half_angle);
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      const Vec2 axis = config.direction;
      p.position = config.emitter;
      p.velocity = {config.speed * (axis.x * c - axis.y * s), config.speed * (axis.x * s + axis.y * c)};
      break;
    }
    case ParticlePattern::Exploding: {
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      p.position = config.emitter;
      p.velocity = {config.speed * std::cos(phi), config.speed * std::sin(phi)};
      break;
    }
    case ParticlePattern::Rain: {
      const double L = config.segment_half_length;
      p.position = {rng.uniform(config.emitter.x - L, config.emitter.x + L), config.emitter.y};
      p.velocity = {0.0, 0.0};
      break;
    }
  }
  if (config.noise_sigma > 0.0) {
    p.velocity.x += rng.normal(0.0, config.noise_sigma);
    p.velocity.y += rng.normal(0.0, config.noise_sigma);
  }
  return p;
}

void step(std::vector<Particle>& particles, const EmitterConfig& config, double dt_ms) {
  std::erase_if(particles, [&](const Particle& p) { return p.age_ms >= config.lifetime_ms; });
  const double dt = dt_ms / 1000.0;
  const bool gravity = config.pattern != ParticlePattern::Jet;
  for (auto& p : particles) {
    if (gravity) p.velocity.y = p.velocity.y + config.gravity * dt;
    p.position.x = p.position.x + p.velocity.x * dt;
    p.position.y = p.position.y + p.velocity.y * dt;
    p.age_ms += dt_ms;
    p.alpha = std::max(0.0, 1.0 - p.age_ms / config.lifetime_ms);
  }
}

Emitter::Emitter(EmitterConfig config, std::uint64_t seed) : config_(std::move(config)), rng_(seed) {}

void Emitter::advance(double dt_ms) {
  spawn_credit_ += config_.spawn_rate * dt_ms / 1000.0;
  while (spawn_credit_ >= 1.0) {
    spawn_credit_ -= 1.0;
    particles_.push_back(spawn(config_, rng_));
  }
  if (particles_.size() > kMaxLiveParticles) {
    const auto excess = particles_.size() - kMaxLiveParticles;
    particles_.erase(particles_.begin(), particles_.begin() + static_cast<std::ptrdiff_t>(excess));
    evicted_ += excess;
  }
  step(particles_, config_, dt_ms);
}

}  // namespace puppetwire
