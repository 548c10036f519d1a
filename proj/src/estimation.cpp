#include "puppetwire/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace puppetwire {
namespace {

bool valid_probs(const EmotionProbs& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) return false;
    sum += p;
  }
  return sum >= 0.99 && sum <= 1.01;
}

}  // namespace

Diagnostics validate_sample(const SensorSample& s) {
  Diagnostics out;
  auto bad = [&](Code code, const char* field, const char* what) { out.push_back({code, {}, field, what}); };
  const bool any = s.landmarks || s.emotion_probs || s.volume || s.bpm || s.eye_open_l || s.eye_open_r;
  if (!any) bad(Code::InvalidSample, "sample", "sample carries no fields");
  if (s.landmarks) {
    if (s.landmarks->empty()) bad(Code::EmptyLandmarks, "landmarks", "landmark list is empty");
    for (const auto& l : *s.landmarks) {
      if (!std::isfinite(l.x) || !std::isfinite(l.y)) {
        bad(Code::InvalidSample, "landmarks", "landmark is not finite");
        break;
      }
    }
  }
  if (s.emotion_probs && !valid_probs(*s.emotion_probs)) {
    bad(Code::InvalidProbs, "emotion_probs", "probabilities must be >= 0 and sum to 1 +/- 0.01");
  }
  if (s.volume && !(std::isfinite(*s.volume) && *s.volume >= 0.0)) bad(Code::InvalidSample, "volume", "volume < 0");
  if (s.bpm && !(std::isfinite(*s.bpm) && *s.bpm > 0.0)) bad(Code::InvalidBpm, "bpm", "bpm must be > 0");
  return out;
}

MouthState mouth_state(double volume) { return volume > kMouthOpenVolume ? MouthState::Open : MouthState::Closed; }

Vec2 landmark_mean(std::span<const Vec2> landmarks) {
  if (landmarks.empty()) throw Error(Code::EmptyLandmarks, "no landmarks to average");
  Vec2 sum;
  for (const auto& l : landmarks) {
    sum.x += l.x;
    sum.y += l.y;
  }
  const auto n = static_cast<double>(landmarks.size());
  return {sum.x / n, sum.y / n};
}

int encode_valence(const EmotionProbs& probs) {
  if (!valid_probs(probs)) throw Error(Code::InvalidProbs, "emotion probabilities are invalid");
  constexpr auto kNeutral = static_cast<std::size_t>(EmotionClass::Neutral);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNeutral; ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  const double p_max = probs[best];
  if (probs[kNeutral] > p_max) return 5;
  const int base = is_positive_emotion(static_cast<EmotionClass>(best)) ? 5 : 1;
  return static_cast<int>(std::floor(p_max * 4.0)) + base;
}

double arousal_raw(double bpm, double gamma) {
  if (!(std::isfinite(bpm) && bpm > 0.0)) throw Error(Code::InvalidBpm, "bpm must be a positive number");
  return 70.0 + gamma * (bpm - 60.0);
}

int estimate_arousal(double bpm, double gamma) {
  const double a = std::clamp(arousal_raw(bpm, gamma), 50.0, 90.0);
  return static_cast<int>(std::lround(a));
}

FaceFilter::FaceFilter(std::uint64_t seed, FaceFilterConfig config) : config_(config), rng_(seed) {
  particles_.resize(config_.particle_count);
  for (auto& p : particles_) {
    p.x = rng_.uniform();
    p.y = rng_.uniform();
  }
  weights_.assign(config_.particle_count, 1.0 / static_cast<double>(config_.particle_count));
}

Vec2 FaceFilter::update(std::span<const Vec2> landmarks) {
  const Vec2 m = landmark_mean(landmarks);
  const std::size_t n = particles_.size();

  // Predict: dx/dt, dy/dt follow a Gaussian random walk.
  for (auto& p : particles_) {
    p.x += p.vx;
    p.y += p.vy;
    p.vx += rng_.normal(0.0, config_.process_noise);
    p.vy += rng_.normal(0.0, config_.process_noise);
  }

  // Weight by the Gaussian likelihood of m, in the log domain.
  const double inv_two_var = 1.0 / (2.0 * config_.observation_noise * config_.observation_noise);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = particles_[i].x - m.x;
    const double dy = particles_[i].y - m.y;
    weights_[i] = -(dx * dx + dy * dy) * inv_two_var;
    max_log = std::max(max_log, weights_[i]);
  }
  double total = 0.0;
  for (auto& w : weights_) {
    w = std::exp(w - max_log);
    total += w;
  }
  Vec2 mean;
  for (std::size_t i = 0; i < n; ++i) {
    weights_[i] /= total;
    mean.x += weights_[i] * particles_[i].x;
    mean.y += weights_[i] * particles_[i].y;
  }
  estimate_ = {std::clamp(mean.x, 0.0, 1.0), std::clamp(mean.y, 0.0, 1.0)};

  // Systematic resampling.
  std::vector<FaceParticle> next;
  next.reserve(n);
  const double step = 1.0 / static_cast<double>(n);
  double target = rng_.uniform() * step;
  double cumulative = weights_[0];
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (target > cumulative && j + 1 < n) cumulative += weights_[++j];
    next.push_back(particles_[j]);
    target += step;
  }
  particles_ = std::move(next);
  std::fill(weights_.begin(), weights_.end(), step);
  return estimate_;
}

void AffectSmoother::observe_valence(int valence, std::int64_t timestamp_ms) {
  valence_ += kFactor * (static_cast<double>(valence) - valence_);
  valence_ts_ = timestamp_ms;
}

void AffectSmoother::observe_arousal(int arousal, std::int64_t timestamp_ms) {
  arousal_ += kFactor * (static_cast<double>(arousal) - arousal_);
  arousal_ts_ = timestamp_ms;
}

AffectEstimate AffectSmoother::estimate() const {
  AffectEstimate e;
  e.valence = std::clamp(static_cast<int>(std::lround(valence_)), 1, 9);
  e.arousal = std::clamp(static_cast<int>(std::lround(arousal_)), 50, 90);
  e.valence_timestamp_ms = valence_ts_;
  e.arousal_timestamp_ms = arousal_ts_;
  return e;
}

}  // namespace puppetwire
