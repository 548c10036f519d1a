#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "puppetwire/estimation.hpp"

namespace pw = puppetwire;

namespace {

pw::EmotionProbs peaked(pw::EmotionClass cls, double p) {
  pw::EmotionProbs probs;
  probs.fill((1.0 - p) / 6.0);
  probs[static_cast<std::size_t>(cls)] = p;
  return probs;
}

}  // namespace

TEST(EncodeValence, WorkedValues) {
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Happy, 0.8)), 8);
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Sad, 0.8)), 4);
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Happy, 1.0)), 9);
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Sad, 1.0)), 5);
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Surprised, 0.5)), 7);
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Disgusted, 0.3)), 2);
}

TEST(EncodeValence, NeutralStrictMaximum) {
  EXPECT_EQ(pw::encode_valence(peaked(pw::EmotionClass::Neutral, 0.9)), 5);
  // a tie with a basic emotion is not a strict neutral maximum
  pw::EmotionProbs tie{0.4, 0.1, 0.05, 0.05, 0.0, 0.0, 0.4};
  EXPECT_EQ(pw::encode_valence(tie), 6);
}

TEST(EncodeValence, RejectsBadVectors) {
  EXPECT_THROW(pw::encode_valence({0.5, 0.5, 0.5, 0, 0, 0, 0}), pw::Error);
  EXPECT_THROW(pw::encode_valence({-0.1, 0.6, 0.5, 0, 0, 0, 0}), pw::Error);
  EXPECT_THROW(pw::encode_valence({NAN, 1.0, 0, 0, 0, 0, 0}), pw::Error);
  try {
    pw::encode_valence({0, 0, 0, 0, 0, 0, 0});
  } catch (const pw::Error& e) {
    EXPECT_EQ(e.code(), pw::Code::InvalidProbs);
  }
  EXPECT_NO_THROW(pw::encode_valence({0.995, 0, 0, 0, 0, 0, 0}));
}

TEST(EstimateArousal, WorkedValues) {
  EXPECT_EQ(pw::estimate_arousal(60), 70);
  EXPECT_NEAR(pw::arousal_raw(80), 91.0, 1e-12);
  EXPECT_EQ(pw::estimate_arousal(80), 90);
  EXPECT_NEAR(pw::arousal_raw(40), 49.0, 1e-12);
  EXPECT_EQ(pw::estimate_arousal(40), 50);
  EXPECT_THROW(pw::estimate_arousal(0), pw::Error);
  EXPECT_THROW(pw::estimate_arousal(-5), pw::Error);
}

TEST(EstimateArousal, HalfwayRoundsUp) {
  // 70 + 1.05 * 10 = 80.5 and 70 - 1.05 * 10 = 59.5
  EXPECT_EQ(pw::estimate_arousal(70), 81);
  EXPECT_EQ(pw::estimate_arousal(50), 60);
}

TEST(MouthState, StrictThreshold) {
  EXPECT_EQ(pw::mouth_state(0.05), pw::MouthState::Open);
  EXPECT_EQ(pw::mouth_state(0.02), pw::MouthState::Closed);
  EXPECT_EQ(pw::mouth_state(0.0), pw::MouthState::Closed);
  EXPECT_EQ(pw::mouth_state(std::nextafter(0.02, 1.0)), pw::MouthState::Open);
}

TEST(LandmarkMean, Examples) {
  const std::vector<pw::Vec2> one{{0.3, 0.7}};
  EXPECT_EQ(pw::landmark_mean(one), (pw::Vec2{0.3, 0.7}));
  const std::vector<pw::Vec2> same(71, pw::Vec2{0.25, 0.625});
  EXPECT_EQ(pw::landmark_mean(same), (pw::Vec2{0.25, 0.625}));
  EXPECT_THROW(pw::landmark_mean({}), pw::Error);
}

TEST(ValidateSample, FieldChecks) {
  EXPECT_FALSE(pw::validate_sample(pw::SensorSample{}).empty());
  pw::SensorSample ok;
  ok.volume = 0.1;
  EXPECT_TRUE(pw::validate_sample(ok).empty());
  pw::SensorSample bad_bpm;
  bad_bpm.bpm = 0.0;
  ASSERT_EQ(pw::validate_sample(bad_bpm).size(), 1u);
  EXPECT_EQ(pw::validate_sample(bad_bpm)[0].code, pw::Code::InvalidBpm);
  pw::SensorSample empty_landmarks;
  empty_landmarks.landmarks = std::vector<pw::Vec2>{};
  EXPECT_EQ(pw::validate_sample(empty_landmarks)[0].code, pw::Code::EmptyLandmarks);
}

TEST(FaceFilter, ConvergesOnConstantMeasurement) {
  pw::FaceFilter filter(0);
  const std::vector<pw::Vec2> m{{0.5, 0.5}};
  pw::Vec2 est;
  for (int i = 0; i < 100; ++i) est = filter.update(m);
  EXPECT_LT(std::hypot(est.x - 0.5, est.y - 0.5), 0.02);
  EXPECT_EQ(filter.particles().size(), 500u);
}

TEST(FaceFilter, ConvergesFromSeveralSeedsAndTargets) {
  for (std::uint64_t seed : {1u, 2u, 3u, 17u}) {
    for (pw::Vec2 target : {pw::Vec2{0.2, 0.8}, pw::Vec2{0.9, 0.1}}) {
      pw::FaceFilter filter(seed);
      const std::vector<pw::Vec2> m{target};
      pw::Vec2 est;
      for (int i = 0; i < 100; ++i) est = filter.update(m);
      EXPECT_LT(std::hypot(est.x - target.x, est.y - target.y), 0.02) << "seed " << seed;
    }
  }
}

TEST(FaceFilter, WeightsStayNormalized) {
  pw::FaceFilter filter(4);
  pw::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const std::vector<pw::Vec2> m{{rng.uniform(), rng.uniform()}};
    filter.update(m);
    double sum = 0.0;
    for (double w : filter.weights()) {
      ASSERT_GE(w, 0.0);
      sum += w;
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
    const auto e = filter.estimate();
    ASSERT_TRUE(e.x >= 0.0 && e.x <= 1.0 && e.y >= 0.0 && e.y <= 1.0);
  }
}

TEST(FaceFilter, DeterministicUnderSeed) {
  pw::FaceFilter a(11), b(11), c(12);
  const std::vector<pw::Vec2> m{{0.4, 0.6}, {0.5, 0.7}};
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(a.update(m), b.update(m));
    c.update(m);
  }
  EXPECT_EQ(a.particles(), b.particles());
  EXPECT_NE(a.particles(), c.particles());
}

TEST(FaceFilter, TracksCircularTrajectory) {
  pw::FaceFilter filter(0);
  pw::Rng noise(0xC1C1E);
  double se = 0.0;
  constexpr int kTicks = 240;
  for (int k = 0; k < kTicks; ++k) {
    const double phase = 2.0 * std::numbers::pi * (k / 60.0) / 4.0;
    const pw::Vec2 truth{0.5 + 0.2 * std::cos(phase), 0.5 + 0.2 * std::sin(phase)};
    const std::vector<pw::Vec2> m{{truth.x + noise.normal(0.0, 0.02), truth.y + noise.normal(0.0, 0.02)}};
    const auto est = filter.update(m);
    se += (est.x - truth.x) * (est.x - truth.x) + (est.y - truth.y) * (est.y - truth.y);
  }
  EXPECT_LT(std::sqrt(se / kTicks), 0.05);
}

TEST(AffectSmoother, MovesTowardObservations) {
  pw::AffectSmoother s;
  EXPECT_EQ(s.estimate().valence, 5);
  EXPECT_EQ(s.estimate().arousal, 70);
  EXPECT_EQ(s.estimate().valence_timestamp_ms, -1);
  s.observe_valence(9, 100);
  EXPECT_DOUBLE_EQ(s.valence(), 5.8);
  s.observe_arousal(90, 120);
  EXPECT_DOUBLE_EQ(s.arousal(), 74.0);
  EXPECT_EQ(s.estimate().valence, 6);
  EXPECT_EQ(s.estimate().arousal_timestamp_ms, 120);
  for (int i = 0; i < 200; ++i) s.observe_arousal(90, 200 + i);
  EXPECT_EQ(s.estimate().arousal, 90);
}
