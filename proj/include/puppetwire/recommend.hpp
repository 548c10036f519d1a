#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "puppetwire/emotion.hpp"

namespace puppetwire {

struct RecommendConfig {
  double alpha = 0.5;  // arousal weight
  double valence_lo = 1.0;
  double valence_hi = 9.0;
  double arousal_lo = 50.0;
  double arousal_hi = 90.0;
  std::size_t k = 3;

  bool valid() const { return alpha >= 0.0 && k >= 1 && valence_hi > valence_lo && arousal_hi > arousal_lo; }
};

enum class Polarity { Positive, Negative };
std::string_view to_string(Polarity p);

struct Recommendation {
  std::vector<std::string> keys;
  std::vector<double> distances;
  Polarity polarity = Polarity::Positive;
  bool fallback_used = false;

  bool operator==(const Recommendation&) const = default;
};

/// Weighted Euclidean distance with both axes normalized by their full
/// range width: sqrt(((V - v) / 8)^2 + alpha * ((A - a) / 40)^2).
double distance(double valence, double arousal, double cmd_valence, double cmd_arousal,
                const RecommendConfig& cfg = {});

/// Top-k nearest commands within the pool of matching polarity (v >= 5 when
/// V >= 5, v < 5 otherwise). Ties go to the smaller |V - v|, then corpus
/// order. An empty pool falls back to the whole corpus. Throws EMPTY_CORPUS.
Recommendation recommend3(const CommandCorpus& corpus, double valence, double arousal,
                          const RecommendConfig& cfg = {});

/// Reference answer: scores every command, sorts the complete list and
/// takes the first k of the matching polarity. Slow but obviously correct.
Recommendation brute_force_recommend(const CommandCorpus& corpus, double valence, double arousal,
                                     const RecommendConfig& cfg = {});

}  // namespace puppetwire
