#include "puppetwire/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace puppetwire {

std::string_view to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

double distance(double valence, double arousal, double cmd_valence, double cmd_arousal, const RecommendConfig& cfg) {
  // Scaled by both widths before the single division so that integer and
  // half-integer inputs produce exact squares and exact ties compare equal.
  const double wv = cfg.valence_hi - cfg.valence_lo;
  const double wa = cfg.arousal_hi - cfg.arousal_lo;
  const double dv = (valence - cmd_valence) * wa;
  const double da = (arousal - cmd_arousal) * wv;
  return std::sqrt(dv * dv + cfg.alpha * da * da) / (wv * wa);
}

Recommendation recommend3(const CommandCorpus& corpus, double valence, double arousal, const RecommendConfig& cfg) {
  if (corpus.commands.empty()) throw Error(Code::EmptyCorpus, "cannot recommend from an empty corpus");
  Recommendation rec;
  rec.polarity = valence >= kValenceNeutral ? Polarity::Positive : Polarity::Negative;
  auto pool = rec.polarity == Polarity::Positive ? positive_commands(corpus) : negative_commands(corpus);
  if (pool.empty()) {
    rec.fallback_used = true;
    pool.resize(corpus.commands.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  }

  struct Scored {
    double d;
    double dv;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (std::size_t i : pool) {
    const auto& c = corpus.commands[i];
    scored.push_back({distance(valence, arousal, c.valence, c.arousal, cfg), std::abs(valence - c.valence), i});
  }
  const std::size_t take = std::min(cfg.k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    [](const Scored& a, const Scored& b) {
                      return std::tie(a.d, a.dv, a.index) < std::tie(b.d, b.dv, b.index);
                    });
  for (std::size_t i = 0; i < take; ++i) {
    rec.keys.push_back(corpus.commands[scored[i].index].key);
    rec.distances.push_back(scored[i].d);
  }
  return rec;
}

Recommendation brute_force_recommend(const CommandCorpus& corpus, double valence, double arousal,
                                     const RecommendConfig& cfg) {
  if (corpus.commands.empty()) throw Error(Code::EmptyCorpus, "cannot recommend from an empty corpus");
  const bool positive = valence >= kValenceNeutral;
  bool any_match = false;
  for (const auto& c : corpus.commands) any_match = any_match || ((c.valence >= 5) == positive);

  // Score everything, stable sort keeps corpus order among exact ties.
  std::vector<std::pair<std::size_t, double>> all;
  for (std::size_t i = 0; i < corpus.commands.size(); ++i) {
    const auto& c = corpus.commands[i];
    all.emplace_back(i, distance(valence, arousal, c.valence, c.arousal, cfg));
  }
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return std::abs(valence - corpus.commands[a.first].valence) < std::abs(valence - corpus.commands[b.first].valence);
  });

  Recommendation rec;
  rec.polarity = positive ? Polarity::Positive : Polarity::Negative;
  rec.fallback_used = !any_match;
  for (const auto& [index, d] : all) {
    const auto& c = corpus.commands[index];
    if (any_match && (c.valence >= 5) != positive) continue;
    if (rec.keys.size() == cfg.k) break;
    rec.keys.push_back(c.key);
    rec.distances.push_back(d);
  }
  return rec;
}

}  // namespace puppetwire
