#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "puppetwire/behavior_tree.hpp"
#include "puppetwire/emotion.hpp"
#include "puppetwire/rng.hpp"

namespace puppetwire::testing {

inline std::string data_path(const std::string& rel) { return std::string(PUPPETWIRE_DATA_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TreeNode node(std::string id, NodeParams params, std::vector<std::string> children = {}) {
  return TreeNode{std::move(id), std::move(params), std::move(children)};
}

inline TreeNode seq(std::string id, Component c, std::vector<std::string> children = {}) {
  return node(std::move(id), SequenceParams{c}, std::move(children));
}

inline TreeNode root(std::vector<std::string> children, std::string id = "root") {
  return node(std::move(id), RootParams{}, std::move(children));
}

inline DanmakuAction danmaku(std::string text, std::optional<std::int64_t> duration = 2000) {
  DanmakuAction a;
  a.text = std::move(text);
  a.duration_ms = duration;
  return a;
}

inline SwapAction swap(EmotionTemplate e, std::optional<std::int64_t> duration = 2000) { return {e, duration}; }

inline ParticleAction particle(ParticlePattern p, std::optional<std::int64_t> duration = 2000) {
  ParticleAction a;
  a.texture_id = "star";
  a.pattern = p;
  a.duration_ms = duration;
  return a;
}

inline VibrationAction vibration(Level f = Level::Med, Level a = Level::Med, std::int64_t duration = 2000) {
  return {f, a, Axis::X, duration};
}

inline SoundAction sound(std::string id = "laugh", std::int64_t duration = 2000) { return {std::move(id), duration}; }

/// root+ -> sequence+(TEXT) -> danmaku("hello")
inline BehaviorTree minimal_tree() {
  return BehaviorTree{{root({"s"}), seq("s", Component::Text, {"d"}), node("d", Action{danmaku("hello")})}, "root"};
}

inline EmotionCommand command(std::string key, int v, int a, BehaviorTree tree = minimal_tree(),
                              std::string semantic = "label") {
  return EmotionCommand{std::move(key), std::move(semantic), v, a, std::move(tree)};
}

inline BehaviorTree swap_tree(EmotionTemplate e, std::int64_t duration = 2000) {
  return BehaviorTree{{root({"f"}), seq("f", Component::Face, {"sw"}), node("sw", Action{swap(e, duration)})}, "root"};
}

// ---------------------------------------------------------------------------
// Randomized generators for property tests
// ---------------------------------------------------------------------------

inline std::string random_text(Rng& rng) {
  static const std::vector<std::string> kPieces{"a", "B", "z", " ", "!", "\xe5\x93\x88", "\xf0\x9f\x98\x82",
                                                "\"", "\\", "7", "\xc3\xa9"};
  const int len = 1 + static_cast<int>(rng.uniform() * 8);
  std::string s;
  for (int i = 0; i < len; ++i) s += kPieces[static_cast<std::size_t>(rng.uniform() * kPieces.size())];
  return s;
}

inline std::optional<std::int64_t> random_duration(Rng& rng) {
  if (rng.uniform() < 0.2) return std::nullopt;
  return 1 + static_cast<std::int64_t>(rng.uniform() * 5000);
}

template <typename E>
E pick(Rng& rng, std::initializer_list<E> values) {
  return *(values.begin() + static_cast<std::ptrdiff_t>(rng.uniform() * values.size()));
}

inline Action random_action(Rng& rng, Component component) {
  const double r = rng.uniform();
  if (r < 0.25) {
    VibrationAction v{pick(rng, {Level::Low, Level::Med, Level::High}), pick(rng, {Level::Low, Level::Med, Level::High}),
                      pick(rng, {Axis::X, Axis::Y}), random_duration(rng)};
    return v;
  }
  switch (component) {
    case Component::Face:
      if (r < 0.6) {
        return SwapAction{pick(rng, {EmotionTemplate::Happy, EmotionTemplate::Sad, EmotionTemplate::Fearful,
                                     EmotionTemplate::Angry, EmotionTemplate::Surprised, EmotionTemplate::Disgusted}),
                          random_duration(rng)};
      } else {
        const auto reg = sound_registry();
        return SoundAction{std::string(reg[static_cast<std::size_t>(rng.uniform() * reg.size())]),
                           random_duration(rng)};
      }
    case Component::Background:
      if (r < 0.7) {
        ParticleAction p;
        p.texture_id = "tex" + std::to_string(static_cast<int>(rng.uniform() * 6));
        p.emitter = {rng.uniform(), rng.uniform()};
        p.pattern = pick(rng, {ParticlePattern::Jet, ParticlePattern::Exploding, ParticlePattern::Rain});
        p.speed = 0.01 + rng.uniform();
        p.duration_ms = random_duration(rng);
        return p;
      } else {
        return BackgroundImageAction{"bg" + std::to_string(static_cast<int>(rng.uniform() * 4))};
      }
    case Component::Text: {
      DanmakuAction d;
      d.text = random_text(rng);
      d.font_size = 8.0 + rng.uniform() * 64.0;
      d.color = {static_cast<std::uint8_t>(rng.uniform() * 256), static_cast<std::uint8_t>(rng.uniform() * 256),
                 static_cast<std::uint8_t>(rng.uniform() * 256)};
      d.direction = pick(rng, {Direction::LeftToRight, Direction::RightToLeft});
      d.shift = rng.uniform();
      d.duration_ms = random_duration(rng);
      return d;
    }
  }
  return VibrationAction{};
}

/// A valid tree with ids "n<counter>", nodes listed in shuffled-ish order.
inline BehaviorTree random_tree(Rng& rng) {
  BehaviorTree tree;
  int counter = 0;
  auto next_id = [&] { return "n" + std::to_string(counter++); };
  TreeNode r = root({}, next_id());
  tree.root = r.id;
  std::vector<TreeNode> rest;
  const int sequences = static_cast<int>(rng.uniform() * 4);
  for (int s = 0; s < sequences; ++s) {
    const Component c = pick(rng, {Component::Face, Component::Background, Component::Text});
    TreeNode sq = seq(next_id(), c);
    const int actions = static_cast<int>(rng.uniform() * 5);
    for (int a = 0; a < actions; ++a) {
      TreeNode an = node(next_id(), random_action(rng, c));
      sq.children.push_back(an.id);
      rest.push_back(std::move(an));
    }
    r.children.push_back(sq.id);
    rest.push_back(std::move(sq));
  }
  if (rng.uniform() < 0.5) std::reverse(rest.begin(), rest.end());
  tree.nodes.push_back(std::move(r));
  for (auto& n : rest) tree.nodes.push_back(std::move(n));
  return tree;
}

inline CommandCorpus random_corpus(Rng& rng, std::size_t max_commands = 12) {
  CommandCorpus c;
  const auto n = static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_commands + 1));
  std::vector<char> keys;
  for (char k = 0x20; k <= 0x7E; ++k) keys.push_back(k);
  for (std::size_t i = 0; i < n && !keys.empty(); ++i) {
    const auto at = static_cast<std::size_t>(rng.uniform() * keys.size());
    const char key = keys[at];
    keys.erase(keys.begin() + static_cast<std::ptrdiff_t>(at));
    c.commands.push_back(command(std::string(1, key), 1 + static_cast<int>(rng.uniform() * 9),
                                 50 + static_cast<int>(rng.uniform() * 41), random_tree(rng), random_text(rng)));
  }
  if (rng.uniform() < 0.5) c.default_background = random_text(rng);
  return c;
}

}  // namespace puppetwire::testing
