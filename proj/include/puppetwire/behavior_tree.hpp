#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "puppetwire/error.hpp"
#include "puppetwire/types.hpp"

namespace puppetwire {

inline constexpr std::int64_t kDefaultActionDurationMs = 2000;
/// Danmaku traversal speed used when no duration is given, in scene widths per second.
inline constexpr double kDanmakuTraversalSpeed = 0.25;
/// Points per scene width; converts font sizes into scene units.
inline constexpr double kSceneWidthPoints = 1000.0;

struct DanmakuAction {
  std::string text;
  double font_size = 24.0;
  Rgb color{255, 255, 255};
  Direction direction = Direction::RightToLeft;
  double shift = 0.0;
  std::optional<std::int64_t> duration_ms;

  bool operator==(const DanmakuAction&) const = default;
};

struct SwapAction {
  EmotionTemplate emotion = EmotionTemplate::Happy;
  std::optional<std::int64_t> duration_ms;

  bool operator==(const SwapAction&) const = default;
};

struct ParticleAction {
  std::string texture_id;
  Vec2 emitter{0.5, 0.5};
  ParticlePattern pattern = ParticlePattern::Exploding;
  double speed = 0.3;
  std::optional<std::int64_t> duration_ms;

  bool operator==(const ParticleAction&) const = default;
};

struct VibrationAction {
  Level frequency = Level::Med;
  Level amplitude = Level::Med;
  Axis axis = Axis::X;
  std::optional<std::int64_t> duration_ms;

  bool operator==(const VibrationAction&) const = default;
};

struct SoundAction {
  std::string sound_id;
  std::optional<std::int64_t> duration_ms;

  bool operator==(const SoundAction&) const = default;
};

/// Holds from its start until the owning timeline ends.
struct BackgroundImageAction {
  std::string image_id;

  bool operator==(const BackgroundImageAction&) const = default;
};

using Action =
    std::variant<DanmakuAction, SwapAction, ParticleAction, VibrationAction, SoundAction, BackgroundImageAction>;

struct RootParams {
  bool operator==(const RootParams&) const = default;
};

struct SequenceParams {
  Component component = Component::Face;

  bool operator==(const SequenceParams&) const = default;
};

using NodeParams = std::variant<RootParams, SequenceParams, Action>;

enum class NodeKind { RootPlus, SequencePlus, Action };

struct TreeNode {
  std::string id;
  NodeParams params;
  std::vector<std::string> children;

  NodeKind kind() const { return static_cast<NodeKind>(params.index()); }
  bool operator==(const TreeNode&) const = default;
};

struct BehaviorTree {
  std::vector<TreeNode> nodes;
  std::string root;

  /// First node with the given id, or nullptr.
  const TreeNode* find(std::string_view id) const;
  bool operator==(const BehaviorTree&) const = default;
};

/// Kind string as used in tree documents ("root+", "danmaku", ...).
std::string_view kind_name(const NodeParams& params);
std::string_view action_name(const Action& action);

/// The fixed registry of sound ids accepted by SOUND actions.
std::span<const std::string_view> sound_registry();

/// Whether an action may hang under a sequence+ of the given component.
bool component_accepts(Component component, const Action& action);

/// Width of a danmaku string in scene units (no font metrics available).
double danmaku_text_width(const DanmakuAction& action);

/// Duration the action occupies in its sequence, with defaults resolved.
std::int64_t effective_duration_ms(const Action& action);

BehaviorTree parse_tree(const nlohmann::json& doc);
nlohmann::json serialize_tree(const BehaviorTree& tree);

Diagnostics validate_tree(const BehaviorTree& tree);

struct TimelineEntry {
  Component component = Component::Face;
  std::string node_id;
  Action action;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  bool operator==(const TimelineEntry&) const = default;
};

struct ActionTimeline {
  std::vector<TimelineEntry> entries;
  std::int64_t total_ms = 0;

  bool operator==(const ActionTimeline&) const = default;
};

/// Sequence children run back to back in child order; sequences run in
/// parallel from t = 0. Throws Error(InvalidTree) if validation fails.
ActionTimeline compile_timeline(const BehaviorTree& tree);

}  // namespace puppetwire
