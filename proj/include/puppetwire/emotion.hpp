#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "puppetwire/behavior_tree.hpp"
#include "puppetwire/error.hpp"

namespace puppetwire {

inline constexpr int kValenceMin = 1;
inline constexpr int kValenceMax = 9;
inline constexpr int kValenceNeutral = 5;
inline constexpr int kArousalMin = 50;
inline constexpr int kArousalMax = 90;
inline constexpr int kArousalDefault = 70;
inline constexpr int kCorpusSchemaVersion = 1;

/// The five-tuple (key, semantic, valence, arousal, behavior).
struct EmotionCommand {
  std::string key;  // one printable ASCII character
  std::string semantic;
  int valence = kValenceNeutral;
  int arousal = kArousalDefault;
  BehaviorTree behavior;

  bool operator==(const EmotionCommand&) const = default;
};

/// Actions of a command's tree grouped by the component of their sequence+
/// parent, in tree order.
struct BehaviorActionSet {
  std::vector<Action> face;
  std::vector<Action> texture;
  std::vector<Action> text;
};

BehaviorActionSet action_set(const BehaviorTree& tree);

struct CommandCorpus {
  std::vector<EmotionCommand> commands;
  int schema_version = kCorpusSchemaVersion;
  std::optional<std::string> default_background;

  const EmotionCommand* find(std::string_view key) const;
  bool operator==(const CommandCorpus&) const = default;
};

inline bool is_positive(const EmotionCommand& cmd) { return cmd.valence >= kValenceNeutral; }

/// Indices of commands with v >= 5 / v < 5, in corpus order.
std::vector<std::size_t> positive_commands(const CommandCorpus& corpus);
std::vector<std::size_t> negative_commands(const CommandCorpus& corpus);

/// Diagnostics for cmd as a candidate member of corpus: range checks, key
/// shape, key collision with any corpus entry, and tree validation.
Diagnostics validate_command(const EmotionCommand& cmd, const CommandCorpus& corpus);

/// Validates every member against the rest of the corpus.
Diagnostics validate_corpus(const CommandCorpus& corpus);

/// Throws Error with MALFORMED_DOCUMENT, SCHEMA_VIOLATION or INVALID_COMMAND.
CommandCorpus load_corpus(std::string_view bytes);
CommandCorpus corpus_from_json(const nlohmann::json& doc);

/// Canonical bytes: sorted keys, two-space indent, trailing newline.
std::string save_corpus(const CommandCorpus& corpus);
nlohmann::json corpus_to_json(const CommandCorpus& corpus);

nlohmann::json command_to_json(const EmotionCommand& cmd);

}  // namespace puppetwire
