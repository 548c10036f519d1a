#include "puppetwire/emotion.hpp"

#include <algorithm>

#include "puppetwire/detail/json_fields.hpp"

namespace puppetwire {
namespace {

using nlohmann::json;
using detail::FieldReader;

void check_fields(const EmotionCommand& cmd, Diagnostics& out) {
  auto diag = [&](Code code, const std::string& what) { out.push_back({code, cmd.key, {}, what}); };
  if (cmd.key.size() != 1 || cmd.key[0] < 0x20 || cmd.key[0] > 0x7E) {
    diag(Code::InvalidKey, "key must be a single printable character");
  }
  if (cmd.semantic.empty()) diag(Code::EmptySemantic, "semantic label is empty");
  if (cmd.valence < kValenceMin || cmd.valence > kValenceMax) {
    diag(Code::ValenceOutOfRange, "valence " + std::to_string(cmd.valence) + " outside [1, 9]");
  }
  if (cmd.arousal < kArousalMin || cmd.arousal > kArousalMax) {
    diag(Code::ArousalOutOfRange, "arousal " + std::to_string(cmd.arousal) + " outside [50, 90]");
  }
  for (auto d : validate_tree(cmd.behavior)) {
    d.key = cmd.key;
    out.push_back(std::move(d));
  }
}

int read_int(FieldReader& r, std::string_view name) {
  const auto v = r.integer(name);
  if (v < INT32_MIN || v > INT32_MAX) r.fail(Code::SchemaViolation, "'" + std::string(name) + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

const EmotionCommand* CommandCorpus::find(std::string_view key) const {
  const auto it = std::find_if(commands.begin(), commands.end(), [&](const auto& c) { return c.key == key; });
  return it == commands.end() ? nullptr : &*it;
}

BehaviorActionSet action_set(const BehaviorTree& tree) {
  BehaviorActionSet set;
  for (const auto& node : tree.nodes) {
    const auto* seq = std::get_if<SequenceParams>(&node.params);
    if (seq == nullptr) continue;
    auto& bucket = seq->component == Component::Face         ? set.face
                   : seq->component == Component::Background ? set.texture
                                                             : set.text;
    for (const auto& child_id : node.children) {
      const auto* child = tree.find(child_id);
      if (child == nullptr) continue;
      if (const auto* action = std::get_if<Action>(&child->params)) bucket.push_back(*action);
    }
  }
  return set;
}

std::vector<std::size_t> positive_commands(const CommandCorpus& corpus) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < corpus.commands.size(); ++i) {
    if (is_positive(corpus.commands[i])) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> negative_commands(const CommandCorpus& corpus) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < corpus.commands.size(); ++i) {
    if (!is_positive(corpus.commands[i])) out.push_back(i);
  }
  return out;
}

Diagnostics validate_command(const EmotionCommand& cmd, const CommandCorpus& corpus) {
  Diagnostics out;
  check_fields(cmd, out);
  if (corpus.find(cmd.key) != nullptr) {
    out.push_back({Code::DuplicateKey, cmd.key, {}, "key '" + cmd.key + "' is already bound"});
  }
  return out;
}

Diagnostics validate_corpus(const CommandCorpus& corpus) {
  Diagnostics out;
  for (std::size_t i = 0; i < corpus.commands.size(); ++i) {
    const auto& cmd = corpus.commands[i];
    check_fields(cmd, out);
    for (std::size_t j = 0; j < i; ++j) {
      if (corpus.commands[j].key == cmd.key) {
        out.push_back({Code::DuplicateKey, cmd.key, {}, "key '" + cmd.key + "' is bound more than once"});
        break;
      }
    }
  }
  return out;
}

CommandCorpus corpus_from_json(const json& doc) {
  FieldReader top(doc, "corpus", Code::SchemaViolation, Code::SchemaViolation);
  CommandCorpus corpus;
  if (const auto* v = top.find("schema_version")) {
    corpus.schema_version = static_cast<int>(top.as_integer("schema_version", *v));
    if (corpus.schema_version != kCorpusSchemaVersion) {
      top.fail(Code::SchemaViolation, "unsupported schema_version " + std::to_string(corpus.schema_version));
    }
  }
  if (const auto* v = top.find("default_background"); v != nullptr && !v->is_null()) {
    corpus.default_background = top.as_string("default_background", *v);
  }
  if (const auto* commands = top.find("commands")) {
    if (!commands->is_array()) top.fail(Code::SchemaViolation, "'commands' must be an array");
    for (std::size_t i = 0; i < commands->size(); ++i) {
      FieldReader r((*commands)[i], "corpus.commands[" + std::to_string(i) + "]", Code::SchemaViolation,
                    Code::SchemaViolation);
      EmotionCommand cmd;
      cmd.key = r.string("key");
      cmd.semantic = r.string("semantic");
      cmd.valence = read_int(r, "valence");
      cmd.arousal = read_int(r, "arousal");
      try {
        cmd.behavior = parse_tree(r.required("tree"));
      } catch (const Error& e) {
        auto diags = e.diagnostics();
        for (auto& d : diags) d.key = cmd.key;
        throw Error(Code::InvalidCommand, "command '" + cmd.key + "': " + e.what(), std::move(diags));
      }
      r.finish();
      corpus.commands.push_back(std::move(cmd));
    }
  }
  top.finish();
  if (auto diags = validate_corpus(corpus); !diags.empty()) {
    throw Error(Code::InvalidCommand, std::to_string(diags.size()) + " invalid command diagnostics",
                std::move(diags));
  }
  return corpus;
}

CommandCorpus load_corpus(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(Code::MalformedDocument, e.what());
  }
  return corpus_from_json(doc);
}

json command_to_json(const EmotionCommand& cmd) {
  return json{{"key", cmd.key},
              {"semantic", cmd.semantic},
              {"valence", cmd.valence},
              {"arousal", cmd.arousal},
              {"tree", serialize_tree(cmd.behavior)}};
}

json corpus_to_json(const CommandCorpus& corpus) {
  json commands = json::array();
  for (const auto& cmd : corpus.commands) commands.push_back(command_to_json(cmd));
  return json{{"schema_version", corpus.schema_version},
              {"default_background", corpus.default_background ? json(*corpus.default_background) : json(nullptr)},
              {"commands", commands}};
}

std::string save_corpus(const CommandCorpus& corpus) {
  return corpus_to_json(corpus).dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

}  // namespace puppetwire
