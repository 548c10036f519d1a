#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace puppetwire {

/// Machine-readable codes for both returned diagnostics and thrown errors.
enum class Code {
  // emotion-core
  ValenceOutOfRange,
  ArousalOutOfRange,
  DuplicateKey,
  InvalidKey,
  EmptySemantic,
  MalformedDocument,
  SchemaViolation,
  InvalidCommand,
  // behavior-tree
  MalformedNode,
  UnknownKind,
  UnknownParam,
  DanglingEdge,
  MultipleRoots,
  MissingRoot,
  DuplicateNodeId,
  IllegalEdge,
  MultipleParents,
  UnreachableNode,
  Cycle,
  ComponentMismatch,
  InvalidParam,
  UnknownSound,
  InvalidTree,
  // runtime / estimation / recommend
  UnknownKey,
  EmptyLandmarks,
  InvalidProbs,
  InvalidBpm,
  InvalidSample,
  EmptyCorpus,
  // session protocol
  MalformedFrame,
  UnknownType,
  RoleViolation,
  BadPhase,
  StaleSeq,
};

std::string_view to_string(Code code);

struct Diagnostic {
  Code code;
  std::string key;      // command key, empty when not applicable
  std::string node_id;  // tree node id or field path
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

/// Thrown by operations whose contract names a structured error.
class Error : public std::runtime_error {
 public:
  Error(Code code, const std::string& message, Diagnostics diagnostics = {});

  Code code() const noexcept { return code_; }
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Code code_;
  Diagnostics diagnostics_;
};

}  // namespace puppetwire

namespace puppetwire {

/// Inverse of to_string(Code).
std::optional<Code> parse_code(std::string_view text);

}  // namespace puppetwire
