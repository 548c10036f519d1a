#include "puppetwire/error.hpp"

namespace puppetwire {

std::string_view to_string(Code code) {
  switch (code) {
    case Code::ValenceOutOfRange: return "VALENCE_OUT_OF_RANGE";
    case Code::ArousalOutOfRange: return "AROUSAL_OUT_OF_RANGE";
    case Code::DuplicateKey: return "DUPLICATE_KEY";
    case Code::InvalidKey: return "INVALID_KEY";
    case Code::EmptySemantic: return "EMPTY_SEMANTIC";
    case Code::MalformedDocument: return "MALFORMED_DOCUMENT";
    case Code::SchemaViolation: return "SCHEMA_VIOLATION";
    case Code::InvalidCommand: return "INVALID_COMMAND";
    case Code::MalformedNode: return "MALFORMED_NODE";
    case Code::UnknownKind: return "UNKNOWN_KIND";
    case Code::UnknownParam: return "UNKNOWN_PARAM";
    case Code::DanglingEdge: return "DANGLING_EDGE";
    case Code::MultipleRoots: return "MULTIPLE_ROOTS";
    case Code::MissingRoot: return "MISSING_ROOT";
    case Code::DuplicateNodeId: return "DUPLICATE_NODE_ID";
    case Code::IllegalEdge: return "ILLEGAL_EDGE";
    case Code::MultipleParents: return "MULTIPLE_PARENTS";
    case Code::UnreachableNode: return "UNREACHABLE_NODE";
    case Code::Cycle: return "CYCLE";
    case Code::ComponentMismatch: return "COMPONENT_MISMATCH";
    case Code::InvalidParam: return "INVALID_PARAM";
    case Code::UnknownSound: return "UNKNOWN_SOUND";
    case Code::InvalidTree: return "INVALID_TREE";
    case Code::UnknownKey: return "UNKNOWN_KEY";
    case Code::EmptyLandmarks: return "EMPTY_LANDMARKS";
    case Code::InvalidProbs: return "INVALID_PROBS";
    case Code::InvalidBpm: return "INVALID_BPM";
    case Code::InvalidSample: return "INVALID_SAMPLE";
    case Code::EmptyCorpus: return "EMPTY_CORPUS";
    case Code::MalformedFrame: return "MALFORMED_FRAME";
    case Code::UnknownType: return "UNKNOWN_TYPE";
    case Code::RoleViolation: return "ROLE_VIOLATION";
    case Code::BadPhase: return "BAD_PHASE";
    case Code::StaleSeq: return "STALE_SEQ";
  }
  return "UNKNOWN";
}

Error::Error(Code code, const std::string& message, Diagnostics diagnostics)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      diagnostics_(std::move(diagnostics)) {}

}  // namespace puppetwire

namespace puppetwire {

std::optional<Code> parse_code(std::string_view text) {
  for (int i = 0; i <= static_cast<int>(Code::StaleSeq); ++i) {
    if (to_string(static_cast<Code>(i)) == text) return static_cast<Code>(i);
  }
  return std::nullopt;
}

}  // namespace puppetwire
