#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "puppetwire/protocol.hpp"
#include "puppetwire/runtime.hpp"

namespace puppetwire {

using ConnectionId = std::uint64_t;

enum class Phase { AwaitingPerformer, Live, Closed };
std::string_view to_string(Phase phase);

struct Outgoing {
  ConnectionId to = 0;
  Message message;
};

/// One entry of a session's input log. Replaying the log into a fresh
/// session with the same corpus and config reproduces every frame.
struct LoggedMessage {
  ConnectionId from = 0;
  Message message;
  bool operator==(const LoggedMessage&) const = default;
};
struct LoggedTick {
  bool operator==(const LoggedTick&) const = default;
};
struct LoggedDisconnect {
  ConnectionId connection = 0;
  bool operator==(const LoggedDisconnect&) const = default;
};
using LogRecord = std::variant<LoggedMessage, LoggedTick, LoggedDisconnect>;

/// Performer/audience session: routes messages into one engine and fans
/// frames out to every joined connection. Not thread-safe; the owner
/// serializes calls.
class Session {
 public:
  Session(std::string id, CommandCorpus corpus, EngineConfig config);

  std::vector<Outgoing> handle(ConnectionId from, const Message& msg);

  /// Advances the engine one step when LIVE and addresses the frame to
  /// every joined connection; a no-op in any other phase.
  std::vector<Outgoing> tick();

  /// Performer loss closes the session.
  std::vector<Outgoing> disconnect(ConnectionId connection);

  const std::string& id() const { return id_; }
  Phase phase() const { return phase_; }
  const CommandCorpus& corpus() const { return corpus_; }
  const Engine* engine() const { return engine_ ? &*engine_ : nullptr; }
  std::optional<ConnectionId> performer() const { return performer_; }
  std::size_t audience_count() const;
  std::optional<std::uint64_t> last_seq(ConnectionId connection) const;
  const std::vector<LogRecord>& log() const { return log_; }

 private:
  struct Peer {
    Role role;
    std::uint64_t next_out_seq = 1;
  };

  Outgoing to_peer(ConnectionId to, Payload payload);
  Outgoing error(ConnectionId to, Code code, std::string message, std::optional<std::uint64_t> ref_seq);
  std::vector<Outgoing> handle_hello(ConnectionId from, const Message& msg, const HelloPayload& hello);

  std::string id_;
  CommandCorpus corpus_;
  EngineConfig config_;
  Phase phase_ = Phase::AwaitingPerformer;
  std::optional<Engine> engine_;
  std::optional<ConnectionId> performer_;
  std::map<ConnectionId, Peer> peers_;
  std::map<ConnectionId, std::uint64_t> last_seq_;
  std::map<ConnectionId, std::uint64_t> unjoined_out_seq_;
  std::vector<LogRecord> log_;
};

/// Feeds a log into a fresh session and returns the STATE_FRAMEs it emits,
/// in emission order (one per tick, deduplicated across recipients).
std::vector<StateFrame> replay_session(const std::string& id, const CommandCorpus& corpus, const EngineConfig& config,
                                       const std::vector<LogRecord>& log);

/// One JSON object per line: {"event": "message"|"tick"|"disconnect", ...}.
std::string log_to_ndjson(const std::vector<LogRecord>& log);
std::vector<LogRecord> log_from_ndjson(std::string_view text);

/// 64-bit FNV-1a, used to compare frame streams.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);

}  // namespace puppetwire
