#include "puppetwire/session.hpp"

#include <sstream>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "puppetwire/detail/json_fields.hpp"

namespace puppetwire {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::AwaitingPerformer: return "awaiting_performer";
    case Phase::Live: return "live";
    case Phase::Closed: return "closed";
  }
  return "?";
}

Session::Session(std::string id, CommandCorpus corpus, EngineConfig config)
    : id_(std::move(id)), corpus_(std::move(corpus)), config_(config) {}

std::size_t Session::audience_count() const {
  std::size_t n = 0;
  for (const auto& [conn, peer] : peers_) n += peer.role == Role::Audience ? 1 : 0;
  return n;
}

std::optional<std::uint64_t> Session::last_seq(ConnectionId connection) const {
  const auto it = last_seq_.find(connection);
  if (it == last_seq_.end()) return std::nullopt;
  return it->second;
}

Outgoing Session::to_peer(ConnectionId to, Payload payload) {
  const auto it = peers_.find(to);
  std::uint64_t& counter = it != peers_.end() ? it->second.next_out_seq : unjoined_out_seq_[to];
  if (counter == 0) counter = 1;
  return Outgoing{to, Message{id_, counter++, std::move(payload)}};
}

Outgoing Session::error(ConnectionId to, Code code, std::string message, std::optional<std::uint64_t> ref_seq) {
  return to_peer(to, ErrorPayload{code, std::move(message), ref_seq});
}

std::vector<Outgoing> Session::handle_hello(ConnectionId from, const Message& msg, const HelloPayload& hello) {
  if (peers_.contains(from)) return {error(from, Code::BadPhase, "connection already joined", msg.seq)};
  if (phase_ == Phase::Closed) return {error(from, Code::BadPhase, "session is closed", msg.seq)};
  if (hello.role == Role::Performer) {
    if (performer_) return {error(from, Code::RoleViolation, "session already has a performer", msg.seq)};
    EngineConfig cfg = config_;
    if (hello.seed) cfg.seed = *hello.seed;
    engine_.emplace(corpus_, cfg);
    performer_ = from;
    phase_ = Phase::Live;
    spdlog::info("session {}: performer joined on connection {}, seed {}", id_, from, cfg.seed);
  } else {
    spdlog::info("session {}: audience joined on connection {}", id_, from);
  }
  Peer peer{hello.role};
  if (const auto it = unjoined_out_seq_.find(from); it != unjoined_out_seq_.end()) {
    peer.next_out_seq = it->second;
    unjoined_out_seq_.erase(it);
  }
  peers_.emplace(from, peer);
  return {to_peer(from, HelloAckPayload{hello.role, config_.tick_rate}), to_peer(from, CorpusSyncPayload{corpus_})};
}

std::vector<Outgoing> Session::handle(ConnectionId from, const Message& msg) {
  log_.push_back(LoggedMessage{from, msg});

  if (const auto it = last_seq_.find(from); it != last_seq_.end() && msg.seq <= it->second) {
    return {error(from, Code::StaleSeq,
                  "seq " + std::to_string(msg.seq) + " is not above " + std::to_string(it->second), msg.seq)};
  }
  last_seq_[from] = msg.seq;

  if (const auto* hello = std::get_if<HelloPayload>(&msg.payload)) return handle_hello(from, msg, *hello);

  const auto peer = peers_.find(from);
  if (msg.type() == MessageType::Ping) return {to_peer(from, PongPayload{std::get<PingPayload>(msg.payload).nonce})};
  if (msg.type() == MessageType::Pong || msg.type() == MessageType::Error) return {};
  if (peer == peers_.end()) return {error(from, Code::RoleViolation, "connection has not joined", msg.seq)};

  const bool performer = peer->second.role == Role::Performer;
  switch (msg.type()) {
    case MessageType::Sensor:
    case MessageType::Trigger:
    case MessageType::CorpusSync:
      if (!performer) {
        return {error(from, Code::RoleViolation,
                      std::string(to_string(msg.type())) + " is only accepted from the performer", msg.seq)};
      }
      if (phase_ != Phase::Live) return {error(from, Code::BadPhase, "session is not live", msg.seq)};
      break;
    default:
      return {error(from, Code::RoleViolation,
                    std::string(to_string(msg.type())) + " is only sent by the server", msg.seq)};
  }

  if (const auto* sensor = std::get_if<SensorPayload>(&msg.payload)) {
    engine_->enqueue(sensor->sample);
    return {};
  }
  if (const auto* trig = std::get_if<TriggerPayload>(&msg.payload)) {
    if (corpus_.find(trig->key) == nullptr) {
      return {error(from, Code::UnknownKey, "no command bound to key '" + trig->key + "'", msg.seq)};
    }
    engine_->enqueue(TriggerInput{trig->key});
    return {};
  }
  const auto& sync = std::get<CorpusSyncPayload>(msg.payload);
  if (auto diags = validate_corpus(sync.corpus); !diags.empty()) {
    return {error(from, Code::InvalidCommand,
                  std::string(to_string(diags.front().code)) + " on key '" + diags.front().key + "'", msg.seq)};
  }
  corpus_ = sync.corpus;
  engine_->set_corpus(corpus_);
  std::vector<Outgoing> out;
  for (const auto& [conn, p] : peers_) {
    if (conn != from) out.push_back(to_peer(conn, CorpusSyncPayload{corpus_}));
  }
  spdlog::info("session {}: corpus replaced ({} commands)", id_, corpus_.commands.size());
  return out;
}

std::vector<Outgoing> Session::tick() {
  log_.push_back(LoggedTick{});
  if (phase_ != Phase::Live) return {};
  const StateFrame frame = engine_->tick();
  std::vector<Outgoing> out;
  out.reserve(peers_.size());
  for (const auto& [conn, peer] : peers_) out.push_back(to_peer(conn, StateFramePayload{frame}));
  return out;
}

std::vector<Outgoing> Session::disconnect(ConnectionId connection) {
  log_.push_back(LoggedDisconnect{connection});
  peers_.erase(connection);
  last_seq_.erase(connection);
  unjoined_out_seq_.erase(connection);
  if (performer_ == connection) {
    performer_.reset();
    phase_ = Phase::Closed;
    spdlog::info("session {}: performer left, session closed", id_);
  }
  return {};
}

std::vector<StateFrame> replay_session(const std::string& id, const CommandCorpus& corpus, const EngineConfig& config,
                                       const std::vector<LogRecord>& log) {
  Session session(id, corpus, config);
  std::vector<StateFrame> frames;
  for (const auto& record : log) {
    if (const auto* m = std::get_if<LoggedMessage>(&record)) {
      session.handle(m->from, m->message);
    } else if (const auto* d = std::get_if<LoggedDisconnect>(&record)) {
      session.disconnect(d->connection);
    } else {
      const auto out = session.tick();
      if (!out.empty()) frames.push_back(std::get<StateFramePayload>(out.front().message.payload).frame);
    }
  }
  return frames;
}

std::string log_to_ndjson(const std::vector<LogRecord>& log) {
  std::string out;
  for (const auto& record : log) {
    nlohmann::json j;
    if (const auto* m = std::get_if<LoggedMessage>(&record)) {
      j = {{"event", "message"}, {"from", m->from}, {"message", nlohmann::json::parse(encode_body(m->message))}};
    } else if (const auto* d = std::get_if<LoggedDisconnect>(&record)) {
      j = {{"event", "disconnect"}, {"connection", d->connection}};
    } else {
      j = {{"event", "tick"}};
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<LogRecord> log_from_ndjson(std::string_view text) {
  std::vector<LogRecord> log;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Code::MalformedDocument, e.what());
    }
    detail::FieldReader r(j, "log", Code::SchemaViolation, Code::SchemaViolation);
    const auto event = r.string("event");
    if (event == "tick") {
      log.emplace_back(LoggedTick{});
    } else if (event == "disconnect") {
      log.emplace_back(LoggedDisconnect{static_cast<ConnectionId>(r.integer("connection"))});
    } else if (event == "message") {
      const auto from = static_cast<ConnectionId>(r.integer("from"));
      log.emplace_back(LoggedMessage{from, decode_body(r.required("message").dump())});
    } else {
      r.fail(Code::SchemaViolation, "unknown event '" + event + "'");
    }
    r.finish();
  }
  return log;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace puppetwire
