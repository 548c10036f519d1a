#include "puppetwire/protocol.hpp"

#include <algorithm>
#include <array>

#include "puppetwire/detail/json_fields.hpp"
#include "puppetwire/wire_json.hpp"

namespace puppetwire {
namespace {

using nlohmann::json;
using detail::FieldReader;

constexpr std::array<std::string_view, 9> kTypeNames{"HELLO",  "HELLO_ACK", "CORPUS_SYNC", "SENSOR", "TRIGGER",
                                                     "STATE_FRAME", "ERROR", "PING",        "PONG"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

FieldReader payload_reader(const json& j) {
  return FieldReader(j, "payload", Code::SchemaViolation, Code::SchemaViolation);
}

std::uint64_t read_u64(FieldReader& r, std::string_view name) {
  const auto& v = r.required(name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    r.fail(Code::SchemaViolation, "'" + std::string(name) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Role read_role(FieldReader& r) {
  const auto text = r.string("role");
  const auto role = parse_role(text);
  if (!role) r.fail(Code::SchemaViolation, "unknown role '" + text + "'");
  return *role;
}

json payload_to_json(const Payload& payload) {
  return std::visit(Overloaded{
                        [](const HelloPayload& p) {
                          json j{{"role", to_string(p.role)}};
                          if (p.seed) j["seed"] = *p.seed;
                          return j;
                        },
                        [](const HelloAckPayload& p) {
                          return json{{"role", to_string(p.role)}, {"tick_rate", p.tick_rate}};
                        },
                        [](const CorpusSyncPayload& p) { return json{{"corpus", corpus_to_json(p.corpus)}}; },
                        [](const SensorPayload& p) { return sample_to_json(p.sample); },
                        [](const TriggerPayload& p) { return json{{"key", p.key}}; },
                        [](const StateFramePayload& p) { return frame_to_json(p.frame); },
                        [](const ErrorPayload& p) {
                          return json{{"code", to_string(p.code)},
                                      {"message", p.message},
                                      {"ref_seq", p.ref_seq ? json(*p.ref_seq) : json(nullptr)}};
                        },
                        [](const PingPayload& p) { return json{{"nonce", p.nonce}}; },
                        [](const PongPayload& p) { return json{{"nonce", p.nonce}}; },
                    },
                    payload);
}

Payload payload_from_json(MessageType type, const json& j) {
  switch (type) {
    case MessageType::Hello: {
      auto r = payload_reader(j);
      HelloPayload p{read_role(r), std::nullopt};
      if (r.find("seed")) p.seed = read_u64(r, "seed");
      r.finish();
      return p;
    }
    case MessageType::HelloAck: {
      auto r = payload_reader(j);
      HelloAckPayload p{read_role(r), static_cast<int>(r.integer("tick_rate"))};
      r.finish();
      return p;
    }
    case MessageType::CorpusSync: {
      auto r = payload_reader(j);
      CorpusSyncPayload p;
      try {
        p.corpus = corpus_from_json(r.required("corpus"));
      } catch (const Error& e) {
        throw Error(Code::SchemaViolation, e.what(), e.diagnostics());
      }
      r.finish();
      return p;
    }
    case MessageType::Sensor: return SensorPayload{sample_from_json(j)};
    case MessageType::Trigger: {
      auto r = payload_reader(j);
      TriggerPayload p{r.string("key")};
      r.finish();
      return p;
    }
    case MessageType::StateFrame: return StateFramePayload{frame_from_json(j)};
    case MessageType::Error: {
      auto r = payload_reader(j);
      ErrorPayload p;
      const auto code_text = r.string("code");
      const auto code = parse_code(code_text);
      if (!code) r.fail(Code::SchemaViolation, "unknown error code '" + code_text + "'");
      p.code = *code;
      p.message = r.string("message");
      if (const auto& ref = r.required("ref_seq"); !ref.is_null()) p.ref_seq = read_u64(r, "ref_seq");
      r.finish();
      return p;
    }
    case MessageType::Ping:
    case MessageType::Pong: {
      auto r = payload_reader(j);
      const auto nonce = read_u64(r, "nonce");
      r.finish();
      if (type == MessageType::Ping) return PingPayload{nonce};
      return PongPayload{nonce};
    }
  }
  throw Error(Code::UnknownType, "unhandled message type");
}

}  // namespace

std::string_view to_string(Role role) { return role == Role::Performer ? "performer" : "audience"; }

std::optional<Role> parse_role(std::string_view s) {
  if (s == "performer") return Role::Performer;
  if (s == "audience") return Role::Audience;
  return std::nullopt;
}

std::string_view to_string(MessageType type) { return kTypeNames[static_cast<std::size_t>(type)]; }

std::optional<MessageType> parse_message_type(std::string_view s) {
  const auto it = std::find(kTypeNames.begin(), kTypeNames.end(), s);
  if (it == kTypeNames.end()) return std::nullopt;
  return static_cast<MessageType>(it - kTypeNames.begin());
}

std::string encode_body(const Message& msg) {
  const json j{{"type", to_string(msg.type())},
               {"session_id", msg.session_id},
               {"seq", msg.seq},
               {"payload", payload_to_json(msg.payload)}};
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

Message decode_body(std::string_view body) {
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::exception& e) {
    throw Error(Code::MalformedFrame, e.what());
  }
  if (!j.is_object()) throw Error(Code::MalformedFrame, "message body is not a JSON object");

  FieldReader r(j, "message", Code::SchemaViolation, Code::SchemaViolation);
  const auto type_text = r.string("type");
  const auto type = parse_message_type(type_text);
  if (!type) throw Error(Code::UnknownType, "unknown message type '" + type_text + "'");
  Message msg;
  msg.session_id = r.string("session_id");
  msg.seq = read_u64(r, "seq");
  msg.payload = payload_from_json(*type, r.required("payload"));
  r.finish();
  return msg;
}

std::string encode_message(const Message& msg) {
  const std::string body = encode_body(msg);
  if (body.size() > kMaxFrameBytes) throw Error(Code::MalformedFrame, "message exceeds the 1 MiB frame limit");
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(4 + body.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out += body;
  return out;
}

Message decode_message(std::string_view bytes) {
  FrameReader reader;
  reader.feed(bytes);
  auto body = reader.next();
  if (!body) throw Error(Code::MalformedFrame, "incomplete frame");
  if (reader.buffered() != 0) throw Error(Code::MalformedFrame, "trailing bytes after frame");
  return decode_body(*body);
}

std::optional<std::string> FrameReader::next() {
  if (buffer_.size() < 4) return std::nullopt;
  const auto byte = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(buffer_[i])); };
  const std::uint32_t n = (byte(0) << 24) | (byte(1) << 16) | (byte(2) << 8) | byte(3);
  if (n > kMaxFrameBytes) throw Error(Code::MalformedFrame, "frame length " + std::to_string(n) + " exceeds 1 MiB");
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  std::string body = buffer_.substr(4, n);
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  return body;
}

void OutboundQueue::push(Message msg) {
  const bool is_frame = msg.type() == MessageType::StateFrame;
  if (is_frame && frames_ >= frame_capacity_) {
    const auto oldest = std::find_if(items_.begin(), items_.end(),
                                     [](const Message& m) { return m.type() == MessageType::StateFrame; });
    items_.erase(oldest);
    --frames_;
    ++dropped_;
  }
  if (is_frame) ++frames_;
  items_.push_back(std::move(msg));
}

std::optional<Message> OutboundQueue::pop() {
  if (items_.empty()) return std::nullopt;
  Message msg = std::move(items_.front());
  items_.pop_front();
  if (msg.type() == MessageType::StateFrame) --frames_;
  return msg;
}

}  // namespace puppetwire
