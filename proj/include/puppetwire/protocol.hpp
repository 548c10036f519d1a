#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "puppetwire/emotion.hpp"
#include "puppetwire/error.hpp"
#include "puppetwire/estimation.hpp"
#include "puppetwire/runtime.hpp"

namespace puppetwire {

inline constexpr std::size_t kMaxFrameBytes = 1u << 20;

enum class Role { Performer, Audience };
std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view s);

enum class MessageType { Hello, HelloAck, CorpusSync, Sensor, Trigger, StateFrame, Error, Ping, Pong };
std::string_view to_string(MessageType type);
std::optional<MessageType> parse_message_type(std::string_view s);

struct HelloPayload {
  Role role = Role::Audience;
  std::optional<std::uint64_t> seed;  // performer only: engine seed for the session
  bool operator==(const HelloPayload&) const = default;
};

struct HelloAckPayload {
  Role role = Role::Audience;
  int tick_rate = kDefaultTickRate;
  bool operator==(const HelloAckPayload&) const = default;
};

struct CorpusSyncPayload {
  CommandCorpus corpus;
  bool operator==(const CorpusSyncPayload&) const = default;
};

struct SensorPayload {
  SensorSample sample;
  bool operator==(const SensorPayload&) const = default;
};

struct TriggerPayload {
  std::string key;
  bool operator==(const TriggerPayload&) const = default;
};

struct StateFramePayload {
  StateFrame frame;
  bool operator==(const StateFramePayload&) const = default;
};

struct ErrorPayload {
  Code code = Code::SchemaViolation;
  std::string message;
  std::optional<std::uint64_t> ref_seq;  // seq of the offending message
  bool operator==(const ErrorPayload&) const = default;
};

struct PingPayload {
  std::uint64_t nonce = 0;
  bool operator==(const PingPayload&) const = default;
};

struct PongPayload {
  std::uint64_t nonce = 0;
  bool operator==(const PongPayload&) const = default;
};

// Alternative order matches MessageType.
using Payload = std::variant<HelloPayload, HelloAckPayload, CorpusSyncPayload, SensorPayload, TriggerPayload,
                             StateFramePayload, ErrorPayload, PingPayload, PongPayload>;

struct Message {
  std::string session_id;
  std::uint64_t seq = 0;
  Payload payload;

  MessageType type() const { return static_cast<MessageType>(payload.index()); }
  bool operator==(const Message&) const = default;
};

/// JSON text of one message, without the length prefix.
std::string encode_body(const Message& msg);
/// Total: throws MALFORMED_FRAME, UNKNOWN_TYPE or SCHEMA_VIOLATION.
Message decode_body(std::string_view body);

/// 4-byte big-endian length prefix followed by the JSON body.
std::string encode_message(const Message& msg);
/// Decodes exactly one prefixed frame; trailing or missing bytes are
/// MALFORMED_FRAME.
Message decode_message(std::string_view bytes);

/// Splits a byte stream into frame bodies.
class FrameReader {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }

  /// Next complete body, if any. Throws MALFORMED_FRAME for a length over
  /// the 1 MiB limit; the stream cannot be resynchronized after that.
  std::optional<std::string> next();

  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
};

/// Per-connection outbound queue. STATE_FRAMEs are capped and the oldest
/// frame is dropped on overflow; other messages are never dropped.
class OutboundQueue {
 public:
  explicit OutboundQueue(std::size_t frame_capacity = 120) : frame_capacity_(frame_capacity) {}

  void push(Message msg);
  std::optional<Message> pop();

  std::size_t size() const { return items_.size(); }
  std::size_t frames() const { return frames_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  std::deque<Message> items_;
  std::size_t frame_capacity_;
  std::size_t frames_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace puppetwire
