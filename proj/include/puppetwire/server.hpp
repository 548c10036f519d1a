#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "puppetwire/protocol.hpp"
#include "puppetwire/session.hpp"

namespace puppetwire {

struct ServerConfig {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  CommandCorpus corpus;
  EngineConfig engine;
  std::size_t frame_queue = 120;
};

/// Hosts sessions over TCP using the length-prefixed wire format. Each
/// session ticks on its own thread at the configured rate; each connection
/// has a reader and a writer thread.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting. Throws std::runtime_error on bind failure.
  void start();
  void stop();

  std::uint16_t port() const { return bound_port_; }
  std::size_t session_count() const;

 private:
  struct Connection;
  struct SessionHost;

  void accept_loop(std::stop_token stop);
  void read_loop(std::shared_ptr<Connection> conn);
  void dispatch(SessionHost& host, std::vector<Outgoing> out);
  /// Finds or creates the session and adds conn to its members.
  std::shared_ptr<SessionHost> join(const std::string& session_id, std::shared_ptr<Connection> conn);
  /// Joins finished connections and retires sessions nobody is left in.
  void reap();
  void send_direct(Connection& conn, Message msg);

  ServerConfig config_;
  int listen_fd_ = -1;
  std::uint16_t bound_port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<ConnectionId> next_connection_{1};

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<SessionHost>> sessions_;
  std::vector<std::shared_ptr<Connection>> connections_;
  std::jthread acceptor_;
};

/// Minimal blocking client for the wire format.
class Client {
 public:
  Client(const std::string& host, std::uint16_t port);
  ~Client();

  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  void send(const Message& msg);
  /// Next message, or nullopt on timeout / closed stream.
  std::optional<Message> receive(std::chrono::milliseconds timeout);
  void close();

 private:
  int fd_ = -1;
  FrameReader reader_;
};

}  // namespace puppetwire
