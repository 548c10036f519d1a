#include "puppetwire/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace puppetwire {
namespace {

bool write_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

struct Server::Connection {
  ConnectionId id = 0;
  int fd = -1;
  std::shared_ptr<SessionHost> host;  // set on the first HELLO

  std::mutex mutex;
  std::condition_variable ready;
  OutboundQueue queue;
  bool closed = false;
  std::atomic<bool> finished{false};  // reader exited; safe to reap
  std::uint64_t next_seq = 1;  // wire seq, stamped by the writer
  std::jthread writer;
  std::jthread reader;

  explicit Connection(std::size_t frame_capacity) : queue(frame_capacity) {}

  void push(Message msg) {
    {
      std::lock_guard lock(mutex);
      if (closed) return;
      queue.push(std::move(msg));
    }
    ready.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mutex);
      closed = true;
    }
    ready.notify_all();
    ::shutdown(fd, SHUT_RDWR);
  }

  void write_loop() {
    for (;;) {
      Message msg;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return closed || queue.size() > 0; });
        if (closed) return;
        msg = *queue.pop();
      }
      msg.seq = next_seq++;
      if (!write_all(fd, encode_message(msg))) return;
    }
  }
};

struct Server::SessionHost {
  std::mutex mutex;
  Session session;
  std::map<ConnectionId, std::shared_ptr<Connection>> members;
  std::jthread ticker;

  SessionHost(std::string id, CommandCorpus corpus, EngineConfig config)
      : session(std::move(id), std::move(corpus), config) {}
};

Server::Server(ServerConfig config) : config_(std::move(config)) {}

Server::~Server() { stop(); }

void Server::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(config_.port);
  if (::inet_pton(AF_INET, config_.bind_address.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("bad bind address '" + config_.bind_address + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot bind " + config_.bind_address + ":" + std::to_string(config_.port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  bound_port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::jthread([this](std::stop_token st) { accept_loop(st); });
  spdlog::info("listening on {}:{}", config_.bind_address, bound_port_);
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  acceptor_.request_stop();
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;

  std::vector<std::shared_ptr<Connection>> conns;
  std::vector<std::shared_ptr<SessionHost>> hosts;
  {
    std::lock_guard lock(mutex_);
    conns = connections_;
    for (auto& [id, host] : sessions_) hosts.push_back(host);
  }
  for (auto& host : hosts) {
    host->ticker.request_stop();
    if (host->ticker.joinable()) host->ticker.join();
  }
  for (auto& c : conns) c->close();
  for (auto& c : conns) {
    if (c->reader.joinable()) c->reader.join();
    if (c->writer.joinable()) c->writer.join();
    ::close(c->fd);
  }
  std::lock_guard lock(mutex_);
  connections_.clear();
  sessions_.clear();
}

std::size_t Server::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void Server::accept_loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    reap();
    if (::poll(&pfd, 1, 50) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto conn = std::make_shared<Connection>(config_.frame_queue);
    conn->id = next_connection_++;
    conn->fd = fd;
    {
      std::lock_guard lock(mutex_);
      connections_.push_back(conn);
    }
    spdlog::debug("connection {} accepted", conn->id);
    conn->writer = std::jthread([conn] { conn->write_loop(); });
    conn->reader = std::jthread([this, conn] { read_loop(conn); });
  }
}

void Server::reap() {
  std::vector<std::shared_ptr<Connection>> done;
  std::vector<std::shared_ptr<SessionHost>> idle;
  {
    std::lock_guard lock(mutex_);
    std::erase_if(connections_, [&](const auto& c) {
      if (!c->finished) return false;
      done.push_back(c);
      return true;
    });
    std::erase_if(sessions_, [&](const auto& entry) {
      std::lock_guard hl(entry.second->mutex);
      if (!entry.second->members.empty()) return false;
      idle.push_back(entry.second);
      return true;
    });
  }
  for (auto& host : idle) {
    host->ticker.request_stop();
    if (host->ticker.joinable()) host->ticker.join();
    spdlog::info("session {} ended", host->session.id());
  }
  for (auto& c : done) {
    if (c->reader.joinable()) c->reader.join();
    if (c->writer.joinable()) c->writer.join();
    ::close(c->fd);
  }
}

std::shared_ptr<Server::SessionHost> Server::join(const std::string& session_id, std::shared_ptr<Connection> conn) {
  std::lock_guard lock(mutex_);
  auto& slot = sessions_[session_id];
  if (!slot) {
    slot = std::make_shared<SessionHost>(session_id, config_.corpus, config_.engine);
    spdlog::info("session {} created", session_id);
    auto* host = slot.get();
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double, std::milli>(1000.0 / config_.engine.tick_rate));
    slot->ticker = std::jthread([this, host, period](std::stop_token st) {
      auto next = std::chrono::steady_clock::now();
      while (!st.stop_requested()) {
        next += period;
        std::this_thread::sleep_until(next);
        std::lock_guard hl(host->mutex);
        dispatch(*host, host->session.tick());
      }
    });
  }
  // Registered under the server lock so reap() never sees the new host empty.
  std::lock_guard hl(slot->mutex);
  slot->members.emplace(conn->id, std::move(conn));
  return slot;
}

void Server::dispatch(SessionHost& host, std::vector<Outgoing> out) {
  for (auto& o : out) {
    const auto it = host.members.find(o.to);
    if (it != host.members.end()) it->second->push(std::move(o.message));
  }
}

void Server::send_direct(Connection& conn, Message msg) { conn.push(std::move(msg)); }

void Server::read_loop(std::shared_ptr<Connection> conn) {
  char buf[8192];
  FrameReader reader;
  auto reject = [&](Code code, const std::string& what, std::optional<std::uint64_t> ref) {
    send_direct(*conn, Message{conn->host ? conn->host->session.id() : std::string(), 0,
                               ErrorPayload{code, what, ref}});
  };
  for (;;) {
    const ssize_t n = ::recv(conn->fd, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    reader.feed(std::string_view(buf, static_cast<std::size_t>(n)));
    bool fatal = false;
    for (;;) {
      std::optional<std::string> body;
      try {
        body = reader.next();
      } catch (const Error& e) {
        reject(e.code(), e.what(), std::nullopt);
        fatal = true;
        break;
      }
      if (!body) break;
      Message msg;
      try {
        msg = decode_body(*body);
      } catch (const Error& e) {
        reject(e.code(), e.what(), std::nullopt);
        continue;
      }
      if (!conn->host) {
        if (const auto* ping = std::get_if<PingPayload>(&msg.payload)) {
          send_direct(*conn, Message{msg.session_id, 0, PongPayload{ping->nonce}});
          continue;
        }
        if (msg.type() != MessageType::Hello) {
          reject(Code::RoleViolation, "first message must be HELLO", msg.seq);
          continue;
        }
        conn->host = join(msg.session_id, conn);
      } else if (msg.session_id != conn->host->session.id()) {
        reject(Code::SchemaViolation, "session_id does not match the joined session", msg.seq);
        continue;
      }
      std::lock_guard hl(conn->host->mutex);
      dispatch(*conn->host, conn->host->session.handle(conn->id, msg));
    }
    if (fatal) break;
  }
  if (conn->host) {
    std::lock_guard hl(conn->host->mutex);
    conn->host->session.disconnect(conn->id);
    conn->host->members.erase(conn->id);
  }
  spdlog::debug("connection {} closed", conn->id);
  conn->close();
  conn->finished = true;
}

Client::Client(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  ::inet_pton(AF_INET, host.c_str(), &addr.sin_addr);
  if (fd_ < 0 || ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string why = std::strerror(errno);
    if (fd_ >= 0) ::close(fd_);
    throw std::runtime_error("connect " + host + ":" + std::to_string(port) + ": " + why);
  }
}

Client::~Client() { close(); }

void Client::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

void Client::send(const Message& msg) {
  if (!write_all(fd_, encode_message(msg))) throw std::runtime_error("send failed");
}

std::optional<Message> Client::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto body = reader_.next()) return decode_body(*body);
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd pfd{fd_, POLLIN, 0};
    if (::poll(&pfd, 1, static_cast<int>(left.count())) <= 0) return std::nullopt;
    char buf[8192];
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n <= 0) return std::nullopt;
    reader_.feed(std::string_view(buf, static_cast<std::size_t>(n)));
  }
}

}  // namespace puppetwire
