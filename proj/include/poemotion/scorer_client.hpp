#pragma once

// Client side of the line-delimited external scorer protocol.
//
//   adapter -> {"protocol":"poemotion-scorer","version":1}
//   client  -> {"id":<uint>,"text":<string>}
//   adapter -> {"id":<uint>,"valence":<float>,"arousal":<float>}
//            | {"id":<uint>,"error":<string>}
//
// One request is in flight at a time. Closing the request stream asks the
// adapter to exit, and it must exit with status 0.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "poemotion/emotion.hpp"
#include "poemotion/error.hpp"

extern char** environ;

namespace poemotion {

inline constexpr std::string_view kScorerProtocol = "poemotion-scorer";
inline constexpr int kScorerProtocolVersion = 1;

class ScorerProcess {
 public:
  using Clock = std::chrono::steady_clock;

  /// Launches `command` through /bin/sh and reads the handshake.
  /// `timeout` bounds each wait on the adapter (one response line, exit).
  ScorerProcess(const std::string& command, std::chrono::duration<double> timeout)
      : timeout_(std::chrono::duration_cast<Clock::duration>(timeout)) {
    struct sigaction ignore {};
    ignore.sa_handler = SIG_IGN;
    sigemptyset(&ignore.sa_mask);
    sigaction(SIGPIPE, &ignore, &old_sigpipe_);

    int to_child[2], from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) throw LaunchError(errno_message("pipe"));
    if (pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw LaunchError(errno_message("pipe"));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);

    std::string sh = "sh", dash_c = "-c", cmd = command;
    char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
    const int rc = posix_spawn(&pid_, "/bin/sh", &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      pid_ = -1;
      throw LaunchError(std::string("cannot launch scorer: ") + std::strerror(rc));
    }
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];

    try {
      handshake();
    } catch (...) {
      shutdown_hard();
      throw;
    }
  }

  ScorerProcess(const ScorerProcess&) = delete;
  ScorerProcess& operator=(const ScorerProcess&) = delete;

  ~ScorerProcess() {
    shutdown_hard();
    sigaction(SIGPIPE, &old_sigpipe_, nullptr);
  }

  /// Sends one request and validates the matching response.
  VadValue score(std::uint64_t id, std::string_view text) {
    nlohmann::json req = {{"id", id}, {"text", std::string(text)}};
    write_line(req.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));

    auto line = read_line();
    if (!line) throw ProtocolError("scorer closed its output before answering id " + std::to_string(id));
    nlohmann::json resp = parse_object(*line);
    if (!resp.contains("id") || !resp["id"].is_number_unsigned() ||
        resp["id"].get<std::uint64_t>() != id)
      throw ProtocolError("response id mismatch, expected " + std::to_string(id) + ": " + *line);
    if (resp.contains("error")) {
      std::string msg = resp["error"].is_string() ? resp["error"].get<std::string>() : resp["error"].dump();
      throw ProtocolError("scorer reported an error for id " + std::to_string(id) + ": " + msg);
    }
    return {unit_value(resp, "valence", *line), unit_value(resp, "arousal", *line)};
  }

  /// Closes the request stream and waits for a clean exit.
  void finish() {
    close_fd(in_fd_);
    const int status = wait_exit();
    if (status != 0)
      throw ProtocolError("scorer exited with status " + std::to_string(status));
  }

 private:
  static std::string errno_message(const char* what) {
    return std::string(what) + ": " + std::strerror(errno);
  }

  static void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }

  void handshake() {
    auto line = read_line();
    if (!line) {
      close_fd(in_fd_);
      const int status = wait_exit();
      if (status == 126 || status == 127)
        throw LaunchError("scorer command could not be executed (status " + std::to_string(status) + ")");
      throw ProtocolError("scorer exited before sending the handshake (status " +
                          std::to_string(status) + ")");
    }
    nlohmann::json hello = parse_object(*line);
    if (hello.value("protocol", std::string{}) != kScorerProtocol ||
        !hello.contains("version") || !hello["version"].is_number_integer() ||
        hello["version"].get<int>() != kScorerProtocolVersion)
      throw ProtocolError("bad handshake: " + *line);
  }

  static nlohmann::json parse_object(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ProtocolError("malformed scorer line: " + line);
    return j;
  }

  static double unit_value(const nlohmann::json& resp, const char* key, const std::string& line) {
    if (!resp.contains(key) || !resp[key].is_number())
      throw ProtocolError(std::string("missing numeric '") + key + "': " + line);
    const double v = resp[key].get<double>();
    if (!in_unit_range(v))
      throw ProtocolError(std::string(key) + " outside [-1, 1]: " + line);
    return v;
  }

  void write_line(std::string line) {
    line += '\n';
    std::string_view rest(line);
    while (!rest.empty()) {
      const ssize_t n = ::write(in_fd_, rest.data(), rest.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(errno_message("write to scorer"));
      }
      rest.remove_prefix(static_cast<std::size_t>(n));
    }
  }

  // Returns nullopt on EOF. Throws TimeoutError when no full line arrives in time.
  std::optional<std::string> read_line() {
    const auto deadline = Clock::now() + timeout_;
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      if (eof_) {
        if (buffer_.empty()) return std::nullopt;
        std::string line;
        line.swap(buffer_);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      if (left.count() <= 0) throw TimeoutError("scorer did not answer in time");
      pollfd pfd{out_fd_, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(errno_message("poll"));
      }
      if (rc == 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolError(errno_message("read from scorer"));
      }
      if (n == 0) eof_ = true;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  // Waits for the child; kills it after the timeout. Returns the exit status
  // (128 + signal for signalled children).
  int wait_exit() {
    const auto deadline = Clock::now() + timeout_;
    for (;;) {
      int status = 0;
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_) {
        pid_ = -1;
        if (WIFEXITED(status)) return WEXITSTATUS(status);
        return 128 + WTERMSIG(status);
      }
      if (r < 0 && errno != EINTR) {
        pid_ = -1;
        return -1;
      }
      if (Clock::now() >= deadline) {
        shutdown_hard();
        throw TimeoutError("scorer did not exit in time");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }

  void shutdown_hard() {
    close_fd(in_fd_);
    close_fd(out_fd_);
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      int status = 0;
      while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
      }
      pid_ = -1;
    }
  }

  Clock::duration timeout_;
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
  bool eof_ = false;
  struct sigaction old_sigpipe_ {};
};

/// Scores every segment through an external adapter, in order. Request ids
/// are the positions 0..n-1.
inline std::vector<VadValue> score_segments_external(std::span<const SemanticSegment> segments,
                                                     const std::string& scorer_command,
                                                     double timeout_s) {
  if (!(timeout_s > 0.0)) throw DomainError("scorer timeout must be positive");
  ScorerProcess proc(scorer_command, std::chrono::duration<double>(timeout_s));
  std::vector<VadValue> out;
  out.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) out.push_back(proc.score(i, segments[i].text));
  proc.finish();
  return out;
}

}  // namespace poemotion
