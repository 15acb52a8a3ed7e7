// SPDX-License-Identifier: Apache-2.0
#pragma once

// Agent endpoints. An agent turns one request document into one response
// document. Case-level trouble (timeout, crash, garbage) is a CaseFailure;
// an endpoint that cannot be reached at all is an EndpointError.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <httplib.h>

#include "tripdiag/harness/protocol.hpp"

namespace tripdiag::harness {

class Agent {
public:
  virtual ~Agent() = default;
  virtual json call(const json& request) = 0;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

inline json envelope(const json& request, json output) {
  return json{{"case_id", request.value("case_id", "")}, {"output", std::move(output)}};
}

/// Answers every case with its gold output.
class OracleAgent : public Agent {
public:
  explicit OracleAgent(const std::vector<TaskCase>& cases) {
    for (const auto& c : cases) answers_.emplace(c.case_id, gold_output(c));
  }

  json call(const json& request) override {
    const auto it = answers_.find(request.value("case_id", ""));
    if (it == answers_.end()) return envelope(request, json::object());
    return envelope(request, it->second);
  }

private:
  std::map<std::string, json> answers_;
};

/// Answers every case with an empty but well-formed output.
class NullAgent : public Agent {
public:
  json call(const json& request) override {
    return envelope(request, empty_output(kSubtaskNames.parse(request.value("subtask", "extraction"), "subtask")));
  }
};

class ScriptedAgent : public Agent {
public:
  explicit ScriptedAgent(std::function<json(const json&)> script) : script_(std::move(script)) {}
  json call(const json& request) override { return script_(request); }

private:
  std::function<json(const json&)> script_;
};

/// Whitespace-separated argv; double quotes group words.
inline std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, any = false;
  for (char c : cmd) {
    if (c == '"') {
      quoted = !quoted;
      any = true;
    } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
      if (any) out.push_back(cur);
      cur.clear();
      any = false;
    } else {
      cur += c;
      any = true;
    }
  }
  if (quoted) throw UsageError("unterminated quote in agent command");
  if (any) out.push_back(cur);
  if (out.empty()) throw UsageError("empty agent command");
  return out;
}

/// Line-delimited JSON over the child's stdin/stdout. The child is
/// restarted after a crash or a timeout.
class SubprocessAgent : public Agent {
public:
  SubprocessAgent(std::vector<std::string> argv, std::chrono::milliseconds timeout)
      : argv_(std::move(argv)), timeout_(timeout) {
    if (argv_.empty()) throw UsageError("empty agent command");
    if (timeout_.count() <= 0) throw UsageError("timeout must be positive");
    start();
  }

  SubprocessAgent(const SubprocessAgent&) = delete;
  SubprocessAgent& operator=(const SubprocessAgent&) = delete;
  ~SubprocessAgent() override { stop(false); }

  json call(const json& request) override {
    if (pid_ <= 0) start();
    buffer_.clear();
    const std::string line = request.dump() + "\n";
    std::size_t sent = 0;
    while (sent < line.size()) {
      const auto n = ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        stop(true);
        throw CaseFailure("agent exited");
      }
      sent += static_cast<std::size_t>(n);
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        const std::string reply = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        const auto j = json::parse(reply, nullptr, false);
        if (j.is_discarded()) throw CaseFailure("malformed: response is not JSON");
        return j;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        stop(true);
        throw CaseFailure("timeout");
      }
      pollfd p{fd_, POLLIN, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc == 0) continue;
      char chunk[4096];
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        stop(true);
        throw CaseFailure("agent exited");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  pid_t pid() const { return pid_; }

private:
  void start() {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
      throw EndpointError(std::string("socketpair: ") + std::strerror(errno));
    int err[2];
    if (::pipe2(err, O_CLOEXEC) != 0) {
      ::close(sv[0]);
      ::close(sv[1]);
      throw EndpointError(std::string("pipe: ") + std::strerror(errno));
    }
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    const pid_t pid = ::fork();
    if (pid < 0) {
      for (int fd : {sv[0], sv[1], err[0], err[1]}) ::close(fd);
      throw EndpointError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
      ::dup2(sv[1], 0);
      ::dup2(sv[1], 1);
      ::execvp(args[0], args.data());
      const int e = errno;
      [[maybe_unused]] auto w = ::write(err[1], &e, sizeof e);
      ::_exit(127);
    }
    ::close(sv[1]);
    ::close(err[1]);
    int e = 0;
    ssize_t n;
    do n = ::read(err[0], &e, sizeof e);
    while (n < 0 && errno == EINTR);
    ::close(err[0]);
    if (n > 0) {
      ::close(sv[0]);
      ::waitpid(pid, nullptr, 0);
      throw EndpointError("cannot start agent '" + argv_[0] + "': " + std::strerror(e));
    }
    fd_ = sv[0];
    pid_ = pid;
  }

  void stop(bool kill_now) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    if (pid_ <= 0) return;
    if (!kill_now) {
      for (int i = 0; i < 100; ++i) {
        if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
          pid_ = -1;
          return;
        }
        ::usleep(10000);
      }
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
  pid_t pid_ = -1;
  std::string buffer_;
};

/// POSTs each request to http://host[:port]/path.
class HttpAgent : public Agent {
public:
  HttpAgent(const std::string& url, std::chrono::milliseconds timeout) : timeout_(timeout) {
    if (timeout_.count() <= 0) throw UsageError("timeout must be positive");
    if (!url.starts_with("http://")) throw UsageError("agent URL must start with http://");
    const auto slash = url.find('/', 7);
    base_ = url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
    client_ = std::make_unique<httplib::Client>(base_);
    const auto secs = timeout_.count() / 1000;
    const auto usecs = (timeout_.count() % 1000) * 1000;
    client_->set_connection_timeout(secs, usecs);
    client_->set_read_timeout(secs, usecs);
    client_->set_write_timeout(secs, usecs);
  }

  json call(const json& request) override {
    const auto t0 = std::chrono::steady_clock::now();
    auto res = client_->Post(path_, request.dump(), "application/json");
    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::Connection || err == httplib::Error::ConnectionTimeout)
        throw EndpointError("agent endpoint " + base_ + " unreachable: " + httplib::to_string(err));
      if (std::chrono::steady_clock::now() - t0 >= timeout_) throw CaseFailure("timeout");
      throw CaseFailure("transport: " + httplib::to_string(err));
    }
    if (res->status != 200) throw CaseFailure("http status " + std::to_string(res->status));
    const auto j = json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw CaseFailure("malformed: response is not JSON");
    return j;
  }

private:
  std::chrono::milliseconds timeout_;
  std::string base_, path_;
  std::unique_ptr<httplib::Client> client_;
};

struct EndpointConfig {
  std::string target;  // http://... or a command line
  std::chrono::milliseconds timeout{60000};
  int max_retries = 0;  // extra attempts after a timeout
};

inline AgentFactory endpoint_factory(const EndpointConfig& cfg) {
  if (cfg.timeout.count() <= 0) throw UsageError("timeout must be positive");
  if (cfg.target.starts_with("http://"))
    return [cfg] { return std::unique_ptr<Agent>(new HttpAgent(cfg.target, cfg.timeout)); };
  const auto argv = split_command(cfg.target);
  return [argv, cfg] { return std::unique_ptr<Agent>(new SubprocessAgent(argv, cfg.timeout)); };
}

}  // namespace tripdiag::harness
