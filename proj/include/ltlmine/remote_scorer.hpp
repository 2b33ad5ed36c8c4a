#pragma once

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "ltlmine/decoding.hpp"

namespace ltlmine {

struct ProtocolError : ScorerError {
  using ScorerError::ScorerError;
};
struct PeerClosed : ScorerError {
  using ScorerError::ScorerError;
};

inline constexpr int kProtocolVersion = 1;

/// Scorer backed by a child process speaking line-delimited JSON on its
/// standard input and output.
///
/// The peer first writes {"vocab_size": n, "version": 1}. Each request is
/// {"id": i, "trace": [...], "prefix": [...]} with vocabulary token ids and
/// the reply is {"id": i, "logits": [...]} with n reals, EOS last.
class RemoteScorer : public Scorer {
public:
  /// Launches `command` through /bin/sh and reads the handshake.
  RemoteScorer(const std::string& command, const Vocabulary& vocab) : width_(vocab.formula_size()) {
    std::signal(SIGPIPE, SIG_IGN);
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0) throw ScorerError(std::string("pipe: ") + std::strerror(errno));
    if (pipe(from_child) != 0) {
      close(to_child[0]);
      close(to_child[1]);
      throw ScorerError(std::string("pipe: ") + std::strerror(errno));
    }
    pid_ = fork();
    if (pid_ < 0) throw ScorerError(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    out_fd_ = to_child[1];
    in_fd_ = from_child[0];
    fcntl(out_fd_, F_SETFD, FD_CLOEXEC);
    fcntl(in_fd_, F_SETFD, FD_CLOEXEC);

    try {
      handshake();
    } catch (...) {
      shutdown();
      throw;
    }
  }

  RemoteScorer(const RemoteScorer&) = delete;
  RemoteScorer& operator=(const RemoteScorer&) = delete;

  ~RemoteScorer() override { shutdown(); }

  std::vector<double> next_logits(const TokenSeq& trace, const TokenSeq& prefix) override {
    long id = next_id_++;
    nlohmann::json req{{"id", id}, {"trace", trace.ids}, {"prefix", prefix.ids}};
    write_line(req.dump());
    auto resp = parse(read_line());
    if (!resp.is_object() || !resp.contains("id") || !resp.contains("logits"))
      throw ProtocolError("response must carry id and logits");
    if (!resp["id"].is_number_integer() || resp["id"].get<long>() != id)
      throw ProtocolError("response id " + resp["id"].dump() + " does not match request " + std::to_string(id));
    const auto& arr = resp["logits"];
    if (!arr.is_array()) throw ProtocolError("logits must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& x : arr) {
      if (!x.is_number()) throw ProtocolError("logits must be numbers");
      out.push_back(x.get<double>());
    }
    if (out.size() != width_)
      throw VectorLengthMismatch("peer sent " + std::to_string(out.size()) + " logits, expected " +
                                 std::to_string(width_));
    return out;
  }

private:
  void handshake() {
    auto hello = parse(read_line());
    if (!hello.is_object() || !hello.contains("vocab_size") || !hello.contains("version"))
      throw ProtocolError("handshake must carry vocab_size and version");
    if (!hello["version"].is_number_integer() || hello["version"].get<int>() != kProtocolVersion)
      throw ProtocolError("unsupported protocol version " + hello["version"].dump());
    if (!hello["vocab_size"].is_number_integer() || hello["vocab_size"].get<long>() != static_cast<long>(width_))
      throw ProtocolError("peer vocab_size " + hello["vocab_size"].dump() + " differs from " +
                          std::to_string(width_));
  }

  void shutdown() {
    if (out_fd_ >= 0) close(out_fd_);
    if (in_fd_ >= 0) close(in_fd_);
    out_fd_ = in_fd_ = -1;
    if (pid_ > 0) {
      int status;
      // Give the peer a moment to exit on EOF before forcing it.
      for (int i = 0; i < 50; ++i) {
        if (waitpid(pid_, &status, WNOHANG) == pid_) {
          pid_ = -1;
          return;
        }
        usleep(10'000);
      }
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  static nlohmann::json parse(const std::string& line) {
    try {
      return nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ProtocolError(std::string("malformed record: ") + e.what());
    }
  }

  void write_line(const std::string& s) {
    std::string data = s + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      ssize_t n = write(out_fd_, data.data() + off, data.size() - off);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw PeerClosed("peer stopped reading");
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    for (;;) {
      auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      ssize_t n = read(in_fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw PeerClosed("peer closed its output");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::size_t width_;
  pid_t pid_ = -1;
  int out_fd_ = -1;
  int in_fd_ = -1;
  long next_id_ = 0;
  std::string buffer_;
};

} // namespace ltlmine
