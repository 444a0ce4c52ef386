#include "qrrestore/harness/decoder.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <vector>

#include "qrrestore/image_io.hpp"

extern char** environ;

namespace qrrestore::harness {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string rtrim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

// Removes its file on destruction.
class TempPng {
 public:
  TempPng() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "qrr-XXXXXX.png").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    const int fd = ::mkstemps(buf.data(), 4);
    if (fd < 0) throw IoError("cannot create temporary image: " + std::string(std::strerror(errno)));
    ::close(fd);
    path_ = buf.data();
  }
  ~TempPng() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempPng(const TempPng&) = delete;
  TempPng& operator=(const TempPng&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

std::string DecoderAdapter::command_for(const std::filesystem::path& image) const {
  if (command_template.empty()) throw ConfigError("decoder command is empty");
  const std::string quoted = shell_quote(image.string());
  std::string cmd = command_template;
  const std::string key = "{path}";
  const std::size_t at = cmd.find(key);
  if (at == std::string::npos) return cmd + " " + quoted;
  for (std::size_t pos = at; pos != std::string::npos; pos = cmd.find(key, pos + quoted.size())) {
    cmd.replace(pos, key.size(), quoted);
  }
  return cmd;
}

DecodeOutcome run_decoder(const DecoderAdapter& d, const std::filesystem::path& image) {
  const std::string cmd = d.command_for(image);

  int pipefd[2];
  if (::pipe2(pipefd, O_CLOEXEC) != 0) throw ConfigError("pipe failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipefd[1], STDOUT_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const char* argv[] = {"/bin/sh", "-c", cmd.c_str(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char**>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(pipefd[1]);
  if (rc != 0) {
    ::close(pipefd[0]);
    throw ConfigError("cannot start decoder: " + std::string(std::strerror(rc)));
  }

  DecodeOutcome out;
  std::string captured;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(d.timeout_s);
  char buf[4096];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    if (left <= 0) {
      out.timed_out = true;
      break;
    }
    pollfd pfd{pipefd[0], POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left));
    if (pr < 0 && errno == EINTR) continue;
    if (pr == 0) continue;
    const ssize_t n = ::read(pipefd[0], buf, sizeof buf);
    if (n > 0) {
      captured.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  ::close(pipefd[0]);

  int status = 0;
  if (out.timed_out) {
    ::kill(-pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    std::cerr << "warning: decoder timed out after " << d.timeout_s << " s on " << image << "\n";
    return out;
  }
  // Output closed; the child may still be running until the deadline.
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      out.timed_out = true;
      std::cerr << "warning: decoder timed out after " << d.timeout_s << " s on " << image << "\n";
      return out;
    }
    ::usleep(1000);
  }

  out.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (out.exit_status == 126 || out.exit_status == 127) {
    throw ConfigError("decoder command not runnable: " + d.command_template);
  }
  out.payload = rtrim(std::move(captured));
  out.success = out.exit_status == 0 && !out.payload.empty();
  return out;
}

bool score_readability(const GrayImage& img, const DecoderAdapter& d,
                       const std::optional<std::string>& expected_payload) {
  const TempPng tmp;
  write_png(img, tmp.path());
  const DecodeOutcome r = run_decoder(d, tmp.path());
  if (!r.success) return false;
  return !expected_payload || r.payload == rtrim(*expected_payload);
}

}  // namespace qrrestore::harness
