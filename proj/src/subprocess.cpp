/*
 * Copyright 2026 The sliceaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sliceaudit/subprocess.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "sliceaudit/error.hpp"

namespace sliceaudit {

Subprocess::Subprocess(const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    fail(Errc::adapter, "pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) {
    fail(Errc::adapter, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  stdin_fd_ = to_child[1];
  stdout_fd_ = from_child[0];
  // A dead child must surface as a read/write error, not kill the harness.
  signal(SIGPIPE, SIG_IGN);
}

Subprocess::~Subprocess() {
  close_stdin();
  if (stdout_fd_ >= 0) {
    ::close(stdout_fd_);
    stdout_fd_ = -1;
  }
  if (!waited_ && pid_ > 0) {
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    waited_ = true;
  }
}

void Subprocess::write_line(std::string_view line) {
  if (stdin_fd_ < 0) {
    fail(Errc::adapter, "write after stdin closed");
  }
  std::string buffer(line);
  buffer.push_back('\n');
  const char* data = buffer.data();
  std::size_t remaining = buffer.size();
  while (remaining > 0) {
    ssize_t written = ::write(stdin_fd_, data, remaining);
    if (written < 0) {
      if (errno == EINTR) continue;
      fail(Errc::adapter, "tool process closed its input: " + std::string(std::strerror(errno)));
    }
    data += written;
    remaining -= static_cast<std::size_t>(written);
  }
}

void Subprocess::close_stdin() {
  if (stdin_fd_ >= 0) {
    ::close(stdin_fd_);
    stdin_fd_ = -1;
  }
}

bool Subprocess::read_line(std::string& out) {
  for (;;) {
    auto newline = read_buffer_.find('\n');
    if (newline != std::string::npos) {
      out = read_buffer_.substr(0, newline);
      read_buffer_.erase(0, newline + 1);
      return true;
    }
    char chunk[4096];
    ssize_t got = ::read(stdout_fd_, chunk, sizeof chunk);
    if (got < 0) {
      if (errno == EINTR) continue;
      fail(Errc::adapter, "read from tool process: " + std::string(std::strerror(errno)));
    }
    if (got == 0) {
      if (read_buffer_.empty()) return false;
      out = read_buffer_;  // final unterminated line
      read_buffer_.clear();
      return true;
    }
    read_buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

int Subprocess::wait() {
  if (waited_) return exit_code_;
  int status = 0;
  while (waitpid(pid_, &status, 0) < 0) {
    if (errno != EINTR) {
      fail(Errc::adapter, "waitpid: " + std::string(std::strerror(errno)));
    }
  }
  waited_ = true;
  if (WIFEXITED(status)) {
    exit_code_ = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    exit_code_ = 128 + WTERMSIG(status);
  } else {
    exit_code_ = -1;
  }
  return exit_code_;
}

}  // namespace sliceaudit
