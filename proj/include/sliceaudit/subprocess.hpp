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

#ifndef SLICEAUDIT_SUBPROCESS_HPP_
#define SLICEAUDIT_SUBPROCESS_HPP_

#include <string>
#include <string_view>

namespace sliceaudit {

// Child process with piped stdin/stdout; stderr passes through to ours.
// The command runs under /bin/sh -c.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  void write_line(std::string_view line);  // appends '\n' and flushes
  void close_stdin();
  bool read_line(std::string& out);  // false on EOF

  // Reaps the child; returns the exit code, or 128+signal when killed.
  int wait();

 private:
  int pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::string read_buffer_;
  bool waited_ = false;
  int exit_code_ = -1;
};

}  // namespace sliceaudit

#endif  // SLICEAUDIT_SUBPROCESS_HPP_
