// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bm {

inline constexpr const char* kVersion = "0.1.0";

// Configuration errors are the caller's fault (bad flags, missing columns,
// invalid parameters); runtime errors are everything else (I/O, corrupt
// documents). The CLI maps them to exit codes 2 and 1.
enum class ErrorKind { config, runtime };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  explicit Error(const std::string& what) : Error(ErrorKind::config, what) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorKind::config, what); }
[[noreturn]] inline void fail_runtime(const std::string& what) { throw Error(ErrorKind::runtime, what); }

}  // namespace bm
