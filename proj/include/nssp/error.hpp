// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace nssp {

enum class ErrorKind {
  InvalidArgument,
  Config,
  Format,
  Degenerate,
  Io,
};

/// Single exception type for the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace detail
}  // namespace nssp
