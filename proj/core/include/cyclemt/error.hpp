#pragma once

#include <stdexcept>
#include <string>

namespace cyclemt {

/// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration: unknown language, unwritable store, malformed config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a precondition (empty text, N = 0, mismatched languages).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The translation backend produced no usable answer.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Network failure or non-2xx reply after all retries were spent.
class TransportError : public BackendError {
 public:
  TransportError(const std::string& what, int status, int attempts)
      : BackendError(what + " (status " + std::to_string(status) + ", attempts " +
                     std::to_string(attempts) + ")"),
        status_(status),
        attempts_(attempts) {}

  /// HTTP status of the last attempt, or 0 when no response was received.
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

/// Every candidate of a self-reflective run failed.
class PipelineError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cyclemt
