// Exception types raised by the library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mdnm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments to a library call (out-of-range type, malformed vector, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  enum class Kind { nodes, levels, steps };

  CapExceeded(Kind kind, std::uint64_t limit);

  Kind kind() const { return kind_; }
  std::uint64_t limit() const { return limit_; }

 private:
  Kind kind_;
  std::uint64_t limit_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapTooSmall : public Error {
 public:
  CapTooSmall(double captured_mass, std::int64_t cap);
  double captured_mass() const { return captured_mass_; }

 private:
  double captured_mass_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(double last_iterate, double residual, std::uint64_t iterations);
  double last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  double last_iterate_;
  double residual_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class DegenerateTable : public Error {
 public:
  using Error::Error;
};

class MixedRootTypes : public Error {
 public:
  MixedRootTypes();
};

// Raised while reading configuration or record files.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, std::string message, std::size_t line = 0);
  const std::string& field() const { return field_; }
  // Message without the line and field prefix.
  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::string message_;
  std::size_t line_;
};

}  // namespace mdnm
