#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or a value violating a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Norm drift or another numerical failure inside time integration.
class IntegratorError : public Error {
 public:
  using Error::Error;
};

// Pulse program that cannot be turned into a drive timeline.
class CompileError : public Error {
 public:
  CompileError(std::size_t segment, const std::string& what)
      : Error("segment " + std::to_string(segment) + ": " + what), segment_(segment) {}

  std::size_t segment() const noexcept { return segment_; }

 private:
  std::size_t segment_;
};

// Config text or CLI flag rejected; line/column are 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, std::size_t column, const std::string& what)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": " + what),
        line_(line),
        column_(column) {}
  explicit ConfigError(const std::string& what) : ConfigError(0, 0, what) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ccd
