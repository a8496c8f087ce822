#pragma once

#include <stdexcept>
#include <string>

namespace conn {

// Malformed input file or config. Carries a file:line location when known.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_ = 0;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conn
