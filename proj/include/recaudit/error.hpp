#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recaudit {

/// Malformed or inconsistent input data. Carries the originating location
/// when one is known (line and column are 1-based, 0 means unknown).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}

  DataError(const std::string& file, std::size_t line, std::size_t column,
            const std::string& what)
      : std::runtime_error(locate(file, line, column) + what),
        file_(file), line_(line), column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string locate(const std::string& file, std::size_t line,
                            std::size_t column) {
    std::string s = file;
    if (line != 0) s += ":" + std::to_string(line);
    if (column != 0) s += ":" + std::to_string(column);
    return s.empty() ? s : s + ": ";
  }

  std::string file_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// Two rows claim the same primary key.
class DuplicateKeyError : public DataError {
 public:
  DuplicateKeyError(const std::string& file, std::size_t line,
                    const std::string& key, const std::string& detail = {})
      : DataError(file, line, 0,
                  "duplicate key '" + key + "'" +
                      (detail.empty() ? std::string{} : " (" + detail + ")")),
        key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Bad run configuration: unreadable inputs, invalid flags, unwritable output.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation's precondition does not hold for the given arguments.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace recaudit
