#pragma once

#include <stdexcept>
#include <string>

namespace tpauc {

/// Raised when an input violates a documented precondition or the data is
/// unusable (malformed file, missing class, empty hard set, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file; carries the 1-based line number of the offending row.
class ParseError : public DomainError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Throws DomainError(message) when `ok` is false.
void require(bool ok, const std::string& message);

}  // namespace tpauc
