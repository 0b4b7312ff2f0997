#include "tpauc/errors.hpp"

namespace tpauc {

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : DomainError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

}  // namespace tpauc
