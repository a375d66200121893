#pragma once

#include <stdexcept>
#include <string>

namespace tvroute {

/// Bad configuration (invalid grid spec, non-positive perturbed speed, malformed
/// scenario file, ...). Messages carry the offending location where known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Query outside a provider's declared domain (gridded fields only).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tvroute
