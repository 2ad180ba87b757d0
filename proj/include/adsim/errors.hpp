#pragma once

#include <stdexcept>
#include <string>

namespace adsim {

// Raised for invalid scenario files and malformed policy/config inputs.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adsim
