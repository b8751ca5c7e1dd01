#pragma once

#include <stdexcept>
#include <string>

namespace fsgm {

// Raised for violated preconditions and malformed inputs across the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fsgm
