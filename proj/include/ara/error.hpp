#pragma once

#include <stdexcept>
#include <string>

namespace ara {

// Raised for invalid input data or arguments. The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ara
