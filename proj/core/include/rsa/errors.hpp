#pragma once

#include <stdexcept>
#include <string>

namespace rsa {

// Malformed or inconsistent inputs: bad dimensions, non-finite values,
// out-of-range parameters, unparseable files.
class invalid_input : public std::runtime_error {
 public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Numerically degenerate situations: zero signal, no residual degrees of
// freedom, insufficient rows for a requested protocol.
class degenerate_error : public std::runtime_error {
 public:
  explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rsa
