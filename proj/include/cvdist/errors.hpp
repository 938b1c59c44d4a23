#pragma once

#include <stdexcept>
#include <string>

namespace cvdist {

// Raised when a requested Fock-space dimension exceeds the configured budget.
class capacity_error : public std::runtime_error {
public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvdist
