#pragma once

#include <stdexcept>

namespace mmvd {

/// Raised when a numerical self-check fails (not a user input problem).
class internal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mmvd
