#pragma once

#include <stdexcept>
#include <string>

namespace reflexive {

/// Failure raised by library operations. `code()` is a stable machine-readable
/// tag (e.g. "out_of_domain", "empty_slice") that callers and the CLI key on.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace reflexive
