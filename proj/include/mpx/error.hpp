#pragma once

#include <stdexcept>
#include <string>

namespace mpx {

/// Bad input: wrong dimensions, malformed model documents, violated invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A coupling search ran past its step budget without reaching a rank-1 product.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(std::size_t cap)
      : std::runtime_error("coupling cap exceeded: model may lack MLP (cap=" +
                           std::to_string(cap) + ")"),
        cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace mpx
