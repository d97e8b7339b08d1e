#pragma once

#include <stdexcept>
#include <string>

namespace evodesign {

/// Input could not be parsed. The message carries the location when the
/// underlying parser provides one.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally well-formed input that violates a model invariant. The
/// message names the offending identifier or pair.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation invoked in a state that does not admit it (rating without a
/// pending presentation, stepping a halted episode, ...).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evodesign
