#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

/// A value violates a domain invariant (cardinality caps, ordering hierarchy, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request would exceed an enumeration or memory guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed structured-text input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling could not produce a typical word within the attempt cap.
class DegenerateParameters : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace secrecy
