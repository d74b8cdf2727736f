#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace padic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PrecisionError : public Error { using Error::Error; };
class ContextMismatch : public Error { using Error::Error; };
class NotInvertible : public Error { using Error::Error; };
class InexactDivision : public Error { using Error::Error; };
class ArityError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class ResourceError : public Error { using Error::Error; };
class LevelError : public Error { using Error::Error; };
class GuardError : public Error { using Error::Error; };

/// Raised when an A-class wrapper meets an inner value not divisible by p^n.
class NotInClassA : public Error { using Error::Error; };

/// Raised when an induced map is requested for a function that does not
/// preserve congruences at the requested level.
class NotCompatible : public Error { using Error::Error; };

/// Internal consistency failure: two independent routes disagreed.
class CrossCheckFailure : public Error { using Error::Error; };

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace padic
