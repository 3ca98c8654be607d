#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace supersix {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed strategy string. `position` is the 0-based byte offset of the
// first offending character (or the end of the string for a short input).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        detail_(what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }
  // The message without the position suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t position_;
};

// A total above the configured cap, or an enumeration larger than allowed.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ExhaustiveCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

// Elimination found no nonzero pivot. Never expected for a valid game model.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class MissingLevel : public Error {
 public:
  using Error::Error;
};

class StageAssumptionViolated : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<std::string> visited)
      : Error(what), visited_(std::move(visited)) {}

  // Formatted strategies visited by the iteration, oldest first.
  const std::vector<std::string>& visited() const noexcept { return visited_; }

 private:
  std::vector<std::string> visited_;
};

}  // namespace supersix
