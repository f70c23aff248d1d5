#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mht {

// Scenario or input validation failed; collects every issue found so the
// user sees the full list at once.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string msg = "validation failed:";
    for (const auto& s : issues) {
      msg += "\n  - " + s;
    }
    return msg;
  }
  std::vector<std::string> issues_;
};

// Scenario file could not be read or is not well-formed (I/O or syntax, as
// opposed to semantically invalid values).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Inputs violate a mathematical precondition of the routine (as opposed to a
// malformed scenario file).
class HypothesisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A closed-form solution was requested at a point/time where it does not
// apply (e.g. after the supply pulse has passed).
class OutsideValidity : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mht
