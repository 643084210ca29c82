#pragma once

#include <stdexcept>
#include <string>

namespace qlocal {

// Thrown when a mathematical precondition fails: the caller asked for a
// quantity outside the regime where the formula or operation is defined
// (e.g. a decay bound evaluated below its validity threshold). Callers that
// sweep parameter grids should treat this as "refused", never as a number.
class precondition_error : public std::domain_error {
 public:
  explicit precondition_error(const std::string& msg) : std::domain_error(msg) {}
};

// Thrown on structurally malformed inputs: dimension mismatches, empty
// regions where non-empty ones are required, unsupported site sets, etc.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown when a configuration document is rejected (unknown keys, missing
// required fields, bad types, unsupported version).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qlocal
