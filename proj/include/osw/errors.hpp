#pragma once

#include <stdexcept>
#include <string>

namespace osw {

// Malformed documents, broken invariants, bad arguments, domain violations.
// The CLI maps this to exit code 1.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure during evaluation: inversion outside the attainable range,
// optimizer non-convergence, non-finite intermediate. CLI exit code 2.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace osw
