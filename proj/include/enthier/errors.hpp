#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace enthier {

// Base class for all library errors.  Every error carries a stable,
// machine-readable code string which the CLI surfaces in its JSON error
// object; the what() text is a human-readable explanation.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what_arg)
      : std::runtime_error(what_arg), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// A subsystem index set is out of range, empty where it must not be,
// not strictly increasing, or otherwise malformed.
struct InvalidSubset : Error {
  explicit InvalidSubset(const std::string& m) : Error("InvalidSubset", m) {}
};

// A matrix that must be positive semidefinite has an eigenvalue below the
// accepted negative tolerance band.
struct NotPSD : Error {
  explicit NotPSD(const std::string& m) : Error("NotPSD", m) {}
};

// Subsystem dimension lists disagree where they must match.
struct IncompatibleDims : Error {
  explicit IncompatibleDims(const std::string& m) : Error("IncompatibleDims", m) {}
};

// A computation would exceed its configured resource budget.
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& m) : Error("BudgetExceeded", m) {}
};

// A partition block count k lies outside 2 <= k <= n.
struct InvalidK : Error {
  explicit InvalidK(const std::string& m) : Error("InvalidK", m) {}
};

// A set partition is not a valid canonical partition of {1..n}.
struct InvalidPartition : Error {
  explicit InvalidPartition(const std::string& m) : Error("InvalidPartition", m) {}
};

// A measure parameter (q or alpha) lies outside its admissible range.
struct InvalidParam : Error {
  explicit InvalidParam(const std::string& m) : Error("InvalidParam", m) {}
};

// A quantum state object violates its invariants (normalization, shape,
// hermiticity, unit trace, ...).
struct InvalidState : Error {
  explicit InvalidState(const std::string& m) : Error("InvalidState", m) {}
};

// Malformed external input: unreadable/ill-formed files, bad CLI values.
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& m) : Error("InvalidInput", m) {}
};

}  // namespace enthier
