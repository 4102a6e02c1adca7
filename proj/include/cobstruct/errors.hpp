#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cobstruct {

/// Input data violates a documented invariant (malformed hom, bad scenario, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A hypothesis of one of the Floer-theoretic theorems consumed as an axiom
/// does not hold; `hypothesis()` names it.
class AdmissibilityError : public ValidationError {
 public:
  AdmissibilityError(std::string hypothesis, const std::string& detail)
      : ValidationError(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)), detail_(detail) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string hypothesis_;
  std::string detail_;
};

/// The problem lies outside the decidable fragment the solver supports.
class UnsupportedProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cobstruct
