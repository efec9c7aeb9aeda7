#pragma once

#include <stdexcept>
#include <string>

namespace hetcycle {

/// Bad user input: unknown case, missing or nonpositive parameter, bad flag value.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The cycle structure is inconsistent (shape mismatch, wrong location pair,
/// eigenvalue signs that break the single-expanding-direction requirement).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Too little data to form an estimate.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetcycle
