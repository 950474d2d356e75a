#pragma once

#include <stdexcept>
#include <string>

namespace qfcert {

// Base class for everything the engine throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Two values living over different field instances were combined.
struct InstanceMismatch : Error {
  explicit InstanceMismatch(const std::string& what) : Error(what) {}
};

// A reduction was requested that the instance's tables do not determine.
// Never silently collapses to the trivial class.
struct UndeterminedReduction : Error {
  explicit UndeterminedReduction(const std::string& what) : Error(what) {}
};

// An operation precondition was violated (shape, parity, degree, ...).
struct Precondition : Error {
  explicit Precondition(const std::string& what) : Error(what) {}
};

}  // namespace qfcert
