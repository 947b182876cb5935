#pragma once

#include <stdexcept>
#include <string>

namespace thick {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : Error { using Error::Error; };
struct StructureError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct DecompositionError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };

// Raised when an iterative search runs out of evaluations. Carries the best
// enclosing interval found so far.
struct BudgetError : Error {
  BudgetError(const std::string& what, double lo, double hi)
      : Error(what), lo(lo), hi(hi) {}
  double lo;
  double hi;
};

}  // namespace thick
