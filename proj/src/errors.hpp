#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsl {

enum class ErrKind {
  NotAPoset,
  NotALattice,
  NotAssociative,
  NotDistributive,
  NotMonotone,
  PreconditionViolated,
  CapExceeded,
  NotIdempotentBase,
  EmptyInterval,
  InvalidMetric,
  IdentityViolated,
  CompositionViolated,
  NotCompatible,
  NotDense,
  NotGeometric,
  SyntaxError,
  UnresolvedReference,
  NonRectangularTable,
  BadArgument,
  BudgetExhausted,
};

const char* to_string(ErrKind k);

// Domain error carrying the violated law and concrete witness elements.
struct Error : std::runtime_error {
  ErrKind kind;
  std::vector<int> witness;
  int line = -1, col = -1;  // set for parse diagnostics

  Error(ErrKind k, const std::string& msg, std::vector<int> w = {})
      : std::runtime_error(msg), kind(k), witness(std::move(w)) {}
};

// One violated law found while checking raw tables.
struct Violation {
  ErrKind law;
  std::vector<int> witness;
  std::string detail;
};

}  // namespace qsl
