#pragma once

#include <optional>
#include <string>

#include "quantale.hpp"

namespace qsl {

// Search over commutative semicartesian quantale tables for a profile
// property. Sizes up to 6 run the exhaustive enumerator (lattices up to
// isomorphism, multiplications determined by their join-irreducible cells);
// larger sizes sample seeded random tables.
struct FuzzResult {
  std::string target;
  int size = 0;
  std::string mode;  // exhaustive | random
  uint64_t seed = 0;
  bool found = false;
  bool exhausted = false;  // exhaustive space fully searched without a hit
  long long lattices = 0;
  long long examined = 0;  // valid quantales inspected
  long long distinct = 0;  // distinct canonical forms among them
  long long budget_used = 0;
  std::optional<Quantale> witness;
  std::string canonical;
};

bool fuzz_target_holds(const AxiomProfile& p, const std::string& target);

FuzzResult fuzz_search(int size, const std::string& target, long long budget,
                       std::optional<uint64_t> seed);

}  // namespace qsl
