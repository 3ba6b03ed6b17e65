#pragma once

#include <string>
#include <vector>

#include "quantale.hpp"

namespace qsl {

// Map between quantale carriers, kept with its endpoints by value.
struct QuantaleMap {
  Quantale source;
  Quantale target;
  std::vector<int> table;  // element of target per source element
};

struct MorphismCheck {
  bool sup_preserving = false;   // binary sups + bottom
  bool top_preserving = false;
  bool lax_mult = false;         // f(a.b) >= f(a).f(b)
  bool exact_mult = false;
  bool lands_in_idempotents = false;  // meaningful when source is a locale
  bool ok() const { return sup_preserving && top_preserving && lax_mult; }
  std::vector<int> witness;      // offending elements for the first failed law
  std::string detail;
};

// Truncated chain 0..k; 0 is top and unit, k is bottom, a.b = min(a+b, k).
Quantale chain_quantale(int k);

// Ideals of Z/N keyed by positive divisors of N; (0) is keyed by N itself.
// (d).(e) = (gcd(d*e, N)), sup = gcd, inf = lcm.
Quantale divisor_quantale(long long N);

// Subsets of an m-element set under inclusion with intersection as product.
Quantale powerset_locale(int m);

// Componentwise product with lexicographic (row-major) element numbering.
Quantale product(const std::vector<Quantale>& factors);

// Interval [l, u] for idempotent l <= u; closed under sup and product.
Quantale interval(const Quantale& q, int l, int u);

// The locale of idempotents together with its inclusion into Q.
// Verifies the adjunction i(e) <= q iff e <= q^- during construction.
std::pair<Quantale, QuantaleMap> idem_locale(const Quantale& q);

MorphismCheck check_csq_morphism(const QuantaleMap& f);

}  // namespace qsl
