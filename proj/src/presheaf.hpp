#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "quantale.hpp"

namespace qsl {

// Finite-set-valued presheaf on a finite quantale. Stalks are index sets
// 0..stalk[u]-1; res[u][v] is the total restriction table F(u) -> F(v),
// present exactly when v <= u and F(u) is nonempty.
struct Presheaf {
  std::shared_ptr<const Quantale> base;
  std::vector<int> stalk;
  std::vector<std::vector<std::vector<int>>> res;

  int size(int u) const { return stalk[u]; }
  int restrict(int u, int v, int s) const { return res[u][v][s]; }
  bool same_shape(const Presheaf& other) const {
    return stalk == other.stalk && res == other.res;
  }
};

struct Cover {
  int target = 0;
  uint64_t members = 0;  // subset mask; sup(members) == target
  std::vector<int> list() const;
};

struct CoverEnumeration {
  std::vector<Cover> covers;
  bool truncated = false;
};

struct SheafReport {
  bool separated = true;
  bool sheaf = true;
  bool truncated = false;
  int witness_element = -1;
  uint64_t witness_cover = 0;
  std::vector<int> witness_family;
  std::string note;
  bool definitive_sheaf() const { return sheaf && !truncated; }
};

struct Morphism {
  std::shared_ptr<const Presheaf> source;
  std::shared_ptr<const Presheaf> target;
  std::vector<std::vector<int>> comp;  // comp[u] : F(u) -> G(u)
};

struct CheckCaps {
  long long covers_per_element = 1ll << 16;
  long long family_budget = 1ll << 22;
};

std::vector<Violation> validate_presheaf(const Presheaf& f);

// All subsets of the down-set of u whose sup is u; includes the empty cover
// exactly when u is the bottom element.
CoverEnumeration enumerate_covers(const Quantale& q, int u, long long cap);

// All s in F(u) restricting onto the family; throws NotCompatible with the
// offending index pair when the family disagrees on a pairwise product.
std::vector<int> glue(const Presheaf& f, const Cover& c, const std::vector<int>& family);

SheafReport sheaf_check(const Presheaf& f, const CheckCaps& caps = {});

Presheaf representable(std::shared_ptr<const Quantale> base, int v);
Presheaf terminal_presheaf(std::shared_ptr<const Quantale> base);

// F|_u : same stalks below u, empty above. Requires a sheaf.
Presheaf restrict_to(const Presheaf& f, int u, const CheckCaps& caps = {});

// F^(u) : v -> F(u . v). Requires a sheaf.
Presheaf shift_by(const Presheaf& f, int u, const CheckCaps& caps = {});

// Balls of an integer metric over the chain quantale 0..k; radius k is
// collapsed to a single point.
Presheaf ball_sheaf(const std::vector<std::vector<int>>& metric, const std::vector<int>& A,
                    int k);

// Componentwise presheaf over the product of the bases.
Presheaf product_presheaf(const std::vector<Presheaf>& parts);

bool validate_morphism(const Morphism& m, std::vector<int>* witness = nullptr);
bool is_mono(const Morphism& m);

struct MorphismEnumeration {
  std::vector<std::vector<std::vector<int>>> all;  // component tables
  bool truncated = false;
};

// Every natural transformation F -> G, found by depth-first assignment with
// naturality pruning; budget caps the explored node count.
MorphismEnumeration enumerate_morphisms(const Presheaf& f, const Presheaf& g,
                                        long long budget = 1ll << 22);

}  // namespace qsl
