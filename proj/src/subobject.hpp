#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "presheaf.hpp"

namespace qsl {

// Gluing- and restriction-closed family of subsets of a sheaf's stalks.
struct Subsheaf {
  std::shared_ptr<const Presheaf> parent;
  std::vector<std::vector<char>> member;  // member[u][s]

  bool contains(int u, int s) const { return member[u][s] != 0; }
  int count(int u) const;
  int total() const;
  bool same_members(const Subsheaf& o) const { return member == o.member; }
  bool subset_of(const Subsheaf& o) const;
};

Subsheaf full_subsheaf(std::shared_ptr<const Presheaf> f);

// Least gluing-closed subsheaf containing the seed; the seed is first closed
// under restriction.
Subsheaf subsheaf_closure(std::shared_ptr<const Presheaf> f,
                          std::vector<std::vector<char>> seed, const CheckCaps& caps = {});

Subsheaf bottom_subsheaf(std::shared_ptr<const Presheaf> f, const CheckCaps& caps = {});

bool is_subsheaf(const Subsheaf& s, const CheckCaps& caps = {});

// All subsheaves of a sheaf, in a linear extension of pointwise inclusion.
// Throws CapExceeded when the candidate space is larger than cap.
std::vector<Subsheaf> enumerate_subsheaves(std::shared_ptr<const Presheaf> f, long long cap,
                                           const CheckCaps& caps = {});

// Extremal image: least subsheaf of the target through which m factors.
Subsheaf image_subsheaf(const Morphism& m, const CheckCaps& caps = {});

// Subsheaf as a standalone presheaf plus the parent-stalk indices per slot.
struct SubPresheaf {
  Presheaf presheaf;
  std::vector<std::vector<int>> value;  // value[u][slot] = parent stalk element
};
SubPresheaf subsheaf_presheaf(const Subsheaf& s);
Morphism subsheaf_inclusion(const Subsheaf& s);

// Density of a morphism of sheaves: membership of y|_(u^-) in the image at
// u^- already forces membership of y at u. This is the reading under which
// the pullbacks of points of the minus classifier are exactly the dense
// subobjects; see is_dense notes in the tests.
bool is_dense(const Morphism& eta);
bool is_dense_sub(const Subsheaf& s);

// Day convolution tensor computed as a colimit over pairs via union-find.
struct DayTensor {
  Presheaf tensor;
  // rep[u][c]: least (v, w, s, t) node of class c at element u
  std::vector<std::vector<std::array<int, 4>>> rep;
  // class_of[u] maps a node id to its class; node ids are internal
};
DayTensor day_tensor(const Presheaf& f, const Presheaf& g, long long cap = 1ll << 22);

// Binary product on Sub(F): extremal image of A (x)_F B -> F.
Subsheaf star(const Subsheaf& a, const Subsheaf& b, const CheckCaps& caps = {});

// Lattice operations on Sub(F).
Subsheaf sub_meet(const Subsheaf& a, const Subsheaf& b);
Subsheaf sub_join(const Subsheaf& a, const Subsheaf& b, const CheckCaps& caps = {});

enum class TruthVariant { minus, plus };

struct TruthSheaf {
  TruthVariant variant = TruthVariant::minus;
  std::shared_ptr<const Presheaf> omega;
  std::vector<std::vector<int>> value;  // value[u][slot] = quantale element
  std::vector<std::vector<int>> slot;   // slot[u][q] = stalk slot or -1
  std::vector<int> top_point;           // slot of the universal point per element
  std::vector<int> bot_point;
  SheafReport sheaf_report;
  bool theorem_preconditions = false;   // geometric (minus) / full plus set
  std::vector<std::string> missing_flags;
};

// Builds the truth-value presheaf of the variant. Structural preconditions
// (the flags needed to even define the stalks) throw; the theorem-level
// flags are only recorded, and the sheaf verdict is always attached.
TruthSheaf omega_minus(std::shared_ptr<const Quantale> q, const CheckCaps& caps = {});
TruthSheaf omega_plus(std::shared_ptr<const Quantale> q, const CheckCaps& caps = {});

struct CharacteristicMap {
  Morphism chi;
  bool natural = false;
  bool pullback_ok = false;
  std::vector<std::vector<char>> pullback;  // {y : chi_u(y) = top_u}
};

// Characteristic map of a dense subsheaf into the minus truth sheaf.
CharacteristicMap chi_minus(const TruthSheaf& om, const Subsheaf& s);
// Characteristic map of an arbitrary subsheaf into the plus truth sheaf.
CharacteristicMap chi_plus(const TruthSheaf& om, const Subsheaf& s);

struct ClassifierReport {
  TruthVariant variant = TruthVariant::minus;
  bool preconditions_ok = false;
  std::vector<std::string> missing_flags;
  bool omega_is_sheaf = false;
  bool all_ok = false;
  int sheaves_checked = 0;
  int subsheaves_checked = 0;
  int dense_subsheaves = 0;     // minus only
  int skipped = 0;              // enumeration budget exceeded
  long long hom_terminal = -1;  // |Hom(1, Omega)| when the terminal is in the pool
  bool sub_hom_bijection = true;  // plus only
  std::vector<std::string> failures;
};

ClassifierReport verify_classifier(std::shared_ptr<const Quantale> q, TruthVariant variant,
                                   const std::vector<Presheaf>& pool,
                                   long long sub_cap = 1 << 14,
                                   long long morphism_budget = 1ll << 22,
                                   const CheckCaps& caps = {});

struct SubIsoReport {
  bool ok = false;
  int subobject_count = 0;
  int interval_size = 0;
  bool bijective = false;
  bool order_iso = false;
  bool sups_preserved = false;
  bool infs_preserved = false;
  bool star_matches_mult = false;
  bool star_idempotent = true;           // false exhibits the non-locale shadow
  std::vector<int> non_idem_witness;     // {q} with q*q != q
  std::vector<int> distrib_witness;      // {a,b,c} violating meet/join distributivity
  std::vector<std::string> failures;
};

// Checks that b -> (the subsheaf of Q(-,a) supported on [bottom, b]) is a
// quantale isomorphism onto Sub(Q(-,a)), with * computed independently
// through the Day tensor and image closure.
SubIsoReport verify_sub_iso(std::shared_ptr<const Quantale> q, int a, long long sub_cap = 1 << 14,
                            const CheckCaps& caps = {});

}  // namespace qsl
