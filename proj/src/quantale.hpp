#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qsl {

// Witness elements for a failed axiom flag, with an optional note for flags
// that are undefined without their prerequisite flags.
struct FlagWitness {
  std::vector<int> elems;
  std::string note;
};

struct AxiomProfile {
  bool commutative = false;
  bool semicartesian = false;
  bool unital = false;
  bool integral = false;
  bool idempotent = false;
  bool locale = false;
  bool right_sided = false;
  bool divisible = false;
  bool strongly_divisible = false;
  bool double_distributive = false;
  bool coherent = false;
  bool strict_linear = false;
  bool geometric = false;
  int unit = -1;                           // witness when unital
  std::optional<int> p_artinian_degree;    // least d with q^(d+1) = q^d for all q; unital carriers only
  std::map<std::string, FlagWitness> failures;  // keyed by flag name

  bool flag(const std::string& name) const;
  static const std::vector<std::string>& flag_names();
};

// Finite quantale: complete lattice plus an associative multiplication that
// distributes over arbitrary joins. Immutable after construction; carriers
// are index sets 0..n-1 and subsets travel as 64-bit masks.
class Quantale {
 public:
  static constexpr int kCarrierCap = 64;

  // Validates the tables and builds the quantale; throws Error on the first
  // violated law. check_laws() lists every violation without throwing.
  static Quantale make(const std::vector<std::vector<char>>& leq,
                       const std::vector<std::vector<int>>& mult,
                       std::vector<std::string> labels = {});
  static std::vector<Violation> check_laws(const std::vector<std::vector<char>>& leq,
                                           const std::vector<std::vector<int>>& mult);

  int size() const { return n_; }
  bool leq(int a, int b) const { return (up_[a] >> b) & 1u; }
  int mul(int a, int b) const { return mult_[a][b]; }
  int join(int a, int b) const { return join_[a][b]; }
  int meet(int a, int b) const { return meet_[a][b]; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }
  int unit() const { return unit_; }  // -1 when no unit exists
  uint64_t carrier_mask() const { return n_ == 64 ? ~0ull : (1ull << n_) - 1; }
  uint64_t down(int u) const { return down_[u]; }
  uint64_t up(int u) const { return up_[u]; }
  uint64_t idempotents() const { return idem_; }
  bool is_idem(int a) const { return (idem_ >> a) & 1u; }

  int sup(uint64_t subset) const;   // sup(empty) = bottom
  int inf(uint64_t subset) const;   // inf(empty) = top

  const AxiomProfile& profile() const { return profile_; }
  const std::string& label(int a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  int element_by_label(const std::string& s) const;  // -1 when absent

  // q^- : largest idempotent below q. Requires commutative + semicartesian.
  int approx_minus(int q) const;
  // q^+ : least p with q = q (.) p. Requires unital, commutative,
  // semicartesian, double-distributive.
  int approx_plus(int q) const;
  bool has_minus() const { return !minus_.empty(); }
  bool has_plus() const { return !plus_.empty(); }

  // Largest c with a (.) c <= b.
  int residual(int a, int b) const;

  // Least k >= 1 with q^(k+1) = q^k, plus the stable value. Throws
  // PreconditionViolated if the power sequence is periodic (possible only
  // for non-semicartesian multiplications).
  std::pair<int, int> power_stabilization(int q) const;

  // x preceq y  iff  x = x (.) y.
  bool preceq(int x, int y) const { return x == mul(x, y); }

  bool is_partition(int q, const std::vector<int>& family) const;
  std::vector<int> induce_partition(const std::vector<int>& family, int a) const;

  // Lexicographically least (leq, mult) table pair over all renumberings.
  std::string canonical_form() const;

 private:
  Quantale() = default;
  void build_caches();
  void compute_profile();

  int n_ = 0;
  std::vector<uint64_t> up_;    // up_[a] bit b: a <= b
  std::vector<uint64_t> down_;  // down_[a] bit b: b <= a
  std::vector<std::vector<int>> mult_;
  std::vector<std::vector<int>> join_, meet_;
  int bottom_ = 0, top_ = 0, unit_ = -1;
  uint64_t idem_ = 0;
  std::vector<int> minus_;  // empty unless commutative semicartesian
  std::vector<int> plus_;   // empty unless unital comm. semicart. double-distributive
  std::vector<std::string> labels_;
  AxiomProfile profile_;
};

}  // namespace qsl
