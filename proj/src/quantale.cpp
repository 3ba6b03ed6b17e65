#include "quantale.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace qsl {

const char* to_string(ErrKind k) {
  switch (k) {
    case ErrKind::NotAPoset: return "NotAPoset";
    case ErrKind::NotALattice: return "NotALattice";
    case ErrKind::NotAssociative: return "NotAssociative";
    case ErrKind::NotDistributive: return "NotDistributive";
    case ErrKind::NotMonotone: return "NotMonotone";
    case ErrKind::PreconditionViolated: return "PreconditionViolated";
    case ErrKind::CapExceeded: return "CapExceeded";
    case ErrKind::NotIdempotentBase: return "NotIdempotentBase";
    case ErrKind::EmptyInterval: return "EmptyInterval";
    case ErrKind::InvalidMetric: return "InvalidMetric";
    case ErrKind::IdentityViolated: return "IdentityViolated";
    case ErrKind::CompositionViolated: return "CompositionViolated";
    case ErrKind::NotCompatible: return "NotCompatible";
    case ErrKind::NotDense: return "NotDense";
    case ErrKind::NotGeometric: return "NotGeometric";
    case ErrKind::SyntaxError: return "SyntaxError";
    case ErrKind::UnresolvedReference: return "UnresolvedReference";
    case ErrKind::NonRectangularTable: return "NonRectangularTable";
    case ErrKind::BadArgument: return "BadArgument";
    case ErrKind::BudgetExhausted: return "BudgetExhausted";
  }
  return "Unknown";
}

bool AxiomProfile::flag(const std::string& name) const {
  if (name == "commutative") return commutative;
  if (name == "semicartesian") return semicartesian;
  if (name == "unital") return unital;
  if (name == "integral") return integral;
  if (name == "idempotent") return idempotent;
  if (name == "locale") return locale;
  if (name == "right_sided") return right_sided;
  if (name == "divisible") return divisible;
  if (name == "strongly_divisible") return strongly_divisible;
  if (name == "double_distributive") return double_distributive;
  if (name == "coherent") return coherent;
  if (name == "strict_linear") return strict_linear;
  if (name == "geometric") return geometric;
  throw Error(ErrKind::BadArgument, "unknown axiom flag: " + name);
}

const std::vector<std::string>& AxiomProfile::flag_names() {
  static const std::vector<std::string> names = {
      "commutative",  "semicartesian",      "unital",
      "integral",     "idempotent",         "locale",
      "right_sided",  "divisible",          "strongly_divisible",
      "double_distributive", "coherent",    "strict_linear",
      "geometric"};
  return names;
}

namespace {

// Least upper bound of {a,b} by scan; -1 when none exists.
int scan_lub(const std::vector<std::vector<char>>& leq, int a, int b) {
  const int n = static_cast<int>(leq.size());
  int best = -1;
  for (int c = 0; c < n; ++c) {
    if (!leq[a][c] || !leq[b][c]) continue;
    if (best == -1 || leq[c][best]) best = c;
  }
  if (best == -1) return -1;
  for (int c = 0; c < n; ++c)
    if (leq[a][c] && leq[b][c] && !leq[best][c]) return -1;
  return best;
}

int scan_glb(const std::vector<std::vector<char>>& leq, int a, int b) {
  const int n = static_cast<int>(leq.size());
  int best = -1;
  for (int c = 0; c < n; ++c) {
    if (!leq[c][a] || !leq[c][b]) continue;
    if (best == -1 || leq[best][c]) best = c;
  }
  if (best == -1) return -1;
  for (int c = 0; c < n; ++c)
    if (leq[c][a] && leq[c][b] && !leq[c][best]) return -1;
  return best;
}

}  // namespace

std::vector<Violation> Quantale::check_laws(const std::vector<std::vector<char>>& leq,
                                            const std::vector<std::vector<int>>& mult) {
  std::vector<Violation> out;
  const int n = static_cast<int>(leq.size());
  if (n < 1) {
    out.push_back({ErrKind::BadArgument, {}, "carrier must have at least one element"});
    return out;
  }
  if (n > kCarrierCap) {
    out.push_back({ErrKind::CapExceeded, {n}, "carrier exceeds cap of 64"});
    return out;
  }
  if (static_cast<int>(mult.size()) != n) {
    out.push_back({ErrKind::NonRectangularTable, {}, "mult table has wrong row count"});
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(leq[i].size()) != n) {
      out.push_back({ErrKind::NonRectangularTable, {i}, "order row has wrong length"});
      return out;
    }
    if (static_cast<int>(mult[i].size()) != n) {
      out.push_back({ErrKind::NonRectangularTable, {i}, "mult row has wrong length"});
      return out;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mult[a][b] < 0 || mult[a][b] >= n) {
        out.push_back({ErrKind::BadArgument, {a, b}, "mult entry out of range"});
        return out;
      }

  bool poset_ok = true;
  for (int a = 0; a < n && poset_ok; ++a)
    if (!leq[a][a]) {
      out.push_back({ErrKind::NotAPoset, {a}, "order not reflexive"});
      poset_ok = false;
    }
  for (int a = 0; a < n && poset_ok; ++a)
    for (int b = 0; b < n && poset_ok; ++b)
      if (a != b && leq[a][b] && leq[b][a]) {
        out.push_back({ErrKind::NotAPoset, {a, b}, "order not antisymmetric"});
        poset_ok = false;
      }
  for (int a = 0; a < n && poset_ok; ++a)
    for (int b = 0; b < n && poset_ok; ++b)
      for (int c = 0; c < n && poset_ok; ++c)
        if (leq[a][b] && leq[b][c] && !leq[a][c]) {
          out.push_back({ErrKind::NotAPoset, {a, b, c}, "order not transitive"});
          poset_ok = false;
        }
  if (!poset_ok) return out;

  bool lattice_ok = true;
  std::vector<std::vector<int>> join(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      join[a][b] = scan_lub(leq, a, b);
      if (join[a][b] == -1) {
        if (lattice_ok)
          out.push_back({ErrKind::NotALattice, {a, b}, "pair has no least upper bound"});
        lattice_ok = false;
      }
      if (scan_glb(leq, a, b) == -1) {
        if (lattice_ok)
          out.push_back({ErrKind::NotALattice, {a, b}, "pair has no greatest lower bound"});
        lattice_ok = false;
      }
    }
  if (!lattice_ok) return out;

  int bottom = 0;
  for (int a = 0; a < n; ++a) {
    bool is_bot = true;
    for (int b = 0; b < n; ++b) is_bot = is_bot && leq[a][b];
    if (is_bot) bottom = a;
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mult[mult[a][b]][c] != mult[a][mult[b][c]]) {
          out.push_back({ErrKind::NotAssociative, {a, b, c}, "(a.b).c != a.(b.c)"});
          goto assoc_done;
        }
assoc_done:

  // Binary joins plus the empty join decide distributivity on a finite carrier.
  for (int a = 0; a < n; ++a) {
    if (mult[a][bottom] != bottom) {
      out.push_back({ErrKind::NotDistributive, {a}, "a . bottom != bottom"});
      break;
    }
    if (mult[bottom][a] != bottom) {
      out.push_back({ErrKind::NotDistributive, {a}, "bottom . a != bottom"});
      break;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (mult[a][join[b][c]] != join[mult[a][b]][mult[a][c]]) {
          out.push_back({ErrKind::NotDistributive, {a, b, c}, "a.(b v c) != (a.b) v (a.c)"});
          goto distrib_done;
        }
        if (mult[join[b][c]][a] != join[mult[b][a]][mult[c][a]]) {
          out.push_back({ErrKind::NotDistributive, {a, b, c}, "(b v c).a != (b.a) v (c.a)"});
          goto distrib_done;
        }
      }
distrib_done:

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (!leq[b][c]) continue;
        if (!leq[mult[a][b]][mult[a][c]] || !leq[mult[b][a]][mult[c][a]]) {
          out.push_back({ErrKind::NotMonotone, {a, b, c}, "multiplication not increasing"});
          goto mono_done;
        }
      }
mono_done:

  return out;
}

Quantale Quantale::make(const std::vector<std::vector<char>>& leq,
                        const std::vector<std::vector<int>>& mult,
                        std::vector<std::string> labels) {
  auto violations = check_laws(leq, mult);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::ostringstream os;
    os << to_string(v.law) << ": " << v.detail << " (witness:";
    for (int w : v.witness) os << ' ' << w;
    os << ")";
    if (violations.size() > 1) os << " and " << violations.size() - 1 << " more";
    throw Error(v.law, os.str(), v.witness);
  }

  Quantale q;
  q.n_ = static_cast<int>(leq.size());
  q.up_.assign(q.n_, 0);
  q.down_.assign(q.n_, 0);
  for (int a = 0; a < q.n_; ++a)
    for (int b = 0; b < q.n_; ++b)
      if (leq[a][b]) {
        q.up_[a] |= 1ull << b;
        q.down_[b] |= 1ull << a;
      }
  q.mult_ = mult;
  if (labels.empty()) {
    labels.resize(q.n_);
    for (int a = 0; a < q.n_; ++a) labels[a] = std::to_string(a);
  }
  if (static_cast<int>(labels.size()) != q.n_)
    throw Error(ErrKind::BadArgument, "label count does not match carrier size");
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j])
        throw Error(ErrKind::BadArgument, "duplicate element label: " + labels[i],
                    {static_cast<int>(i), static_cast<int>(j)});
  q.labels_ = std::move(labels);
  q.build_caches();
  q.compute_profile();
  return q;
}

void Quantale::build_caches() {
  join_.assign(n_, std::vector<int>(n_, 0));
  meet_.assign(n_, std::vector<int>(n_, 0));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) {
      uint64_t ub = up_[a] & up_[b];
      int best = std::countr_zero(ub);
      for (uint64_t m = ub; m; m &= m - 1) {
        int c = std::countr_zero(m);
        if (leq(c, best)) best = c;
      }
      join_[a][b] = best;
      uint64_t lb = down_[a] & down_[b];
      best = std::countr_zero(lb);
      for (uint64_t m = lb; m; m &= m - 1) {
        int c = std::countr_zero(m);
        if (leq(best, c)) best = c;
      }
      meet_[a][b] = best;
    }
  bottom_ = 0;
  top_ = 0;
  for (int a = 0; a < n_; ++a) {
    if (up_[a] == carrier_mask()) bottom_ = a;
    if (down_[a] == carrier_mask()) top_ = a;
  }
  unit_ = -1;
  for (int e = 0; e < n_; ++e) {
    bool is_unit = true;
    for (int a = 0; a < n_ && is_unit; ++a)
      is_unit = mult_[e][a] == a && mult_[a][e] == a;
    if (is_unit) {
      unit_ = e;
      break;
    }
  }
  idem_ = 0;
  for (int a = 0; a < n_; ++a)
    if (mult_[a][a] == a) idem_ |= 1ull << a;
}

int Quantale::sup(uint64_t subset) const {
  int acc = bottom_;
  for (uint64_t m = subset; m; m &= m - 1) acc = join_[acc][std::countr_zero(m)];
  return acc;
}

int Quantale::inf(uint64_t subset) const {
  int acc = top_;
  for (uint64_t m = subset; m; m &= m - 1) acc = meet_[acc][std::countr_zero(m)];
  return acc;
}

int Quantale::element_by_label(const std::string& s) const {
  for (int a = 0; a < n_; ++a)
    if (labels_[a] == s) return a;
  return -1;
}

int Quantale::approx_minus(int q) const {
  if (minus_.empty())
    throw Error(ErrKind::PreconditionViolated,
                "q^- requires a commutative semicartesian quantale");
  return minus_[q];
}

int Quantale::approx_plus(int q) const {
  if (plus_.empty())
    throw Error(ErrKind::PreconditionViolated,
                "q^+ requires a unital commutative semicartesian double-distributive quantale");
  return plus_[q];
}

int Quantale::residual(int a, int b) const {
  uint64_t m = 0;
  for (int c = 0; c < n_; ++c)
    if (leq(mul(a, c), b)) m |= 1ull << c;
  return sup(m);
}

std::pair<int, int> Quantale::power_stabilization(int q) const {
  int v = q;
  for (int k = 1; k <= n_ + 1; ++k) {
    int next = mul(v, q);
    if (next == v) {
      // Cross-check against q^- where the approximation is defined: a finite
      // stabilized power chain lands exactly on the idempotent approximation.
      if (!minus_.empty() && v != minus_[q])
        throw Error(ErrKind::PreconditionViolated, "power stabilization disagrees with q^-",
                    {q, v, minus_[q]});
      return {k, v};
    }
    v = next;
  }
  throw Error(ErrKind::PreconditionViolated,
              "power chain of element is periodic and never stabilizes", {q});
}

bool Quantale::is_partition(int q, const std::vector<int>& family) const {
  uint64_t m = 0;
  for (int x : family) m |= 1ull << x;
  if (sup(m) != q) return false;
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = 0; j < family.size(); ++j)
      if (i != j && mul(family[i], family[j]) != bottom_) return false;
  return true;
}

std::vector<int> Quantale::induce_partition(const std::vector<int>& family, int a) const {
  std::vector<int> out;
  out.reserve(family.size());
  for (int x : family) out.push_back(mul(x, a));
  return out;
}

void Quantale::compute_profile() {
  AxiomProfile& p = profile_;
  p = AxiomProfile{};

  p.commutative = true;
  for (int a = 0; a < n_ && p.commutative; ++a)
    for (int b = 0; b < n_; ++b)
      if (mult_[a][b] != mult_[b][a]) {
        p.commutative = false;
        p.failures["commutative"] = {{a, b}, ""};
        break;
      }

  p.semicartesian = true;
  for (int a = 0; a < n_ && p.semicartesian; ++a)
    for (int b = 0; b < n_; ++b) {
      int ab = mult_[a][b];
      if (!leq(ab, a) || !leq(ab, b)) {
        p.semicartesian = false;
        p.failures["semicartesian"] = {{a, b}, ""};
        break;
      }
    }

  p.unital = unit_ >= 0;
  p.unit = unit_;
  if (!p.unital) p.failures["unital"] = {{}, "no element acts as identity"};

  p.integral = p.unital && unit_ == top_;
  if (!p.integral)
    p.failures["integral"] = p.unital ? FlagWitness{{unit_}, "unit is not top"}
                                      : FlagWitness{{}, "not unital"};

  p.idempotent = true;
  for (int a = 0; a < n_; ++a)
    if (mult_[a][a] != a) {
      p.idempotent = false;
      p.failures["idempotent"] = {{a, mult_[a][a]}, ""};
      break;
    }

  p.locale = p.semicartesian && p.idempotent;
  if (!p.locale) p.failures["locale"] = {{}, "requires semicartesian + idempotent"};

  p.right_sided = true;
  for (int a = 0; a < n_; ++a)
    if (mult_[a][top_] != a) {
      p.right_sided = false;
      p.failures["right_sided"] = {{a}, ""};
      break;
    }

  p.divisible = true;
  for (int a = 0; a < n_ && p.divisible; ++a)
    for (int b = 0; b < n_; ++b) {
      if (!leq(a, b)) continue;
      bool found = false;
      for (int x = 0; x < n_ && !found; ++x) found = mult_[b][x] == a;
      if (!found) {
        p.divisible = false;
        p.failures["divisible"] = {{a, b}, "no x with b.x = a"};
        break;
      }
    }

  p.double_distributive = true;
  for (int a = 0; a < n_ && p.double_distributive; ++a)
    for (int b = 0; b < n_ && p.double_distributive; ++b)
      for (int c = 0; c < n_; ++c)
        if (mult_[a][meet_[b][c]] != meet_[mult_[a][b]][mult_[a][c]]) {
          p.double_distributive = false;
          p.failures["double_distributive"] = {{a, b, c}, "a.(b ^ c) != (a.b) ^ (a.c)"};
          break;
        }

  {
    bool linear = true;
    int wa = -1, wb = -1;
    for (int a = 0; a < n_ && linear; ++a)
      for (int b = 0; b < n_; ++b)
        if (!leq(a, b) && !leq(b, a)) {
          linear = false;
          wa = a;
          wb = b;
          break;
        }
    p.strict_linear = linear;
    if (!linear) {
      p.failures["strict_linear"] = {{wa, wb}, "order is not linear"};
    } else {
      for (int a = 0; a < n_ && p.strict_linear; ++a) {
        if (a == bottom_) continue;
        for (int b = 0; b < n_ && p.strict_linear; ++b)
          for (int c = 0; c < n_; ++c)
            if (b != c && mult_[a][b] == mult_[a][c]) {
              p.strict_linear = false;
              p.failures["strict_linear"] = {{a, b, c}, "a.b = a.c with b != c"};
              break;
            }
      }
    }
  }

  minus_.clear();
  if (p.commutative && p.semicartesian) {
    minus_.resize(n_);
    for (int q = 0; q < n_; ++q) {
      uint64_t s = 0;
      for (uint64_t m = idem_; m; m &= m - 1) {
        int e = std::countr_zero(m);
        if (leq(e, mul(q, e))) s |= 1ull << e;
      }
      minus_[q] = sup(s);
    }
  }

  if (minus_.empty()) {
    p.geometric = false;
    p.failures["geometric"] = {{}, "requires commutative semicartesian"};
  } else {
    // Binary pairs decide preservation of arbitrary sups on a finite carrier;
    // the empty sup is covered by bottom^- = bottom.
    p.geometric = true;
    for (int a = 0; a < n_ && p.geometric; ++a)
      for (int b = 0; b < n_; ++b)
        if (minus_[join_[a][b]] != join_[minus_[a]][minus_[b]]) {
          p.geometric = false;
          p.failures["geometric"] = {{a, b}, "(a v b)^- != a^- v b^-"};
          break;
        }
  }

  plus_.clear();
  if (p.unital && p.commutative && p.semicartesian && p.double_distributive) {
    plus_.resize(n_);
    for (int q = 0; q < n_; ++q) {
      uint64_t s = 0;
      for (int x = 0; x < n_; ++x)
        if (leq(q, mul(q, x))) s |= 1ull << x;
      plus_[q] = inf(s);
    }
  }

  if (plus_.empty()) {
    p.coherent = false;
    p.failures["coherent"] = {{}, "requires unital commutative semicartesian double-distributive"};
  } else {
    p.coherent = true;
    for (int a = 0; a < n_ && p.coherent; ++a)
      for (int b = 0; b < n_ && p.coherent; ++b) {
        if (!leq(a, b)) continue;
        for (int a2 = 0; a2 < n_ && p.coherent; ++a2)
          for (int b2 = 0; b2 < n_; ++b2) {
            if (!leq(a2, b2)) continue;
            if (mult_[a][b2] != mult_[a2][b]) continue;
            if (mult_[plus_[a]][plus_[b2]] != mult_[plus_[a2]][plus_[b]]) {
              p.coherent = false;
              p.failures["coherent"] = {{a, b, a2, b2}, "a.b' = a'.b but a+.b'+ != a'+.b+"};
              break;
            }
          }
      }
  }

  if (!p.commutative) {
    p.strongly_divisible = false;
    p.failures["strongly_divisible"] = {{}, "requires commutative"};
  } else {
    p.strongly_divisible = true;
    for (int u = 0; u < n_ && p.strongly_divisible; ++u)
      for (int v = 0; v < n_; ++v) {
        if (!leq(v, u)) continue;
        if (mul(v, residual(u, v)) != v) {
          p.strongly_divisible = false;
          p.failures["strongly_divisible"] = {{v, u}, "v != v . (u -> v)"};
          break;
        }
      }
  }

  if (p.unital) {
    int degree = 1;
    for (int q = 0; q < n_; ++q) {
      int v = q, k = 1;
      while (k <= n_ + 1) {
        int next = mul(v, q);
        if (next == v) break;
        v = next;
        ++k;
      }
      degree = std::max(degree, k);
    }
    if (degree <= n_ + 1) p.p_artinian_degree = degree;
  }
}

std::string Quantale::canonical_form() const {
  if (n_ > 8)
    throw Error(ErrKind::CapExceeded, "canonical form is only computed for carriers up to 8");
  std::vector<int> perm(n_);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s;
    s.reserve(2 * n_ * n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) s.push_back(leq(perm[a], perm[b]) ? '1' : '0');
    std::vector<int> inv(n_);
    for (int i = 0; i < n_; ++i) inv[perm[i]] = i;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        s.push_back(static_cast<char>('a' + inv[mult_[perm[a]][perm[b]]]));
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace qsl
