#include "subobject.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace qsl {

int Subsheaf::count(int u) const {
  return static_cast<int>(std::count(member[u].begin(), member[u].end(), 1));
}

int Subsheaf::total() const {
  int t = 0;
  for (size_t u = 0; u < member.size(); ++u) t += count(static_cast<int>(u));
  return t;
}

bool Subsheaf::subset_of(const Subsheaf& o) const {
  for (size_t u = 0; u < member.size(); ++u)
    for (size_t s = 0; s < member[u].size(); ++s)
      if (member[u][s] && !o.member[u][s]) return false;
  return true;
}

Subsheaf full_subsheaf(std::shared_ptr<const Presheaf> f) {
  Subsheaf s;
  s.member.resize(f->stalk.size());
  for (size_t u = 0; u < f->stalk.size(); ++u) s.member[u].assign(f->stalk[u], 1);
  s.parent = std::move(f);
  return s;
}

Subsheaf subsheaf_closure(std::shared_ptr<const Presheaf> f,
                          std::vector<std::vector<char>> seed, const CheckCaps& caps) {
  const Presheaf& F = *f;
  const Quantale& q = *F.base;
  const int n = q.size();
  if (static_cast<int>(seed.size()) != n)
    throw Error(ErrKind::BadArgument, "seed sized wrong");
  for (int u = 0; u < n; ++u)
    if (static_cast<int>(seed[u].size()) != F.stalk[u])
      throw Error(ErrKind::BadArgument, "seed row sized wrong");

  // restriction closure
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < n; ++u)
      for (int s = 0; s < F.stalk[u]; ++s) {
        if (!seed[u][s]) continue;
        for (int v = 0; v < n; ++v) {
          if (!q.leq(v, u)) continue;
          char& cell = seed[v][F.res[u][v][s]];
          if (!cell) {
            cell = 1;
            changed = true;
          }
        }
      }
  }

  // gluing closure: add the parent gluing of every compatible family drawn
  // from the current sets
  std::vector<CoverEnumeration> per_element;
  per_element.reserve(n);
  for (int u = 0; u < n; ++u)
    per_element.push_back(enumerate_covers(q, u, caps.covers_per_element));

  changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < n; ++u) {
      for (const auto& c : per_element[u].covers) {
        auto mem = c.list();
        // walk families from the seed with pairwise-compatibility pruning
        std::vector<int> family(mem.size(), 0);
        std::vector<std::vector<int>> choices(mem.size());
        bool feasible = true;
        for (size_t i = 0; i < mem.size(); ++i) {
          for (int s = 0; s < F.stalk[mem[i]]; ++s)
            if (seed[mem[i]][s]) choices[i].push_back(s);
          feasible = feasible && !choices[i].empty();
        }
        if (!feasible) continue;
        std::vector<size_t> pick(mem.size(), 0);
        size_t depth = 0;
        while (true) {
          if (depth == mem.size()) {
            for (size_t i = 0; i < mem.size(); ++i) family[i] = choices[i][pick[i]];
            for (int s = 0; s < F.stalk[u]; ++s) {
              bool glues = true;
              for (size_t i = 0; i < mem.size() && glues; ++i)
                glues = F.res[u][mem[i]][s] == family[i];
              if (glues && !seed[u][s]) {
                seed[u][s] = 1;
                changed = true;
              }
            }
            // backtrack
            if (depth == 0) break;
            --depth;
            ++pick[depth];
            continue;
          }
          if (pick[depth] >= choices[depth].size()) {
            if (depth == 0) break;
            pick[depth] = 0;
            --depth;
            ++pick[depth];
            continue;
          }
          int s = choices[depth][pick[depth]];
          bool ok = true;
          for (size_t j = 0; j < depth && ok; ++j) {
            int other = choices[j][pick[j]];
            int p = q.mul(mem[depth], mem[j]);
            if (F.stalk[p] > 0 && F.res[mem[depth]][p][s] != F.res[mem[j]][p][other]) ok = false;
            if (ok) {
              int p2 = q.mul(mem[j], mem[depth]);
              if (F.stalk[p2] > 0 && F.res[mem[depth]][p2][s] != F.res[mem[j]][p2][other])
                ok = false;
            }
          }
          if (!ok) {
            ++pick[depth];
            continue;
          }
          ++depth;
          if (depth < pick.size()) pick[depth] = 0;
        }
      }
    }
  }

  Subsheaf out;
  out.parent = std::move(f);
  out.member = std::move(seed);
  return out;
}

Subsheaf bottom_subsheaf(std::shared_ptr<const Presheaf> f, const CheckCaps& caps) {
  std::vector<std::vector<char>> seed(f->stalk.size());
  for (size_t u = 0; u < f->stalk.size(); ++u) seed[u].assign(f->stalk[u], 0);
  return subsheaf_closure(std::move(f), std::move(seed), caps);
}

bool is_subsheaf(const Subsheaf& s, const CheckCaps& caps) {
  const Presheaf& F = *s.parent;
  const Quantale& q = *F.base;
  for (int u = 0; u < q.size(); ++u)
    for (int x = 0; x < F.stalk[u]; ++x) {
      if (!s.member[u][x]) continue;
      for (int v = 0; v < q.size(); ++v)
        if (q.leq(v, u) && !s.member[v][F.res[u][v][x]]) return false;
    }
  Subsheaf closed = subsheaf_closure(s.parent, s.member, caps);
  return closed.same_members(s);
}

std::vector<Subsheaf> enumerate_subsheaves(std::shared_ptr<const Presheaf> f, long long cap,
                                           const CheckCaps& caps) {
  const Presheaf& F = *f;
  const int n = static_cast<int>(F.stalk.size());
  long long space = 1;
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < F.stalk[u]; ++s) {
      (void)s;
      space *= 2;
      if (space > cap)
        throw Error(ErrKind::CapExceeded, "subsheaf candidate space exceeds cap");
    }
  std::vector<Subsheaf> out;
  std::vector<std::vector<char>> pick(n);
  for (int u = 0; u < n; ++u) pick[u].assign(F.stalk[u], 0);

  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < F.stalk[u]; ++s) slots.push_back({u, s});

  std::function<void(size_t)> go = [&](size_t i) {
    if (i == slots.size()) {
      Subsheaf cand{f, pick};
      if (is_subsheaf(cand, caps)) out.push_back(std::move(cand));
      return;
    }
    auto [u, s] = slots[i];
    pick[u][s] = 0;
    go(i + 1);
    pick[u][s] = 1;
    go(i + 1);
    pick[u][s] = 0;
  };
  go(0);

  std::sort(out.begin(), out.end(), [](const Subsheaf& a, const Subsheaf& b) {
    int ta = a.total(), tb = b.total();
    if (ta != tb) return ta < tb;
    return a.member < b.member;
  });
  return out;
}

Subsheaf image_subsheaf(const Morphism& m, const CheckCaps& caps) {
  const Presheaf& G = *m.target;
  std::vector<std::vector<char>> seed(G.stalk.size());
  for (size_t u = 0; u < G.stalk.size(); ++u) {
    seed[u].assign(G.stalk[u], 0);
    for (int s : m.comp[u]) seed[u][s] = 1;
  }
  return subsheaf_closure(m.target, std::move(seed), caps);
}

SubPresheaf subsheaf_presheaf(const Subsheaf& s) {
  const Presheaf& F = *s.parent;
  const Quantale& q = *F.base;
  const int n = q.size();
  SubPresheaf out;
  out.presheaf.base = F.base;
  out.presheaf.stalk.assign(n, 0);
  out.presheaf.res.assign(n, std::vector<std::vector<int>>(n));
  out.value.assign(n, {});
  std::vector<std::vector<int>> slot(n);
  for (int u = 0; u < n; ++u) {
    slot[u].assign(F.stalk[u], -1);
    for (int x = 0; x < F.stalk[u]; ++x)
      if (s.member[u][x]) {
        slot[u][x] = static_cast<int>(out.value[u].size());
        out.value[u].push_back(x);
      }
    out.presheaf.stalk[u] = static_cast<int>(out.value[u].size());
  }
  for (int u = 0; u < n; ++u) {
    if (out.presheaf.stalk[u] == 0) continue;
    for (int v = 0; v < n; ++v) {
      if (!q.leq(v, u)) continue;
      std::vector<int> table(out.presheaf.stalk[u]);
      for (int i = 0; i < out.presheaf.stalk[u]; ++i)
        table[i] = slot[v][F.res[u][v][out.value[u][i]]];
      out.presheaf.res[u][v] = std::move(table);
    }
  }
  return out;
}

Morphism subsheaf_inclusion(const Subsheaf& s) {
  SubPresheaf sp = subsheaf_presheaf(s);
  Morphism m;
  m.source = std::make_shared<const Presheaf>(std::move(sp.presheaf));
  m.target = s.parent;
  m.comp = std::move(sp.value);
  return m;
}

bool is_dense(const Morphism& eta) {
  const Presheaf& F = *eta.target;
  const Quantale& q = *F.base;
  std::vector<std::vector<char>> range(q.size());
  for (int u = 0; u < q.size(); ++u) {
    range[u].assign(F.stalk[u], 0);
    for (int s : eta.comp[u]) range[u][s] = 1;
  }
  for (int u = 0; u < q.size(); ++u) {
    int m = q.approx_minus(u);
    for (int y = 0; y < F.stalk[u]; ++y) {
      if (F.stalk[m] == 0) continue;
      if (range[m][F.res[u][m][y]] && !range[u][y]) return false;
    }
  }
  return true;
}

bool is_dense_sub(const Subsheaf& s) {
  const Presheaf& F = *s.parent;
  const Quantale& q = *F.base;
  for (int u = 0; u < q.size(); ++u) {
    int m = q.approx_minus(u);
    for (int y = 0; y < F.stalk[u]; ++y)
      if (F.stalk[m] > 0 && s.member[m][F.res[u][m][y]] && !s.member[u][y]) return false;
  }
  return true;
}

namespace {

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

DayTensor day_tensor(const Presheaf& f, const Presheaf& g, long long cap) {
  if (f.base->size() != g.base->size())
    throw Error(ErrKind::BadArgument, "tensor factors live over different bases");
  const Quantale& q = *f.base;
  const int n = q.size();

  DayTensor out;
  out.tensor.base = f.base;
  out.tensor.stalk.assign(n, 0);
  out.tensor.res.assign(n, std::vector<std::vector<int>>(n));
  out.rep.assign(n, {});

  // node enumeration per element u: (v, w, s, t) with u <= v.w, ordered
  // lexicographically so class representatives are canonical
  struct Nodes {
    std::vector<std::array<int, 4>> list;
    std::map<std::array<int, 4>, int> index;
  };
  std::vector<Nodes> nodes(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) {
        if (!q.leq(u, q.mul(v, w))) continue;
        for (int s = 0; s < f.stalk[v]; ++s)
          for (int t = 0; t < g.stalk[w]; ++t) {
            if (static_cast<long long>(nodes[u].list.size()) >= cap)
              throw Error(ErrKind::CapExceeded, "tensor node space exceeds cap");
            nodes[u].index[{v, w, s, t}] = static_cast<int>(nodes[u].list.size());
            nodes[u].list.push_back({v, w, s, t});
          }
      }
  }

  std::vector<std::vector<int>> class_of(n);
  for (int u = 0; u < n; ++u) {
    UnionFind uf(static_cast<int>(nodes[u].list.size()));
    for (int id = 0; id < static_cast<int>(nodes[u].list.size()); ++id) {
      auto [v, w, s, t] = nodes[u].list[id];
      for (int v2 = 0; v2 < n; ++v2) {
        if (!q.leq(v2, v)) continue;
        for (int w2 = 0; w2 < n; ++w2) {
          if (!q.leq(w2, w) || !q.leq(u, q.mul(v2, w2))) continue;
          std::array<int, 4> other = {v2, w2, f.res[v][v2][s], g.res[w][w2][t]};
          uf.unite(id, nodes[u].index.at(other));
        }
      }
    }
    // canonical class order: by least node id (node ids are lex-ordered)
    std::vector<int> roots;
    class_of[u].assign(nodes[u].list.size(), -1);
    for (int id = 0; id < static_cast<int>(nodes[u].list.size()); ++id)
      if (uf.find(id) == id) roots.push_back(id);
    std::sort(roots.begin(), roots.end());
    for (size_t c = 0; c < roots.size(); ++c) out.rep[u].push_back(nodes[u].list[roots[c]]);
    for (int id = 0; id < static_cast<int>(nodes[u].list.size()); ++id) {
      int r = uf.find(id);
      int c = static_cast<int>(std::lower_bound(roots.begin(), roots.end(), r) - roots.begin());
      class_of[u][id] = c;
    }
    out.tensor.stalk[u] = static_cast<int>(roots.size());
  }

  for (int u = 0; u < n; ++u) {
    if (out.tensor.stalk[u] == 0) continue;
    for (int u2 = 0; u2 < n; ++u2) {
      if (!q.leq(u2, u)) continue;
      std::vector<int> table(out.tensor.stalk[u]);
      for (int c = 0; c < out.tensor.stalk[u]; ++c) {
        // the same node is a generator downstairs
        table[c] = class_of[u2][nodes[u2].index.at(out.rep[u][c])];
      }
      out.tensor.res[u][u2] = std::move(table);
    }
  }

  auto violations = validate_presheaf(out.tensor);
  if (!violations.empty())
    throw Error(violations.front().law, "tensor failed functoriality revalidation",
                violations.front().witness);
  return out;
}

Subsheaf star(const Subsheaf& a, const Subsheaf& b, const CheckCaps& caps) {
  if (a.parent.get() != b.parent.get() && !a.parent->same_shape(*b.parent))
    throw Error(ErrKind::BadArgument, "star arguments live in different sheaves");
  const Presheaf& F = *a.parent;
  const Quantale& q = *F.base;
  if (!(q.profile().commutative && q.profile().semicartesian))
    throw Error(ErrKind::PreconditionViolated,
                "star requires a commutative semicartesian base");
  const int n = q.size();

  SubPresheaf ap = subsheaf_presheaf(a);
  SubPresheaf bp = subsheaf_presheaf(b);
  DayTensor d = day_tensor(ap.presheaf, bp.presheaf);

  // Two legs into F: restrict the embedded values of either factor. The
  // equalizer keeps the classes where the legs agree; its pointwise image
  // generates the subobject.
  std::vector<std::vector<char>> seed(n);
  for (int u = 0; u < n; ++u) {
    seed[u].assign(F.stalk[u], 0);
    for (int c = 0; c < d.tensor.stalk[u]; ++c) {
      auto [v, w, s, t] = d.rep[u][c];
      int left = F.res[v][u][ap.value[v][s]];
      int right = F.res[w][u][bp.value[w][t]];
      if (left == right) seed[u][left] = 1;
    }
  }
  return subsheaf_closure(a.parent, std::move(seed), caps);
}

Subsheaf sub_meet(const Subsheaf& a, const Subsheaf& b) {
  Subsheaf out = a;
  for (size_t u = 0; u < out.member.size(); ++u)
    for (size_t s = 0; s < out.member[u].size(); ++s)
      out.member[u][s] = a.member[u][s] && b.member[u][s];
  return out;
}

Subsheaf sub_join(const Subsheaf& a, const Subsheaf& b, const CheckCaps& caps) {
  std::vector<std::vector<char>> seed = a.member;
  for (size_t u = 0; u < seed.size(); ++u)
    for (size_t s = 0; s < seed[u].size(); ++s)
      seed[u][s] = seed[u][s] || b.member[u][s];
  return subsheaf_closure(a.parent, std::move(seed), caps);
}

namespace {

TruthSheaf build_truth(std::shared_ptr<const Quantale> qp, TruthVariant variant,
                       const CheckCaps& caps) {
  const Quantale& q = *qp;
  const int n = q.size();
  TruthSheaf out;
  out.variant = variant;
  out.value.assign(n, {});
  out.slot.assign(n, std::vector<int>(n, -1));
  out.top_point.assign(n, -1);
  out.bot_point.assign(n, -1);

  Presheaf om;
  om.base = qp;
  om.stalk.assign(n, 0);
  om.res.assign(n, std::vector<std::vector<int>>(n));

  for (int u = 0; u < n; ++u) {
    for (int x = 0; x < n; ++x) {
      bool in = variant == TruthVariant::minus
                    ? q.mul(x, q.approx_minus(u)) == x
                    : q.mul(q.approx_plus(x), u) == x;
      if (in) {
        out.slot[u][x] = static_cast<int>(out.value[u].size());
        out.value[u].push_back(x);
      }
    }
    om.stalk[u] = static_cast<int>(out.value[u].size());
    out.top_point[u] =
        variant == TruthVariant::minus ? out.slot[u][q.approx_minus(u)] : out.slot[u][u];
    out.bot_point[u] = out.slot[u][q.bottom()];
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (!q.leq(v, u)) continue;
      std::vector<int> table(om.stalk[u]);
      for (int i = 0; i < om.stalk[u]; ++i) {
        int x = out.value[u][i];
        int y = variant == TruthVariant::minus ? q.mul(x, q.approx_minus(v))
                                               : q.mul(q.approx_plus(x), v);
        table[i] = out.slot[v][y];
        if (table[i] < 0)
          throw Error(ErrKind::PreconditionViolated, "truth-sheaf restriction left the stalk",
                      {u, v, x});
      }
      om.res[u][v] = std::move(table);
    }

  auto violations = validate_presheaf(om);
  if (!violations.empty())
    throw Error(violations.front().law, "truth-value presheaf failed validation",
                violations.front().witness);
  out.omega = std::make_shared<const Presheaf>(std::move(om));
  out.sheaf_report = sheaf_check(*out.omega, caps);
  return out;
}

}  // namespace

TruthSheaf omega_minus(std::shared_ptr<const Quantale> qp, const CheckCaps& caps) {
  const auto& p = qp->profile();
  if (!(p.commutative && p.semicartesian))
    throw Error(ErrKind::PreconditionViolated,
                "minus truth sheaf requires a commutative semicartesian quantale");
  TruthSheaf out = build_truth(std::move(qp), TruthVariant::minus, caps);
  out.theorem_preconditions = p.geometric;
  if (!p.geometric) out.missing_flags.push_back("geometric");
  return out;
}

TruthSheaf omega_plus(std::shared_ptr<const Quantale> qp, const CheckCaps& caps) {
  const auto& p = qp->profile();
  std::vector<std::string> missing;
  for (const char* flag : {"unital", "commutative", "semicartesian", "double_distributive"})
    if (!p.flag(flag)) missing.push_back(flag);
  if (!missing.empty())
    throw Error(ErrKind::PreconditionViolated,
                "plus truth sheaf requires unital commutative semicartesian "
                "double-distributive");
  TruthSheaf out = build_truth(std::move(qp), TruthVariant::plus, caps);
  out.theorem_preconditions = p.coherent && p.strongly_divisible;
  if (!p.divisible) out.missing_flags.push_back("divisible");
  if (!p.coherent) out.missing_flags.push_back("coherent");
  if (!p.strongly_divisible) out.missing_flags.push_back("strongly_divisible");
  return out;
}

namespace {

CharacteristicMap build_chi(const TruthSheaf& om, const Subsheaf& s, TruthVariant variant) {
  const Presheaf& F = *s.parent;
  const Quantale& q = *F.base;
  const int n = q.size();

  CharacteristicMap out;
  out.chi.source = s.parent;
  out.chi.target = om.omega;
  out.chi.comp.assign(n, {});
  for (int u = 0; u < n; ++u) {
    out.chi.comp[u].assign(F.stalk[u], -1);
    for (int y = 0; y < F.stalk[u]; ++y) {
      uint64_t candidates = 0;
      for (int i = 0; i < static_cast<int>(om.value[u].size()); ++i) {
        int v = om.value[u][i];
        if (variant == TruthVariant::minus && !q.is_idem(v)) continue;
        if (F.stalk[v] == 0) continue;
        if (s.member[v][F.res[u][v][y]]) candidates |= 1ull << v;
      }
      int m = q.sup(candidates);
      if (om.slot[u][m] < 0 || !((candidates >> m) & 1))
        throw Error(ErrKind::PreconditionViolated,
                    "candidate truth value escaped the stalk", {u, y, m});
      out.chi.comp[u][y] = om.slot[u][m];
    }
  }
  out.natural = validate_morphism(out.chi);

  out.pullback.assign(n, {});
  for (int u = 0; u < n; ++u) {
    out.pullback[u].assign(F.stalk[u], 0);
    for (int y = 0; y < F.stalk[u]; ++y)
      out.pullback[u][y] = out.chi.comp[u][y] == om.top_point[u] ? 1 : 0;
  }
  out.pullback_ok = out.natural && out.pullback == s.member;
  return out;
}

}  // namespace

CharacteristicMap chi_minus(const TruthSheaf& om, const Subsheaf& s) {
  if (om.variant != TruthVariant::minus)
    throw Error(ErrKind::BadArgument, "expected the minus truth sheaf");
  if (!om.theorem_preconditions)
    throw Error(ErrKind::NotGeometric, "minus classification requires a geometric quantale");
  if (!is_dense_sub(s))
    throw Error(ErrKind::NotDense, "minus classification requires a dense subsheaf");
  return build_chi(om, s, TruthVariant::minus);
}

CharacteristicMap chi_plus(const TruthSheaf& om, const Subsheaf& s) {
  if (om.variant != TruthVariant::plus)
    throw Error(ErrKind::BadArgument, "expected the plus truth sheaf");
  if (!om.theorem_preconditions)
    throw Error(ErrKind::PreconditionViolated,
                "plus classification requires coherent strongly divisible quantales");
  return build_chi(om, s, TruthVariant::plus);
}

namespace {

std::vector<std::vector<char>> pullback_of(const TruthSheaf& om, const Presheaf& F,
                                           const std::vector<std::vector<int>>& comp) {
  std::vector<std::vector<char>> out(F.stalk.size());
  for (size_t u = 0; u < F.stalk.size(); ++u) {
    out[u].assign(F.stalk[u], 0);
    for (int y = 0; y < F.stalk[u]; ++y)
      out[u][y] = comp[u][y] == om.top_point[u] ? 1 : 0;
  }
  return out;
}

std::string describe_sub(const Subsheaf& s) {
  std::ostringstream os;
  os << "[";
  for (size_t u = 0; u < s.member.size(); ++u) {
    if (u) os << ",";
    os << s.count(static_cast<int>(u));
  }
  os << "]";
  return os.str();
}

}  // namespace

ClassifierReport verify_classifier(std::shared_ptr<const Quantale> qp, TruthVariant variant,
                                   const std::vector<Presheaf>& pool, long long sub_cap,
                                   long long morphism_budget, const CheckCaps& caps) {
  ClassifierReport rep;
  rep.variant = variant;
  const auto& p = qp->profile();

  std::vector<const char*> needed =
      variant == TruthVariant::minus
          ? std::vector<const char*>{"commutative", "semicartesian", "geometric"}
          : std::vector<const char*>{"unital", "commutative", "semicartesian",
                                     "double_distributive", "coherent", "strongly_divisible"};
  for (const char* flag : needed)
    if (!p.flag(flag)) rep.missing_flags.push_back(flag);
  rep.preconditions_ok = rep.missing_flags.empty();
  if (!rep.preconditions_ok) {
    rep.all_ok = false;
    std::ostringstream os;
    os << "theorem preconditions unmet:";
    for (const auto& f : rep.missing_flags) os << ' ' << f;
    rep.failures.push_back(os.str());
    // still attach the sheaf verdict of the candidate when it can be built
    bool structural = variant == TruthVariant::minus
                          ? p.commutative && p.semicartesian
                          : p.unital && p.commutative && p.semicartesian &&
                                p.double_distributive;
    if (structural) {
      TruthSheaf om = build_truth(qp, variant, caps);
      rep.omega_is_sheaf = om.sheaf_report.definitive_sheaf();
      if (!rep.omega_is_sheaf)
        rep.failures.push_back("truth presheaf fails the sheaf condition: " +
                               om.sheaf_report.note);
    }
    return rep;
  }

  TruthSheaf om = variant == TruthVariant::minus ? omega_minus(qp, caps) : omega_plus(qp, caps);
  rep.omega_is_sheaf = om.sheaf_report.definitive_sheaf();
  rep.all_ok = rep.omega_is_sheaf;
  if (!rep.omega_is_sheaf)
    rep.failures.push_back("truth presheaf fails the sheaf condition: " + om.sheaf_report.note);

  for (size_t fi = 0; fi < pool.size(); ++fi) {
    const Presheaf& F = pool[fi];
    auto fp = std::make_shared<const Presheaf>(F);
    if (!sheaf_check(F, caps).sheaf) {
      rep.all_ok = false;
      rep.failures.push_back("pool member " + std::to_string(fi) + " is not a sheaf");
      continue;
    }
    ++rep.sheaves_checked;

    std::vector<Subsheaf> subs;
    try {
      subs = enumerate_subsheaves(fp, sub_cap, caps);
    } catch (const Error& e) {
      if (e.kind == ErrKind::CapExceeded) {
        ++rep.skipped;
        continue;
      }
      throw;
    }

    auto morphisms = enumerate_morphisms(F, *om.omega, morphism_budget);
    if (morphisms.truncated) {
      ++rep.skipped;
      rep.failures.push_back("morphism enumeration truncated for pool member " +
                             std::to_string(fi));
      rep.all_ok = false;
      continue;
    }
    bool is_terminal_member = true;
    for (int u = 0; u < qp->size(); ++u) is_terminal_member &= F.stalk[u] == 1;
    if (is_terminal_member)
      rep.hom_terminal = static_cast<long long>(morphisms.all.size());

    for (const auto& S : subs) {
      bool dense = variant == TruthVariant::minus ? is_dense_sub(S) : true;
      if (variant == TruthVariant::minus && dense) ++rep.dense_subsheaves;
      if (!dense) continue;
      ++rep.subsheaves_checked;

      CharacteristicMap cm;
      try {
        cm = variant == TruthVariant::minus ? chi_minus(om, S) : chi_plus(om, S);
      } catch (const Error& e) {
        rep.all_ok = false;
        rep.failures.push_back("chi failed on subsheaf " + describe_sub(S) + ": " + e.what());
        continue;
      }
      if (!cm.natural || !cm.pullback_ok) {
        rep.all_ok = false;
        rep.failures.push_back(std::string("characteristic map of ") + describe_sub(S) +
                               (cm.natural ? " has the wrong pullback" : " is not natural"));
        continue;
      }

      // uniqueness by full enumeration
      int inducing = 0;
      bool unique_ok = true;
      for (const auto& comp : morphisms.all) {
        if (pullback_of(om, F, comp) != S.member) continue;
        ++inducing;
        if (variant == TruthVariant::minus) {
          // phi^- must equal chi
          for (int u = 0; u < qp->size() && unique_ok; ++u)
            for (int y = 0; y < F.stalk[u] && unique_ok; ++y) {
              int val = om.value[u][comp[u][y]];
              int reduced = om.slot[u][qp->approx_minus(val)];
              unique_ok = reduced == cm.chi.comp[u][y];
            }
        } else {
          unique_ok = unique_ok && comp == cm.chi.comp;
        }
      }
      if (inducing == 0 || !unique_ok) {
        rep.all_ok = false;
        rep.failures.push_back("uniqueness failed on subsheaf " + describe_sub(S) +
                               " (inducing=" + std::to_string(inducing) + ")");
      }
    }

    if (variant == TruthVariant::plus) {
      // Sub(F) and Hom(F, Omega+) must biject through the pullback
      if (morphisms.all.size() != subs.size()) {
        rep.sub_hom_bijection = false;
        rep.all_ok = false;
        rep.failures.push_back("Sub/Hom sizes differ on pool member " + std::to_string(fi) +
                               ": " + std::to_string(subs.size()) + " vs " +
                               std::to_string(morphisms.all.size()));
      }
      for (const auto& comp : morphisms.all) {
        auto pb = pullback_of(om, F, comp);
        Subsheaf S{fp, pb};
        if (!is_subsheaf(S, caps)) {
          rep.sub_hom_bijection = false;
          rep.all_ok = false;
          rep.failures.push_back("a morphism pullback is not a subsheaf");
        }
      }
    }
    if (variant == TruthVariant::minus) {
      // every morphism pullback must be a dense subsheaf
      for (const auto& comp : morphisms.all) {
        auto pb = pullback_of(om, F, comp);
        Subsheaf S{fp, pb};
        if (!is_subsheaf(S, caps) || !is_dense_sub(S)) {
          rep.all_ok = false;
          rep.failures.push_back("a morphism pullback is not a dense subsheaf");
        }
      }
    }
  }
  return rep;
}

SubIsoReport verify_sub_iso(std::shared_ptr<const Quantale> qp, int a, long long sub_cap,
                            const CheckCaps& caps) {
  SubIsoReport rep;
  const Quantale& q = *qp;
  auto F = std::make_shared<const Presheaf>(representable(qp, a));

  std::vector<int> interval;
  for (int b = 0; b < q.size(); ++b)
    if (q.leq(b, a)) interval.push_back(b);
  rep.interval_size = static_cast<int>(interval.size());

  auto subs = enumerate_subsheaves(F, sub_cap, caps);
  rep.subobject_count = static_cast<int>(subs.size());

  auto k = [&](int b) {
    Subsheaf s;
    s.parent = F;
    s.member.resize(q.size());
    for (int u = 0; u < q.size(); ++u) s.member[u].assign(F->stalk[u], q.leq(u, b) ? 1 : 0);
    return s;
  };

  rep.bijective = subs.size() == interval.size();
  for (int b : interval) {
    Subsheaf kb = k(b);
    bool found = false;
    for (const auto& s : subs) found |= s.same_members(kb);
    if (!found) {
      rep.bijective = false;
      rep.failures.push_back("k(" + q.label(b) + ") is not a subsheaf of the enumeration");
    }
  }
  if (!rep.bijective && rep.failures.empty())
    rep.failures.push_back("subobject count differs from the interval size");

  rep.order_iso = true;
  for (int b : interval)
    for (int c : interval) {
      bool lhs = q.leq(b, c);
      bool rhs = k(b).subset_of(k(c));
      if (lhs != rhs) {
        rep.order_iso = false;
        rep.failures.push_back("order mismatch at " + q.label(b) + "," + q.label(c));
      }
    }

  rep.sups_preserved = true;
  rep.infs_preserved = true;
  for (int b : interval)
    for (int c : interval) {
      if (!sub_join(k(b), k(c), caps).same_members(k(q.join(b, c)))) {
        rep.sups_preserved = false;
        rep.failures.push_back("sup mismatch at " + q.label(b) + "," + q.label(c));
      }
      if (!sub_meet(k(b), k(c)).same_members(k(q.meet(b, c)))) {
        rep.infs_preserved = false;
        rep.failures.push_back("inf mismatch at " + q.label(b) + "," + q.label(c));
      }
    }

  rep.star_matches_mult = true;
  for (int b : interval)
    for (int c : interval) {
      Subsheaf sc = star(k(b), k(c), caps);
      if (!sc.same_members(k(q.mul(b, c)))) {
        rep.star_matches_mult = false;
        rep.failures.push_back("star mismatch at " + q.label(b) + "," + q.label(c));
      }
      if (b == c && !sc.same_members(k(b))) {
        rep.star_idempotent = false;
        if (rep.non_idem_witness.empty()) rep.non_idem_witness = {b};
      }
    }

  // distributivity of the subobject lattice (meet over join)
  for (int x : interval)
    for (int y : interval)
      for (int z : interval) {
        Subsheaf lhs = sub_meet(k(x), sub_join(k(y), k(z), caps));
        Subsheaf rhs = sub_join(sub_meet(k(x), k(y)), sub_meet(k(x), k(z)), caps);
        if (!lhs.same_members(rhs)) {
          rep.distrib_witness = {x, y, z};
          goto distrib_done;
        }
      }
distrib_done:

  rep.ok = rep.bijective && rep.order_iso && rep.sups_preserved && rep.infs_preserved &&
           rep.star_matches_mult;
  return rep;
}

}  // namespace qsl
