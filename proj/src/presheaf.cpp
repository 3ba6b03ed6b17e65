#include "presheaf.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace qsl {

std::vector<int> Cover::list() const {
  std::vector<int> out;
  for (uint64_t m = members; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::vector<Violation> validate_presheaf(const Presheaf& f) {
  std::vector<Violation> out;
  const Quantale& q = *f.base;
  const int n = q.size();
  if (static_cast<int>(f.stalk.size()) != n || static_cast<int>(f.res.size()) != n) {
    out.push_back({ErrKind::NonRectangularTable, {}, "stalk or restriction arrays sized wrong"});
    return out;
  }
  for (int u = 0; u < n; ++u) {
    if (f.stalk[u] < 0) {
      out.push_back({ErrKind::BadArgument, {u}, "negative stalk size"});
      return out;
    }
    if (static_cast<int>(f.res[u].size()) != n) {
      out.push_back({ErrKind::NonRectangularTable, {u}, "restriction row sized wrong"});
      return out;
    }
    for (int v = 0; v < n; ++v) {
      bool needed = q.leq(v, u) && f.stalk[u] > 0;
      if (!needed) {
        if (!f.res[u][v].empty())
          out.push_back({ErrKind::BadArgument, {u, v}, "unexpected restriction table"});
        continue;
      }
      if (f.stalk[v] == 0) {
        out.push_back({ErrKind::BadArgument, {u, v},
                       "restriction demanded into an empty stalk"});
        continue;
      }
      if (static_cast<int>(f.res[u][v].size()) != f.stalk[u]) {
        out.push_back({ErrKind::NonRectangularTable, {u, v}, "restriction table sized wrong"});
        continue;
      }
      for (int s = 0; s < f.stalk[u]; ++s)
        if (f.res[u][v][s] < 0 || f.res[u][v][s] >= f.stalk[v]) {
          out.push_back({ErrKind::BadArgument, {u, v, s}, "restriction entry out of range"});
          break;
        }
    }
  }
  if (!out.empty()) return out;

  for (int u = 0; u < n; ++u)
    for (int s = 0; s < f.stalk[u]; ++s)
      if (f.res[u][u][s] != s) {
        out.push_back({ErrKind::IdentityViolated, {u, s}, "identity restriction is not identity"});
        u = n;
        break;
      }

  for (int u = 0; u < n; ++u) {
    if (f.stalk[u] == 0) continue;
    for (int v = 0; v < n; ++v) {
      if (!q.leq(v, u)) continue;
      for (int w = 0; w < n; ++w) {
        if (!q.leq(w, v)) continue;
        for (int s = 0; s < f.stalk[u]; ++s)
          if (f.res[v][w][f.res[u][v][s]] != f.res[u][w][s]) {
            out.push_back({ErrKind::CompositionViolated, {u, v, w},
                           "restriction composition mismatch"});
            return out;
          }
      }
    }
  }
  return out;
}

CoverEnumeration enumerate_covers(const Quantale& q, int u, long long cap) {
  CoverEnumeration out;
  const uint64_t d = q.down(u);
  // Descending submask walk; the empty cover comes last and belongs to bottom.
  // The cap bounds both the walk and the emitted covers, so down-sets too
  // large to sweep degrade to an explicit partial verdict.
  uint64_t m = d;
  long long visited = 0;
  while (true) {
    if (++visited > cap) {
      out.truncated = true;
      break;
    }
    if (q.sup(m) == u) {
      if (static_cast<long long>(out.covers.size()) >= cap) {
        out.truncated = true;
        break;
      }
      out.covers.push_back({u, m});
    }
    if (m == 0) break;
    m = (m - 1) & d;
  }
  return out;
}

std::vector<int> glue(const Presheaf& f, const Cover& c, const std::vector<int>& family) {
  const Quantale& q = *f.base;
  auto mem = c.list();
  if (family.size() != mem.size())
    throw Error(ErrKind::BadArgument, "family size does not match cover size");
  for (size_t i = 0; i < mem.size(); ++i)
    if (family[i] < 0 || family[i] >= f.stalk[mem[i]])
      throw Error(ErrKind::BadArgument, "family member out of stalk range");
  for (size_t i = 0; i < mem.size(); ++i)
    for (size_t j = 0; j < mem.size(); ++j) {
      if (i == j) continue;
      int p = q.mul(mem[i], mem[j]);
      if (f.stalk[p] == 0) continue;
      if (f.res[mem[i]][p][family[i]] != f.res[mem[j]][p][family[j]])
        throw Error(ErrKind::NotCompatible, "family disagrees on a pairwise product",
                    {static_cast<int>(i), static_cast<int>(j)});
    }
  std::vector<int> gluings;
  for (int s = 0; s < f.stalk[c.target]; ++s) {
    bool ok = true;
    for (size_t i = 0; i < mem.size() && ok; ++i)
      ok = f.res[c.target][mem[i]][s] == family[i];
    if (ok) gluings.push_back(s);
  }
  return gluings;
}

namespace {

// Depth-first walk over the compatible families of a cover. Returns false
// when the node budget ran out.
bool for_each_compatible(const Presheaf& f, const std::vector<int>& mem, long long& budget,
                         const std::function<void(const std::vector<int>&)>& visit) {
  const Quantale& q = *f.base;
  const int t = static_cast<int>(mem.size());
  std::vector<int> family(t, 0);
  std::function<bool(int)> go = [&](int i) -> bool {
    if (--budget < 0) return false;
    if (i == t) {
      visit(family);
      return true;
    }
    for (int s = 0; s < f.stalk[mem[i]]; ++s) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        int p = q.mul(mem[i], mem[j]);
        if (f.stalk[p] > 0 && f.res[mem[i]][p][s] != f.res[mem[j]][p][family[j]]) ok = false;
        if (ok) {
          int p2 = q.mul(mem[j], mem[i]);
          if (f.stalk[p2] > 0 && f.res[mem[i]][p2][s] != f.res[mem[j]][p2][family[j]]) ok = false;
        }
      }
      if (!ok) continue;
      family[i] = s;
      if (!go(i + 1)) return false;
    }
    return true;
  };
  return go(0);
}

}  // namespace

SheafReport sheaf_check(const Presheaf& f, const CheckCaps& caps) {
  SheafReport rep;
  const Quantale& q = *f.base;
  long long budget = caps.family_budget;
  for (int u = 0; u < q.size(); ++u) {
    auto covers = enumerate_covers(q, u, caps.covers_per_element);
    if (covers.truncated) {
      rep.truncated = true;
      rep.note = "cover enumeration truncated";
    }
    for (const auto& c : covers.covers) {
      auto mem = c.list();
      bool complete = for_each_compatible(f, mem, budget, [&](const std::vector<int>& family) {
        int count = 0;
        for (int s = 0; s < f.stalk[u]; ++s) {
          bool match = true;
          for (size_t i = 0; i < mem.size() && match; ++i)
            match = f.res[u][mem[i]][s] == family[i];
          if (match) ++count;
        }
        if (count > 1 && rep.separated) {
          rep.separated = false;
          rep.sheaf = false;
          rep.witness_element = u;
          rep.witness_cover = c.members;
          rep.witness_family = family;
          rep.note = "two distinct gluings";
        }
        if (count == 0 && rep.sheaf) {
          rep.sheaf = false;
          rep.witness_element = u;
          rep.witness_cover = c.members;
          rep.witness_family = family;
          rep.note = "compatible family with no gluing";
        }
      });
      if (!complete) {
        rep.truncated = true;
        rep.note = "compatible-family budget exhausted";
        return rep;
      }
    }
  }
  if (rep.truncated && rep.sheaf) rep.note = "sheaf up to cover-size cap";
  return rep;
}

Presheaf representable(std::shared_ptr<const Quantale> base, int v) {
  const Quantale& q = *base;
  Presheaf f;
  f.base = std::move(base);
  const int n = q.size();
  f.stalk.assign(n, 0);
  f.res.assign(n, std::vector<std::vector<int>>(n));
  for (int u = 0; u < n; ++u) f.stalk[u] = q.leq(u, v) ? 1 : 0;
  for (int u = 0; u < n; ++u) {
    if (f.stalk[u] == 0) continue;
    for (int w = 0; w < n; ++w)
      if (q.leq(w, u)) f.res[u][w] = {0};
  }
  return f;
}

Presheaf terminal_presheaf(std::shared_ptr<const Quantale> base) {
  int top = base->top();
  return representable(std::move(base), top);
}

Presheaf restrict_to(const Presheaf& f, int u, const CheckCaps& caps) {
  auto rep = sheaf_check(f, caps);
  if (!rep.sheaf)
    throw Error(ErrKind::PreconditionViolated, "restriction requires a sheaf");
  const Quantale& q = *f.base;
  const int n = q.size();
  Presheaf g;
  g.base = f.base;
  g.stalk.assign(n, 0);
  g.res.assign(n, std::vector<std::vector<int>>(n));
  for (int v = 0; v < n; ++v) g.stalk[v] = q.leq(v, u) ? f.stalk[v] : 0;
  for (int v = 0; v < n; ++v) {
    if (g.stalk[v] == 0) continue;
    for (int w = 0; w < n; ++w)
      if (q.leq(w, v)) g.res[v][w] = f.res[v][w];
  }
  return g;
}

Presheaf shift_by(const Presheaf& f, int u, const CheckCaps& caps) {
  auto rep = sheaf_check(f, caps);
  if (!rep.sheaf)
    throw Error(ErrKind::PreconditionViolated, "shift requires a sheaf");
  const Quantale& q = *f.base;
  const int n = q.size();
  Presheaf g;
  g.base = f.base;
  g.stalk.assign(n, 0);
  g.res.assign(n, std::vector<std::vector<int>>(n));
  for (int v = 0; v < n; ++v) g.stalk[v] = f.stalk[q.mul(u, v)];
  for (int v = 0; v < n; ++v) {
    if (g.stalk[v] == 0) continue;
    for (int w = 0; w < n; ++w)
      if (q.leq(w, v)) g.res[v][w] = f.res[q.mul(u, v)][q.mul(u, w)];
  }
  return g;
}

Presheaf ball_sheaf(const std::vector<std::vector<int>>& metric, const std::vector<int>& A,
                    int k) {
  const int npts = static_cast<int>(metric.size());
  if (k < 1) throw Error(ErrKind::BadArgument, "chain height must be >= 1");
  for (int i = 0; i < npts; ++i) {
    if (static_cast<int>(metric[i].size()) != npts)
      throw Error(ErrKind::InvalidMetric, "metric table is not square", {i});
    if (metric[i][i] != 0)
      throw Error(ErrKind::InvalidMetric, "metric diagonal must be zero", {i});
    for (int j = 0; j < npts; ++j) {
      if (metric[i][j] != metric[j][i])
        throw Error(ErrKind::InvalidMetric, "metric table is not symmetric", {i, j});
      if (metric[i][j] < 0 || metric[i][j] > k)
        throw Error(ErrKind::InvalidMetric, "metric value out of range", {i, j});
    }
  }
  for (int a : A)
    if (a < 0 || a >= npts) throw Error(ErrKind::InvalidMetric, "base point out of range", {a});

  auto base = std::make_shared<const Quantale>(chain_quantale(k));
  const int n = k + 1;
  std::vector<std::vector<int>> ball(n);
  for (int r = 0; r < k; ++r)
    for (int x = 0; x < npts; ++x) {
      int dist = k + 1;
      for (int a : A) dist = std::min(dist, metric[x][a]);
      if (dist <= r) ball[r].push_back(x);
    }

  Presheaf f;
  f.base = base;
  f.stalk.assign(n, 0);
  f.res.assign(n, std::vector<std::vector<int>>(n));
  for (int r = 0; r < k; ++r) f.stalk[r] = static_cast<int>(ball[r].size());
  f.stalk[k] = 1;
  auto index_in = [&](int r, int x) {
    return static_cast<int>(std::lower_bound(ball[r].begin(), ball[r].end(), x) -
                            ball[r].begin());
  };
  for (int u = 0; u < n; ++u) {
    if (f.stalk[u] == 0) continue;
    for (int v = 0; v < n; ++v) {
      if (!base->leq(v, u)) continue;
      std::vector<int> table(f.stalk[u]);
      for (int s = 0; s < f.stalk[u]; ++s)
        table[s] = (v == k || u == k) ? 0 : index_in(v, ball[u][s]);
      f.res[u][v] = std::move(table);
    }
  }
  return f;
}

Presheaf product_presheaf(const std::vector<Presheaf>& parts) {
  if (parts.empty()) throw Error(ErrKind::BadArgument, "product of no presheaves");
  for (const auto& p : parts)
    if (!sheaf_check(p).sheaf)
      throw Error(ErrKind::PreconditionViolated, "product factors must be sheaves");
  std::vector<Quantale> bases;
  bases.reserve(parts.size());
  for (const auto& p : parts) bases.push_back(*p.base);
  auto base = std::make_shared<const Quantale>(product(bases));
  const int parts_n = static_cast<int>(parts.size());
  const int n = base->size();

  auto decode = [&](int idx) {
    std::vector<int> t(parts_n);
    for (int i = parts_n - 1; i >= 0; --i) {
      t[i] = idx % bases[i].size();
      idx /= bases[i].size();
    }
    return t;
  };

  Presheaf f;
  f.base = base;
  f.stalk.assign(n, 0);
  f.res.assign(n, std::vector<std::vector<int>>(n));
  std::vector<std::vector<int>> tuples(n);
  for (int u = 0; u < n; ++u) {
    tuples[u] = decode(u);
    long long sz = 1;
    for (int i = 0; i < parts_n; ++i) sz *= parts[i].stalk[tuples[u][i]];
    if (sz > (1 << 20)) throw Error(ErrKind::CapExceeded, "product stalk too large");
    f.stalk[u] = static_cast<int>(sz);
  }
  for (int u = 0; u < n; ++u) {
    if (f.stalk[u] == 0) continue;
    for (int v = 0; v < n; ++v) {
      if (!base->leq(v, u)) continue;
      std::vector<int> table(f.stalk[u]);
      for (int s = 0; s < f.stalk[u]; ++s) {
        int rem = s, enc = 0;
        std::vector<int> comp(parts_n);
        for (int i = parts_n - 1; i >= 0; --i) {
          comp[i] = rem % parts[i].stalk[tuples[u][i]];
          rem /= parts[i].stalk[tuples[u][i]];
        }
        for (int i = 0; i < parts_n; ++i) {
          int r = parts[i].res[tuples[u][i]][tuples[v][i]][comp[i]];
          enc = enc * parts[i].stalk[tuples[v][i]] + r;
        }
        table[s] = enc;
      }
      f.res[u][v] = std::move(table);
    }
  }
  return f;
}

bool validate_morphism(const Morphism& m, std::vector<int>* witness) {
  const Presheaf& f = *m.source;
  const Presheaf& g = *m.target;
  const Quantale& q = *f.base;
  if (g.base->size() != q.size())
    throw Error(ErrKind::BadArgument, "morphism endpoints live over different bases");
  if (static_cast<int>(m.comp.size()) != q.size())
    throw Error(ErrKind::BadArgument, "component list sized wrong");
  for (int u = 0; u < q.size(); ++u) {
    if (static_cast<int>(m.comp[u].size()) != f.stalk[u])
      throw Error(ErrKind::BadArgument, "component table sized wrong");
    for (int s : m.comp[u])
      if (s < 0 || s >= g.stalk[u])
        throw Error(ErrKind::BadArgument, "component entry out of range");
  }
  for (int u = 0; u < q.size(); ++u)
    for (int v = 0; v < q.size(); ++v) {
      if (!q.leq(v, u) || f.stalk[u] == 0) continue;
      for (int s = 0; s < f.stalk[u]; ++s)
        if (m.comp[v][f.res[u][v][s]] != g.res[u][v][m.comp[u][s]]) {
          if (witness) *witness = {u, v, s};
          return false;
        }
    }
  return true;
}

bool is_mono(const Morphism& m) {
  for (size_t u = 0; u < m.comp.size(); ++u)
    for (size_t s = 0; s < m.comp[u].size(); ++s)
      for (size_t t = s + 1; t < m.comp[u].size(); ++t)
        if (m.comp[u][s] == m.comp[u][t]) return false;
  return true;
}

MorphismEnumeration enumerate_morphisms(const Presheaf& f, const Presheaf& g,
                                        long long budget) {
  MorphismEnumeration out;
  const Quantale& q = *f.base;
  const int n = q.size();
  for (int u = 0; u < n; ++u)
    if (f.stalk[u] > 0 && g.stalk[u] == 0) return out;  // no morphism can exist

  std::vector<std::vector<int>> comp(n);
  for (int u = 0; u < n; ++u) comp[u].assign(f.stalk[u], -1);

  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int s = 0; s < f.stalk[u]; ++s) slots.push_back({u, s});

  std::function<bool(size_t)> go = [&](size_t i) -> bool {
    if (--budget < 0) return false;
    if (i == slots.size()) {
      out.all.push_back(comp);
      return true;
    }
    auto [u, s] = slots[i];
    for (int t = 0; t < g.stalk[u]; ++t) {
      bool ok = true;
      // naturality against already-assigned slots, both directions
      for (int v = 0; v < n && ok; ++v) {
        if (!q.leq(v, u) || v == u) continue;
        int sv = f.res[u][v][s];
        if (comp[v][sv] != -1 && comp[v][sv] != g.res[u][v][t]) ok = false;
      }
      for (int w = 0; w < n && ok; ++w) {
        if (!q.leq(u, w) || w == u) continue;
        for (int r = 0; r < f.stalk[w] && ok; ++r)
          if (comp[w][r] != -1 && f.res[w][u][r] == s && g.res[w][u][comp[w][r]] != t) ok = false;
      }
      if (!ok) continue;
      comp[u][s] = t;
      if (!go(i + 1)) {
        comp[u][s] = -1;
        return false;
      }
      comp[u][s] = -1;
    }
    return true;
  };
  if (!go(0)) out.truncated = true;
  return out;
}

}  // namespace qsl
