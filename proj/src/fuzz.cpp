#include "fuzz.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <random>
#include <set>

namespace qsl {

bool fuzz_target_holds(const AxiomProfile& p, const std::string& target) {
  if (target == "locale") return p.locale;
  if (target == "integral-nonidempotent") return p.integral && !p.idempotent;
  if (target == "nongeometric") return p.commutative && p.semicartesian && !p.geometric;
  if (target == "noncoherent")
    return p.unital && p.commutative && p.semicartesian && p.double_distributive &&
           !p.coherent;
  if (target == "plus-preconditions-nonlocale")
    return p.unital && p.commutative && p.semicartesian && p.double_distributive &&
           p.coherent && p.strongly_divisible && !p.locale;
  throw Error(ErrKind::BadArgument, "unknown fuzz target: " + target);
}

namespace {

struct Lattice {
  int n;
  std::vector<std::vector<char>> leq;
  std::vector<std::vector<int>> join, meet;
  std::vector<int> irreducibles;
  int bottom = 0;
};

// joins/meets by scan; returns false if some pair has none
bool complete_lattice(Lattice& L) {
  const int n = L.n;
  L.join.assign(n, std::vector<int>(n, -1));
  L.meet.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int best = -1;
      for (int c = 0; c < n; ++c) {
        if (!L.leq[a][c] || !L.leq[b][c]) continue;
        if (best == -1 || L.leq[c][best]) best = c;
      }
      if (best == -1) return false;
      for (int c = 0; c < n; ++c)
        if (L.leq[a][c] && L.leq[b][c] && !L.leq[best][c]) return false;
      L.join[a][b] = best;
      best = -1;
      for (int c = 0; c < n; ++c) {
        if (!L.leq[c][a] || !L.leq[c][b]) continue;
        if (best == -1 || L.leq[best][c]) best = c;
      }
      if (best == -1) return false;
      for (int c = 0; c < n; ++c)
        if (L.leq[c][a] && L.leq[c][b] && !L.leq[c][best]) return false;
      L.meet[a][b] = best;
    }
  for (int a = 0; a < n; ++a) {
    bool bot = true;
    for (int b = 0; b < n; ++b) bot = bot && L.leq[a][b];
    if (bot) L.bottom = a;
  }
  // join-irreducible: not the join of the elements strictly below
  L.irreducibles.clear();
  for (int a = 0; a < n; ++a) {
    if (a == L.bottom) continue;
    int below = L.bottom;
    for (int b = 0; b < n; ++b)
      if (b != a && L.leq[b][a]) below = L.join[below][b];
    if (below != a) L.irreducibles.push_back(a);
  }
  return true;
}

std::string lattice_canonical(const Lattice& L) {
  std::vector<int> perm(L.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s;
    s.reserve(L.n * L.n);
    for (int a = 0; a < L.n; ++a)
      for (int b = 0; b < L.n; ++b) s.push_back(L.leq[perm[a]][perm[b]] ? '1' : '0');
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Lattices on n labeled elements where the numbering is a linear extension;
// one representative per isomorphism class.
std::vector<Lattice> lattices_up_to_iso(int n, long long& budget) {
  std::vector<Lattice> out;
  std::set<std::string> seen;
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cells.push_back({i, j});

  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) leq[i][i] = 1;

  std::function<void(size_t)> go = [&](size_t k) {
    if (--budget < 0) return;
    if (k == cells.size()) {
      // transitivity
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (!leq[a][b]) continue;
          for (int c = b + 1; c < n; ++c)
            if (leq[b][c] && !leq[a][c]) return;
        }
      Lattice L{n, leq, {}, {}, {}, 0};
      if (!complete_lattice(L)) return;
      std::string canon = lattice_canonical(L);
      if (seen.insert(canon).second) out.push_back(std::move(L));
      return;
    }
    auto [i, j] = cells[k];
    leq[i][j] = 0;
    go(k + 1);
    leq[i][j] = 1;
    go(k + 1);
    leq[i][j] = 0;
  };
  go(0);
  return out;
}

// Extends a symmetric irreducible-pair table to the full multiplication.
std::vector<std::vector<int>> extend_mult(const Lattice& L,
                                          const std::vector<std::vector<int>>& m) {
  const int n = L.n;
  const auto& irr = L.irreducibles;
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, L.bottom));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int acc = L.bottom;
      for (size_t i = 0; i < irr.size(); ++i) {
        if (!L.leq[irr[i]][a]) continue;
        for (size_t j = 0; j < irr.size(); ++j) {
          if (!L.leq[irr[j]][b]) continue;
          acc = L.join[acc][m[i][j]];
        }
      }
      mult[a][b] = acc;
    }
  return mult;
}

struct Search {
  const std::string& target;
  long long budget;
  FuzzResult& res;
  std::set<std::string> canon_seen;

  // returns true when the search should stop
  bool consider(const Lattice& L, const std::vector<std::vector<int>>& m) {
    auto mult = extend_mult(L, m);
    if (!Quantale::check_laws(L.leq, mult).empty()) return false;
    Quantale q = Quantale::make(L.leq, mult);
    ++res.examined;
    if (L.n <= 8 && canon_seen.insert(q.canonical_form()).second) ++res.distinct;
    if (fuzz_target_holds(q.profile(), target)) {
      res.found = true;
      res.canonical = L.n <= 8 ? q.canonical_form() : "";
      res.witness = std::move(q);
      return true;
    }
    return false;
  }
};

bool exhaust_lattice(const Lattice& L, Search& search) {
  const auto& irr = L.irreducibles;
  const int k = static_cast<int>(irr.size());
  std::vector<std::vector<int>> m(k, std::vector<int>(k, L.bottom));
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) cells.push_back({i, j});

  std::function<bool(size_t)> go = [&](size_t c) -> bool {
    if (--search.budget < 0) return true;  // stop, budget exhausted
    if (c == cells.size()) return search.consider(L, m);
    auto [i, j] = cells[c];
    int bound = L.meet[irr[i]][irr[j]];
    for (int v = 0; v < L.n; ++v) {
      if (!L.leq[v][bound]) continue;
      // monotonicity against already assigned cells
      bool ok = true;
      for (size_t c2 = 0; c2 < c && ok; ++c2) {
        auto [i2, j2] = cells[c2];
        int w = m[i2][j2];
        bool le_i = L.leq[irr[i2]][irr[i]] && L.leq[irr[j2]][irr[j]];
        bool le_i_sw = L.leq[irr[j2]][irr[i]] && L.leq[irr[i2]][irr[j]];
        if ((le_i || le_i_sw) && !L.leq[w][v]) ok = false;
        bool ge_i = L.leq[irr[i]][irr[i2]] && L.leq[irr[j]][irr[j2]];
        bool ge_i_sw = L.leq[irr[j]][irr[i2]] && L.leq[irr[i]][irr[j2]];
        if ((ge_i || ge_i_sw) && !L.leq[v][w]) ok = false;
      }
      if (!ok) continue;
      m[i][j] = m[j][i] = v;
      if (go(c + 1)) return true;
    }
    m[i][j] = m[j][i] = L.bottom;
    return false;
  };
  return go(0);
}

}  // namespace

FuzzResult fuzz_search(int size, const std::string& target, long long budget,
                       std::optional<uint64_t> seed) {
  if (size < 1 || size > Quantale::kCarrierCap)
    throw Error(ErrKind::BadArgument, "fuzz size out of range");
  fuzz_target_holds(AxiomProfile{}, target);  // validate the target name

  FuzzResult res;
  res.target = target;
  res.size = size;
  res.seed = seed.value_or(0);
  long long initial_budget = budget;
  Search search{target, budget, res, {}};

  if (size <= 6 && !seed) {
    res.mode = "exhaustive";
    auto lattices = lattices_up_to_iso(size, search.budget);
    res.lattices = static_cast<long long>(lattices.size());
    bool stopped = false;
    for (const auto& L : lattices) {
      if (exhaust_lattice(L, search)) {
        stopped = true;
        break;
      }
    }
    res.exhausted = !res.found && !stopped && search.budget >= 0;
    if (search.budget < 0) res.exhausted = false;
  } else {
    res.mode = "random";
    std::mt19937_64 rng(res.seed);
    while (search.budget > 0 && !res.found) {
      --search.budget;
      // random poset on a linear extension, then lattice filter
      Lattice L;
      L.n = size;
      L.leq.assign(size, std::vector<char>(size, 0));
      for (int i = 0; i < size; ++i) L.leq[i][i] = 1;
      for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j) L.leq[i][j] = (rng() & 1) != 0;
      for (int k = 0; k < size; ++k)
        for (int i = 0; i < size; ++i)
          for (int j = 0; j < size; ++j)
            if (L.leq[i][k] && L.leq[k][j]) L.leq[i][j] = 1;
      if (!complete_lattice(L)) continue;
      const int kk = static_cast<int>(L.irreducibles.size());
      std::vector<std::vector<int>> m(kk, std::vector<int>(kk, L.bottom));
      for (int i = 0; i < kk; ++i)
        for (int j = i; j < kk; ++j) {
          int bound = L.meet[L.irreducibles[i]][L.irreducibles[j]];
          std::vector<int> below;
          for (int v = 0; v < size; ++v)
            if (L.leq[v][bound]) below.push_back(v);
          m[i][j] = m[j][i] = below[rng() % below.size()];
        }
      search.consider(L, m);
    }
    res.exhausted = false;
  }
  res.budget_used = initial_budget - std::max<long long>(search.budget, 0);
  return res;
}

}  // namespace qsl
