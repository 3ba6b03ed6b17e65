#include "constructions.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace qsl {

namespace {

long long gcdll(long long a, long long b) { return std::gcd(a, b); }

}  // namespace

Quantale chain_quantale(int k) {
  if (k < 0) throw Error(ErrKind::BadArgument, "chain parameter must be >= 0");
  const int n = k + 1;
  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = std::to_string(a);
    for (int b = 0; b < n; ++b) {
      leq[a][b] = a >= b;  // numeric order reversed: 0 is top
      mult[a][b] = std::min(a + b, k);
    }
  }
  return Quantale::make(leq, mult, std::move(labels));
}

Quantale divisor_quantale(long long N) {
  if (N < 1) throw Error(ErrKind::BadArgument, "divisor parameter must be >= 1");
  std::vector<long long> keys;
  for (long long d = 1; d <= N; ++d)
    if (N % d == 0) keys.push_back(d);
  const int n = static_cast<int>(keys.size());
  if (n > Quantale::kCarrierCap)
    throw Error(ErrKind::CapExceeded, "too many divisors for the carrier cap");
  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  std::vector<std::string> labels(n);
  auto index_of = [&](long long key) {
    return static_cast<int>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
  };
  for (int a = 0; a < n; ++a) {
    labels[a] = "(" + std::to_string(keys[a] == N ? 0 : keys[a]) + ")";
    for (int b = 0; b < n; ++b) {
      leq[a][b] = keys[a] % keys[b] == 0;     // (d) <= (e) iff e | d
      mult[a][b] = index_of(gcdll(keys[a] * keys[b], N));
    }
  }
  return Quantale::make(leq, mult, std::move(labels));
}

Quantale powerset_locale(int m) {
  if (m < 0 || m > 5)
    throw Error(ErrKind::CapExceeded, "powerset locale supports 0 <= m <= 5");
  const int n = 1 << m;
  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int i = 0; i < m; ++i)
      if ((a >> i) & 1) {
        if (!first) os << ',';
        os << i;
        first = false;
      }
    os << '}';
    labels[a] = os.str();
    for (int b = 0; b < n; ++b) {
      leq[a][b] = (a & b) == a;
      mult[a][b] = a & b;
    }
  }
  return Quantale::make(leq, mult, std::move(labels));
}

Quantale product(const std::vector<Quantale>& factors) {
  if (factors.empty()) throw Error(ErrKind::BadArgument, "product needs at least one factor");
  long long total = 1;
  for (const auto& f : factors) {
    total *= f.size();
    if (total > Quantale::kCarrierCap)
      throw Error(ErrKind::CapExceeded, "product carrier exceeds cap");
  }
  const int n = static_cast<int>(total);
  const int parts = static_cast<int>(factors.size());
  // Row-major tuples: the last factor varies fastest.
  auto decode = [&](int idx) {
    std::vector<int> t(parts);
    for (int i = parts - 1; i >= 0; --i) {
      t[i] = idx % factors[i].size();
      idx /= factors[i].size();
    }
    return t;
  };
  auto encode = [&](const std::vector<int>& t) {
    int idx = 0;
    for (int i = 0; i < parts; ++i) idx = idx * factors[i].size() + t[i];
    return idx;
  };
  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    auto ta = decode(a);
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < parts; ++i) {
      if (i) os << ',';
      os << factors[i].label(ta[i]);
    }
    os << ')';
    labels[a] = os.str();
    for (int b = 0; b < n; ++b) {
      auto tb = decode(b);
      bool le = true;
      std::vector<int> tm(parts);
      for (int i = 0; i < parts; ++i) {
        le = le && factors[i].leq(ta[i], tb[i]);
        tm[i] = factors[i].mul(ta[i], tb[i]);
      }
      leq[a][b] = le;
      mult[a][b] = encode(tm);
    }
  }
  return Quantale::make(leq, mult, std::move(labels));
}

Quantale interval(const Quantale& q, int l, int u) {
  const auto& p = q.profile();
  if (!(p.commutative && p.semicartesian))
    throw Error(ErrKind::PreconditionViolated,
                "interval construction requires a commutative semicartesian quantale");
  if (!q.is_idem(l))
    throw Error(ErrKind::NotIdempotentBase, "interval base must be idempotent", {l});
  if (!q.leq(l, u)) throw Error(ErrKind::EmptyInterval, "interval is empty", {l, u});
  std::vector<int> members;
  for (int x = 0; x < q.size(); ++x)
    if (q.leq(l, x) && q.leq(x, u)) members.push_back(x);
  const int n = static_cast<int>(members.size());
  auto index_of = [&](int x) {
    return static_cast<int>(std::lower_bound(members.begin(), members.end(), x) - members.begin());
  };
  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = q.label(members[a]);
    for (int b = 0; b < n; ++b) {
      leq[a][b] = q.leq(members[a], members[b]);
      // x.y lands in [l,u]: x.y >= l.l = l by monotonicity, x.y <= x <= u.
      mult[a][b] = index_of(q.mul(members[a], members[b]));
    }
  }
  return Quantale::make(leq, mult, std::move(labels));
}

std::pair<Quantale, QuantaleMap> idem_locale(const Quantale& q) {
  const auto& p = q.profile();
  if (!(p.commutative && p.semicartesian && p.unital))
    throw Error(ErrKind::PreconditionViolated,
                "idempotent locale requires a commutative semicartesian unital quantale");
  std::vector<int> members;
  for (int x = 0; x < q.size(); ++x)
    if (q.is_idem(x)) members.push_back(x);
  const int n = static_cast<int>(members.size());
  auto index_of = [&](int x) {
    return static_cast<int>(std::lower_bound(members.begin(), members.end(), x) - members.begin());
  };
  std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    labels[a] = q.label(members[a]);
    for (int b = 0; b < n; ++b) {
      leq[a][b] = q.leq(members[a], members[b]);
      mult[a][b] = index_of(q.mul(members[a], members[b]));
    }
  }
  Quantale loc = Quantale::make(leq, mult, std::move(labels));
  QuantaleMap inc{loc, q, members};
  for (int e = 0; e < n; ++e)
    for (int x = 0; x < q.size(); ++x) {
      bool lhs = q.leq(members[e], x);
      bool rhs = q.leq(members[e], q.approx_minus(x));
      if (lhs != rhs)
        throw Error(ErrKind::PreconditionViolated,
                    "idempotent adjunction failed on construction", {members[e], x});
    }
  return {std::move(loc), std::move(inc)};
}

MorphismCheck check_csq_morphism(const QuantaleMap& f) {
  MorphismCheck r;
  const Quantale& S = f.source;
  const Quantale& T = f.target;
  if (static_cast<int>(f.table.size()) != S.size())
    throw Error(ErrKind::BadArgument, "morphism table has wrong length");
  for (int x : f.table)
    if (x < 0 || x >= T.size())
      throw Error(ErrKind::BadArgument, "morphism table entry out of range");

  r.sup_preserving = f.table[S.bottom()] == T.bottom();
  if (!r.sup_preserving) {
    r.witness = {S.bottom()};
    r.detail = "bottom not preserved";
  }
  for (int a = 0; a < S.size() && r.sup_preserving; ++a)
    for (int b = 0; b < S.size(); ++b)
      if (f.table[S.join(a, b)] != T.join(f.table[a], f.table[b])) {
        r.sup_preserving = false;
        r.witness = {a, b};
        r.detail = "binary sup not preserved";
        break;
      }

  r.top_preserving = f.table[S.top()] == T.top();
  if (!r.top_preserving && r.detail.empty()) {
    r.witness = {S.top()};
    r.detail = "top not preserved";
  }

  r.lax_mult = true;
  r.exact_mult = true;
  for (int a = 0; a < S.size(); ++a)
    for (int b = 0; b < S.size(); ++b) {
      int img = f.table[S.mul(a, b)];
      int prod = T.mul(f.table[a], f.table[b]);
      if (img != prod) r.exact_mult = false;
      if (!T.leq(prod, img)) {
        if (r.lax_mult && r.detail.empty()) {
          r.witness = {a, b};
          r.detail = "f(a.b) >= f(a).f(b) fails";
        }
        r.lax_mult = false;
      }
    }

  r.lands_in_idempotents = true;
  for (int a = 0; a < S.size(); ++a)
    if (!T.is_idem(f.table[a])) {
      r.lands_in_idempotents = false;
      break;
    }
  return r;
}

}  // namespace qsl
