#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <memory>

#include "presheaf.hpp"

using namespace qsl;

namespace {

std::shared_ptr<const Quantale> Q(Quantale q) {
  return std::make_shared<const Quantale>(std::move(q));
}

// Equalizer-form oracle for the sheaf condition at one cover: enumerate every
// family in the product of stalks, keep the ones where the two projection
// legs agree, and demand a bijection with the restriction families of F(u).
bool equalizer_ok_at(const Presheaf& f, const Cover& c) {
  const Quantale& q = *f.base;
  auto mem = c.list();
  std::vector<std::vector<int>> equalizer;
  std::vector<int> family(mem.size(), 0);
  bool room = true;
  for (int m : mem) room = room && f.stalk[m] > 0;
  while (room) {
    bool compatible = true;
    for (size_t i = 0; i < mem.size() && compatible; ++i)
      for (size_t j = 0; j < mem.size() && compatible; ++j) {
        int p = q.mul(mem[i], mem[j]);
        if (f.stalk[p] == 0) continue;
        compatible = f.res[mem[i]][p][family[i]] == f.res[mem[j]][p][family[j]];
      }
    if (compatible) equalizer.push_back(family);
    size_t k = 0;
    for (; k < mem.size(); ++k) {
      if (++family[k] < f.stalk[mem[k]]) break;
      family[k] = 0;
    }
    if (k == mem.size()) break;
  }
  std::vector<std::vector<int>> image;
  for (int s = 0; s < f.stalk[c.target]; ++s) {
    std::vector<int> fam(mem.size());
    for (size_t i = 0; i < mem.size(); ++i) fam[i] = f.res[c.target][mem[i]][s];
    image.push_back(fam);
  }
  std::sort(equalizer.begin(), equalizer.end());
  std::sort(image.begin(), image.end());
  for (size_t i = 1; i < image.size(); ++i)
    if (image[i] == image[i - 1]) return false;
  return image == equalizer;
}

bool equalizer_oracle(const Presheaf& f) {
  const Quantale& q = *f.base;
  for (int u = 0; u < q.size(); ++u) {
    auto covers = enumerate_covers(q, u, 1 << 16);
    REQUIRE(!covers.truncated);
    for (const auto& c : covers.covers)
      if (!equalizer_ok_at(f, c)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("validate: terminal and representables are functorial") {
  auto c3 = Q(chain_quantale(3));
  CHECK(validate_presheaf(terminal_presheaf(c3)).empty());
  for (int v = 0; v < 4; ++v) CHECK(validate_presheaf(representable(c3, v)).empty());
}

TEST_CASE("validate: corrupted composition cell is reported") {
  Presheaf f = ball_sheaf({{0, 1}, {1, 0}}, {0}, 4);
  REQUIRE(f.stalk == std::vector<int>{1, 2, 2, 2, 1});
  REQUIRE(validate_presheaf(f).empty());
  f.res[1][3] = {1, 0};  // disagrees with the route through radius 2
  auto vs = validate_presheaf(f);
  REQUIRE(!vs.empty());
  bool comp = false;
  for (const auto& v : vs) comp |= v.law == ErrKind::CompositionViolated;
  CHECK(comp);
}

TEST_CASE("validate: empty stalk below a nonempty one is rejected") {
  auto c1 = Q(chain_quantale(1));
  Presheaf f;
  f.base = c1;
  f.stalk = {1, 0};
  f.res.assign(2, std::vector<std::vector<int>>(2));
  f.res[0][0] = {0};
  auto vs = validate_presheaf(f);
  REQUIRE(!vs.empty());
  CHECK(vs.front().detail == "restriction demanded into an empty stalk");
}

TEST_CASE("cover enumeration") {
  Quantale c3 = chain_quantale(3);
  auto at_top = enumerate_covers(c3, 0, 1 << 16);
  CHECK(at_top.covers.size() == 8);  // every subset containing the top element
  for (const auto& c : at_top.covers) CHECK(((c.members >> 0) & 1) == 1);

  auto at_bottom = enumerate_covers(c3, 3, 1 << 16);
  bool has_empty = false, has_singleton = false;
  for (const auto& c : at_bottom.covers) {
    has_empty |= c.members == 0;
    has_singleton |= c.members == (1ull << 3);
  }
  CHECK(has_empty);
  CHECK(has_singleton);

  // the cap bounds the submask walk itself, so tiny caps truncate early
  auto truncated = enumerate_covers(c3, 0, 2);
  CHECK(truncated.truncated);
  CHECK(truncated.covers.size() <= 2);
}

TEST_CASE("glue") {
  auto c3 = Q(chain_quantale(3));
  Presheaf one = terminal_presheaf(c3);

  // singleton cover: exactly the given element
  Cover singleton{1, 1ull << 1};
  CHECK(glue(one, singleton, {0}) == std::vector<int>{0});

  // empty cover of bottom on a sheaf: exactly one gluing
  Cover empty{3, 0};
  CHECK(glue(one, empty, {}) == std::vector<int>{0});

  // restriction family of any element is compatible and contains it
  Presheaf ball = ball_sheaf({{0, 2}, {2, 0}}, {0}, 3);
  Cover c{1, (1ull << 1) | (1ull << 2)};
  for (int s = 0; s < ball.stalk[1]; ++s) {
    std::vector<int> fam = {ball.res[1][1][s], ball.res[1][2][s]};
    auto gl = glue(ball, c, fam);
    CHECK(std::count(gl.begin(), gl.end(), s) == 1);
  }
}

TEST_CASE("glue rejects incompatible families with the offending pair") {
  // constant two-point presheaf over P(2): family disagreeing at the meet
  auto p2 = Q(powerset_locale(2));
  Presheaf f;
  f.base = p2;
  f.stalk = {2, 2, 2, 2};
  f.res.assign(4, std::vector<std::vector<int>>(4));
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (p2->leq(v, u)) f.res[u][v] = {0, 1};
  REQUIRE(validate_presheaf(f).empty());
  Cover c{3, (1ull << 1) | (1ull << 2)};
  try {
    glue(f, c, {0, 1});
    FAIL("expected NotCompatible");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::NotCompatible);
    CHECK(e.witness.size() == 2);
  }
  CHECK(glue(f, c, {1, 1}) == std::vector<int>{1});
}

TEST_CASE("sheaf check: positives") {
  auto c3 = Q(chain_quantale(3));
  auto d12 = Q(divisor_quantale(12));
  auto p2 = Q(powerset_locale(2));
  CHECK(sheaf_check(terminal_presheaf(c3)).sheaf);
  for (int v = 0; v < 4; ++v) CHECK(sheaf_check(representable(c3, v)).sheaf);
  for (int v = 0; v < 6; ++v) CHECK(sheaf_check(representable(d12, v)).sheaf);
  for (int v = 0; v < 4; ++v) CHECK(sheaf_check(representable(p2, v)).sheaf);
}

TEST_CASE("sheaf check agrees with the equalizer-form oracle") {
  auto p2 = Q(powerset_locale(2));
  auto d12 = Q(divisor_quantale(12));
  std::vector<Presheaf> pool;
  pool.push_back(terminal_presheaf(p2));
  pool.push_back(representable(p2, 1));
  pool.push_back(representable(d12, d12->element_by_label("(2)")));
  pool.push_back(ball_sheaf({{0, 2, 3}, {2, 0, 1}, {3, 1, 0}}, {1}, 3));

  // separated but not a sheaf: empty stalk at top over P(2), singletons below
  Presheaf gap;
  gap.base = p2;
  gap.stalk = {1, 1, 1, 0};
  gap.res.assign(4, std::vector<std::vector<int>>(4));
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 4; ++v)
      if (p2->leq(v, u)) gap.res[u][v] = {0};
  REQUIRE(validate_presheaf(gap).empty());
  pool.push_back(gap);

  // not separated: doubled top stalk that collapses below
  Presheaf doubled;
  doubled.base = p2;
  doubled.stalk = {1, 1, 1, 2};
  doubled.res.assign(4, std::vector<std::vector<int>>(4));
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 4; ++v)
      if (p2->leq(v, u)) doubled.res[u][v] = {0};
  doubled.res[3][3] = {0, 1};
  for (int v = 0; v < 3; ++v) doubled.res[3][v] = {0, 0};
  REQUIRE(validate_presheaf(doubled).empty());
  pool.push_back(doubled);

  for (const auto& f : pool) {
    auto rep = sheaf_check(f);
    REQUIRE(!rep.truncated);
    CHECK(rep.sheaf == equalizer_oracle(f));
  }

  auto gap_rep = sheaf_check(gap);
  CHECK(gap_rep.separated);
  CHECK(!gap_rep.sheaf);
  CHECK(gap_rep.witness_element == 3);
  auto dbl_rep = sheaf_check(doubled);
  CHECK(!dbl_rep.separated);
}

TEST_CASE("separated forces a small bottom stalk; sheaves force a singleton") {
  auto c1 = Q(chain_quantale(1));
  Presheaf f;
  f.base = c1;
  f.stalk = {1, 2};
  f.res.assign(2, std::vector<std::vector<int>>(2));
  f.res[0][0] = {0};
  f.res[0][1] = {0};
  f.res[1][1] = {0, 1};
  REQUIRE(validate_presheaf(f).empty());
  auto rep = sheaf_check(f);
  CHECK(!rep.separated);

  for (const auto& g : {terminal_presheaf(c1), ball_sheaf({{0}}, {0}, 2)}) {
    REQUIRE(sheaf_check(g).sheaf);
    CHECK(g.stalk[g.base->bottom()] == 1);
  }
}

TEST_CASE("representable stalk sizes on C3") {
  auto c3 = Q(chain_quantale(3));
  Presheaf r2 = representable(c3, 2);
  CHECK(r2.stalk == std::vector<int>{0, 0, 1, 1});
  Presheaf rtop = representable(c3, 0);
  CHECK(rtop.same_shape(terminal_presheaf(c3)));
  Presheaf rbot = representable(c3, 3);
  CHECK(rbot.stalk == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("restriction of sheaves") {
  auto c3 = Q(chain_quantale(3));
  Presheaf one = terminal_presheaf(c3);
  CHECK(restrict_to(one, c3->top()).same_shape(one));
  Presheaf r1 = restrict_to(one, 1);
  CHECK(r1.same_shape(representable(c3, 1)));
  CHECK(sheaf_check(r1).sheaf);
  // nested restriction collapses
  CHECK(restrict_to(restrict_to(one, 1), 2).same_shape(restrict_to(one, 2)));

  Presheaf bad;
  bad.base = c3;
  bad.stalk = {1, 1, 1, 2};
  bad.res.assign(4, std::vector<std::vector<int>>(4));
  for (int u = 0; u < 4; ++u)
    for (int v = u; v < 4; ++v) bad.res[u][v].assign(bad.stalk[u], 0);
  bad.res[3][3] = {0, 1};
  REQUIRE(validate_presheaf(bad).empty());
  CHECK_THROWS_AS(restrict_to(bad, 1), Error);
}

TEST_CASE("shift of sheaves") {
  auto c3 = Q(chain_quantale(3));
  Presheaf r2 = representable(c3, 2);
  CHECK(shift_by(r2, c3->unit()).same_shape(r2));

  Presheaf s1 = shift_by(r2, 1);
  // stalk at v iff 1.v <= 2
  CHECK(s1.stalk == std::vector<int>{0, 1, 1, 1});
  CHECK(sheaf_check(s1).sheaf);

  // shift by bottom is constant at the bottom stalk
  Presheaf sb = shift_by(r2, 3);
  CHECK(sb.stalk == std::vector<int>{1, 1, 1, 1});

  // composition collapses to the product of the shifts
  Presheaf a = shift_by(shift_by(r2, 1), 1);
  Presheaf b = shift_by(r2, c3->mul(1, 1));
  CHECK(a.same_shape(b));
}

TEST_CASE("ball sheaf") {
  // two points at distance 2, base point first, chain height 3
  Presheaf f = ball_sheaf({{0, 2}, {2, 0}}, {0}, 3);
  CHECK(f.stalk == std::vector<int>{1, 1, 2, 1});
  CHECK(validate_presheaf(f).empty());

  // Saturated radius sums collapse into the single point at height k, so the
  // family (p0 at radius 1, p1 at radius 2) over the cover {1,2} is
  // vacuously compatible yet has no gluing: the truncated chain loses the
  // genuine ball at radius 3 that separates the two points.
  auto rep = sheaf_check(f);
  CHECK(rep.separated);
  CHECK(!rep.sheaf);
  CHECK(rep.witness_element == 1);

  // base set = everything at height 2: products only saturate on the
  // diagonal, so any metric gives a sheaf
  Presheaf full = ball_sheaf({{0, 1}, {1, 0}}, {0, 1}, 2);
  CHECK(full.stalk == std::vector<int>{2, 2, 1});
  CHECK(sheaf_check(full).sheaf);

  Presheaf near = ball_sheaf({{0, 1}, {1, 0}}, {0}, 2);
  CHECK(near.stalk == std::vector<int>{1, 2, 1});
  CHECK(sheaf_check(near).sheaf);

  // at height 3 the far points (distance k = infinity) stay invisible and
  // the singleton balls glue
  Presheaf far = ball_sheaf({{0, 3, 3}, {3, 0, 1}, {3, 1, 0}}, {0}, 3);
  CHECK(far.stalk == std::vector<int>{1, 1, 1, 1});
  CHECK(sheaf_check(far).sheaf);

  CHECK_THROWS_AS(ball_sheaf({{0, 1}, {2, 0}}, {0}, 3), Error);
  CHECK_THROWS_AS(ball_sheaf({{1, 2}, {2, 0}}, {0}, 3), Error);
  CHECK_THROWS_AS(ball_sheaf({{0, 9}, {9, 0}}, {0}, 3), Error);
}

TEST_CASE("product presheaf") {
  auto c2 = Q(chain_quantale(2));
  Presheaf r1 = representable(c2, 1);
  Presheaf single = product_presheaf({r1});
  CHECK(single.stalk == r1.stalk);

  Presheaf both = product_presheaf({terminal_presheaf(c2), terminal_presheaf(c2)});
  CHECK(both.same_shape(terminal_presheaf(Q(product({*c2, *c2})))));
  CHECK(sheaf_check(both).sheaf);

  // product of representables is the representable of the pair
  Presheaf pr = product_presheaf({representable(c2, 1), representable(c2, 2)});
  auto pq = pr.base;
  int pair_elem = 3 * 1 + 2;
  CHECK(pr.same_shape(representable(pq, pair_elem)));
  CHECK(sheaf_check(pr).sheaf);
}

TEST_CASE("disjoint covers give product decompositions") {
  // over D(12): the cover {(3),(4)} of (1) has pairwise product (0)
  auto d12 = Q(divisor_quantale(12));
  int e1 = d12->element_by_label("(1)");
  int e3 = d12->element_by_label("(3)");
  int e4 = d12->element_by_label("(4)");
  REQUIRE(d12->mul(e3, e4) == d12->bottom());

  Presheaf one = terminal_presheaf(d12);
  CHECK(one.stalk[e1] == one.stalk[e3] * one.stalk[e4]);
  Cover c{e1, (1ull << e3) | (1ull << e4)};
  int count = 0;
  for (int a = 0; a < one.stalk[e3]; ++a)
    for (int b = 0; b < one.stalk[e4]; ++b) {
      auto gl = glue(one, c, {a, b});
      CHECK(gl.size() == 1);
      ++count;
    }
  CHECK(count == one.stalk[e1]);
}

TEST_CASE("restriction families are compatible and glue back to their section") {
  Presheaf ball = ball_sheaf({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, {0}, 2);
  REQUIRE(sheaf_check(ball).sheaf);
  const Quantale& q = *ball.base;
  for (int u = 0; u < q.size(); ++u) {
    auto covers = enumerate_covers(q, u, 1 << 10);
    for (const auto& c : covers.covers) {
      auto mem = c.list();
      for (int s = 0; s < ball.stalk[u]; ++s) {
        std::vector<int> fam(mem.size());
        for (size_t i = 0; i < mem.size(); ++i) fam[i] = ball.res[u][mem[i]][s];
        auto gl = glue(ball, c, fam);  // throws if incompatible
        CHECK(std::count(gl.begin(), gl.end(), s) == 1);
      }
    }
  }
}

TEST_CASE("morphism validation and mono detection") {
  auto c3 = Q(chain_quantale(3));
  auto one = std::make_shared<const Presheaf>(terminal_presheaf(c3));
  auto r2 = std::make_shared<const Presheaf>(representable(c3, 2));

  Morphism inc{r2, one, {{}, {}, {0}, {0}}};
  CHECK(validate_morphism(inc));
  CHECK(is_mono(inc));

  auto ball = std::make_shared<const Presheaf>(ball_sheaf({{0, 2}, {2, 0}}, {0}, 3));
  auto onec = std::make_shared<const Presheaf>(terminal_presheaf(ball->base));
  Morphism collapse{ball, onec, {{0}, {0}, {0, 0}, {0}}};
  CHECK(validate_morphism(collapse));
  CHECK(!is_mono(collapse));

  // non-natural components are caught with a witness
  auto twoup = std::make_shared<const Presheaf>([&] {
    Presheaf f;
    f.base = ball->base;
    f.stalk = {2, 2, 2, 1};
    f.res.assign(4, std::vector<std::vector<int>>(4));
    for (int u = 0; u < 3; ++u)
      for (int v = u; v < 4; ++v) f.res[u][v] = v == 3 ? std::vector<int>{0, 0}
                                                       : std::vector<int>{0, 1};
    f.res[3][3] = {0};
    return f;
  }());
  REQUIRE(validate_presheaf(*twoup).empty());
  Morphism swap{twoup, twoup, {{1, 0}, {0, 1}, {0, 1}, {0}}};
  std::vector<int> w;
  CHECK(!validate_morphism(swap, &w));
  CHECK(w.size() == 3);
}

TEST_CASE("morphism enumeration matches hom counts for representables") {
  auto c3 = Q(chain_quantale(3));
  // Hom(Q(-,v), Q(-,w)) is a point when v <= w and empty otherwise.
  for (int v = 0; v < 4; ++v)
    for (int w = 0; w < 4; ++w) {
      auto fs = representable(c3, v);
      auto gs = representable(c3, w);
      auto en = enumerate_morphisms(fs, gs);
      REQUIRE(!en.truncated);
      CHECK(en.all.size() == (c3->leq(v, w) ? 1u : 0u));
    }
}
