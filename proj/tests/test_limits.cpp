#include <random>

#include "catch_amalgamated.hpp"
#include "twocat/corpus.hpp"
#include "twocat/mutate.hpp"

using namespace twocat;

namespace {

struct Counts {
  int obj = 0, mor = 0, cell = 0;
  bool operator==(const Counts&) const = default;
};

Counts counts(const Fin2Cat& C) { return {C.n_obj(), C.n_mor(), C.n_cell()}; }

// Size of id_C / id_C by direct enumeration, for locally posetal C where the
// pasting equation on cells holds whenever both sides are defined.
Counts arrow_counts_posetal(const Fin2Cat& C) {
  Counts n;
  n.obj = C.n_mor();
  struct M {
    int u0, u1, s, t;
  };
  std::vector<M> ms;
  for (int u0 = 0; u0 < C.n_mor(); ++u0)
    for (int u1 = 0; u1 < C.n_mor(); ++u1)
      for (int s : C.hom(C.msrc[u0], C.msrc[u1]))
        for (int t : C.hom(C.mtgt[u0], C.mtgt[u1]))
          if (!C.cells_between(C.comp(t, u0), C.comp(u1, s)).empty()) ms.push_back({u0, u1, s, t});
  n.mor = int(ms.size());
  for (auto& a : ms)
    for (auto& b : ms)
      if (a.u0 == b.u0 && a.u1 == b.u1) n.cell += int(C.cells_between(a.s, b.s).size() * C.cells_between(a.t, b.t).size());
  return n;
}

}  // namespace

TEST_CASE("pullback of identities is the diagonal") {
  for (auto& [n, C] : corpus::base_cats()) {
    TwoFunctor id = identity_functor(C);
    MultiPullback P = pullback(id, id);
    CHECK(validate_2cat(*P.apex()).ok());
    CHECK(counts(*P.apex()) == counts(*C));
    CHECK(is_iso(P.proj[0]));
    CHECK(P.proj[0] == P.proj[1]);
  }
}

TEST_CASE("pullback over the terminal 2-category is the product") {
  Cat T = corpus::terminal();
  for (auto& [nx, X] : corpus::base_cats())
    for (auto& [ny, Y] : corpus::base_cats()) {
      MultiPullback P = pullback(all_functors(X, T)[0], all_functors(Y, T)[0]);
      const Fin2Cat& Z = *P.apex();
      CHECK(validate_2cat(Z).ok());
      CHECK(Z.n_obj() == X->n_obj() * Y->n_obj());
      CHECK(Z.n_mor() == X->n_mor() * Y->n_mor());
      CHECK(Z.n_cell() == X->n_cell() * Y->n_cell());
    }
}

TEST_CASE("iterated pullback sizes match direct tuple counts") {
  for (const Cat& C : {corpus::arrow(), corpus::C2()}) {
    LaxArrow A = lax_arrow(C);
    const Fin2Cat& X = *A.apex();
    // X ×_C X ×_C X along tgt/src
    MultiPullback P = multi_pullback({A.apex(), A.apex(), A.apex()}, {A.tgt(), A.tgt()}, {A.src(), A.src()});
    int objs = 0, mors = 0, cells = 0;
    for (int x = 0; x < X.n_obj(); ++x)
      for (int y = 0; y < X.n_obj(); ++y)
        for (int z = 0; z < X.n_obj(); ++z)
          objs += A.tgt().obj[x] == A.src().obj[y] && A.tgt().obj[y] == A.src().obj[z];
    for (int x = 0; x < X.n_mor(); ++x)
      for (int y = 0; y < X.n_mor(); ++y)
        for (int z = 0; z < X.n_mor(); ++z)
          mors += A.tgt().mor[x] == A.src().mor[y] && A.tgt().mor[y] == A.src().mor[z];
    for (int x = 0; x < X.n_cell(); ++x)
      for (int y = 0; y < X.n_cell(); ++y)
        for (int z = 0; z < X.n_cell(); ++z)
          cells += A.tgt().cell[x] == A.src().cell[y] && A.tgt().cell[y] == A.src().cell[z];
    CHECK(P.apex()->n_obj() == objs);
    CHECK(P.apex()->n_mor() == mors);
    CHECK(P.apex()->n_cell() == cells);
    CHECK(validate_2cat(*P.apex()).ok());
  }
}

TEST_CASE("lax arrow 2-categories") {
  CHECK(counts(*lax_arrow(corpus::terminal()).apex()) == Counts{1, 1, 1});

  // walking arrow: the ordinary arrow category, 3 objects and 3 non-identity
  // morphisms
  LaxArrow LA = lax_arrow(corpus::arrow());
  const Fin2Cat& AA = *LA.apex();
  CHECK(AA.n_obj() == 3);
  int non_id = 0;
  for (int m = 0; m < AA.n_mor(); ++m) non_id += !AA.is_id_mor(m);
  CHECK(non_id == 3);

  CHECK(lax_arrow(corpus::C2()).apex()->n_obj() == 4);
  for (auto& [n, C] : corpus::base_cats()) {
    INFO(n);
    LaxArrow L = lax_arrow(C);
    CHECK(validate_2cat(*L.apex()).ok());
    CHECK(validate_lax(L.delta()).ok());
    CHECK(counts(*L.apex()) == arrow_counts_posetal(*C));
  }
  // frozen; C2 morphisms by hand (source -> target object): id0->id0 1,
  // id0->id1 3, id0->u 1, id0->v 2, id1->id1 1, u->u 1, u->v 1, v->v 1,
  // u->id1 2, v->id1 1
  CHECK(counts(*lax_arrow(corpus::C2()).apex()) == Counts{4, 14, 19});
  CHECK(counts(*lax_arrow(corpus::pair()).apex()) == Counts{11, 108, 202});
}

TEST_CASE("lax comma sizes") {
  Cat T = corpus::terminal();
  TwoFunctor idT = identity_functor(T);
  CHECK(counts(*lax_comma(idT, idT).apex()) == Counts{1, 1, 1});
  // id_C2 / 1: objects are morphisms into 1
  LaxComma L = lax_comma(identity_functor(corpus::C2()), corpus::point(corpus::C2(), "1"));
  CHECK(L.apex()->n_obj() == 3);
  CHECK(validate_2cat(*L.apex()).ok());
  CHECK(validate_lax(L.pi).ok());
}

TEST_CASE("lax arrow as an internal category") {
  for (auto& [n, C] : corpus::base_cats()) {
    INFO(n);
    LaxArrow L = lax_arrow(C);
    const Fin2Cat& P = *L.pair.apex();
    CHECK(validate_2functor(L.unit).ok());
    CHECK(validate_2functor(L.mult).ok());
    // unit (a, id_a, a)
    for (int a = 0; a < C->n_obj(); ++a) CHECK(L.comma.b.okey[L.unit.obj[a]] == std::vector<int>{a, C->idm[a], a});
    // mult on objects: (a, u, b, v, c) -> (a, v∘u, c)
    for (int x = 0; x < P.n_obj(); ++x) {
      auto& k = L.pair.b.okey[x];
      int u = L.comma.ou(k[0]), v = L.comma.ou(k[1]);
      int r = L.mult.obj[x];
      CHECK(L.comma.ou(r) == C->comp(v, u));
      CHECK(L.src().obj[r] == L.src().obj[k[0]]);
      CHECK(L.tgt().obj[r] == L.tgt().obj[k[1]]);
    }
    // unit laws
    TwoFunctor id = identity_functor(L.apex());
    CHECK(compose(L.mult, pair_into(L.pair, {compose(L.unit, L.src()), id})) == id);
    CHECK(compose(L.mult, pair_into(L.pair, {id, compose(L.unit, L.tgt())})) == id);
    // associativity on composable triples
    MultiPullback T3 = multi_pullback({L.apex(), L.apex(), L.apex()}, {L.tgt(), L.tgt()}, {L.src(), L.src()});
    TwoFunctor left = pair_into(L.pair, {compose(L.mult, pair_into(L.pair, {T3.proj[0], T3.proj[1]})), T3.proj[2]});
    TwoFunctor right = pair_into(L.pair, {T3.proj[0], compose(L.mult, pair_into(L.pair, {T3.proj[1], T3.proj[2]}))});
    CHECK(compose(L.mult, left) == compose(L.mult, right));
  }
}

TEST_CASE("lax arrow legs jointly reflect identity cells and are jointly surjective") {
  for (auto& [n, C] : corpus::base_cats()) {
    LaxArrow L = lax_arrow(C);
    const Fin2Cat& X = *L.apex();
    for (int c = 0; c < X.n_cell(); ++c)
      if (C->is_id_cell(L.src().cell[c]) && C->is_id_cell(L.tgt().cell[c])) CHECK(X.is_id_cell(c));
    for (int a = 0; a < C->n_obj(); ++a)
      for (int b = 0; b < C->n_obj(); ++b) {
        bool hit = false;
        for (int x = 0; x < X.n_obj(); ++x) hit |= L.src().obj[x] == a && L.tgt().obj[x] == b;
        CHECK(hit == !C->hom(a, b).empty());
      }
  }
}

TEST_CASE("comma cells are 1-universal") {
  for (auto& [n, mk] : corpus::commas()) {
    INFO(n);
    LaxComma L = mk();
    CommaCell cc = as_cell(L);
    CHECK(check_comma_1univ(cc).ok());
    // the comma cell itself factors through the identity, uniquely
    CHECK(count_comma_factorizations(cc, Probe{cc.pA, cc.pB, cc.pi}) == 1);
    // probes from 1 correspond to objects of the comma
    auto pts = comma_probes(L.f, L.g, {corpus::terminal()}, SIZE_MAX);
    CHECK(int(pts.size()) == L.apex()->n_obj());
    for (auto& p : pts) CHECK(count_comma_factorizations(cc, p) == 1);
  }
}

TEST_CASE("corrupted comma apex data is caught") {
  std::mt19937_64 rng(5);
  for (auto& [n, mk] : corpus::commas()) {
    CommaCell cc = as_cell(mk());
    for (int i = 0; i < 20; ++i) {
      CommaCell m = cc;
      Mutation mu = mutate_comma(m, rng);
      INFO(n << " " << mu.where);
      CHECK_FALSE(check_comma_1univ(m).ok());
    }
  }
}

TEST_CASE("size cap refuses large constructions") {
  std::size_t saved = settings().size_cap;
  settings().size_cap = 50;
  CHECK_THROWS_AS(lax_arrow(corpus::pair()), CapError);
  settings().size_cap = saved;
  CHECK_NOTHROW(lax_arrow(corpus::pair()));
}

TEST_CASE("lax comma is the pullback through the arrow 2-category") {
  std::vector<LaxComma> cs;
  for (auto& [n, mk] : corpus::commas()) cs.push_back(mk());
  for (auto& [n, C] : corpus::base_cats()) cs.push_back(lax_comma(identity_functor(C), identity_functor(C)));
  for (auto& L : cs) {
    INFO(L.apex()->name);
    LaxArrow CC = lax_arrow(L.f.tgt);
    MultiPullback P = multi_pullback({L.f.src, CC.apex(), L.g.src}, {L.f, CC.tgt()}, {CC.src(), L.g});
    TwoFunctor mid = map_into(CC.comma, compose(L.f, L.pA), compose(L.g, L.pB), L.pi);
    TwoFunctor iso = pair_into(P, {L.pA, mid, L.pB});
    CHECK(validate_2functor(iso).ok());
    CHECK(is_iso(iso));
    CHECK(compose(P.proj[0], iso) == L.pA);
    CHECK(compose(P.proj[2], iso) == L.pB);
  }
}
