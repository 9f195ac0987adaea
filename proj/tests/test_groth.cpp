#include "catch_amalgamated.hpp"
#include "twocat/corpus.hpp"

using namespace twocat;

namespace {

bool same_size(const Fin2Cat& X, const Fin2Cat& Y) {
  return X.n_obj() == Y.n_obj() && X.n_mor() == Y.n_mor() && X.n_cell() == Y.n_cell();
}

// 1 <- X -> 1 with identity lifts, for a locally discrete X
TwoSided over_point(const Cat& X) {
  TwoSided t = corpus::not_locally_discrete();
  TwoFunctor bang = all_functors(X, corpus::terminal())[0];
  t.name = "point_" + X->name;
  t.p = t.q = bang;
  t.lam_mor.clear();
  t.rho_mor.clear();
  t.lam_cell.clear();
  t.rho_cell.clear();
  for (int x = 0; x < X->n_obj(); ++x) t.lam_mor[key2(x, 0)] = t.rho_mor[key2(x, 0)] = X->idm[x];
  for (int m = 0; m < X->n_mor(); ++m) t.lam_cell[key2(0, m)] = t.rho_cell[key2(0, m)] = X->idc[m];
  return t;
}

}  // namespace

TEST_CASE("corpus indexed categories are valid") {
  for (auto& F : corpus::indexed()) {
    INFO(F.name);
    CHECK(validate_indexed(F).ok());
  }
  IndexedCat bad = corpus::two_elt();
  bad.vshriek[0][0].obj[bad.at(0, 0).find_obj("x")] = bad.at(0, 1).find_obj("q");
  CHECK_FALSE(validate_indexed(bad).ok());
}

TEST_CASE("elements: chosen lifts") {
  for (auto& F : corpus::indexed()) {
    INFO(F.name);
    Elements E = elements(F);
    const Fin2Cat &A = *F.A, &B = *F.B;
    CHECK(check_twosided(E.span).ok());
    CHECK(is_locally_discrete(E.span).ld);
    for (auto& [key, m] : sorted_entries(E.span.lam_mor)) {
      int x = key_hi(key), u = key_lo(key);
      auto& k = E.b.mkey[m];
      int b = E.b.okey[x][2];
      CHECK(k[0] == u);
      CHECK(k[4] == B.idm[b]);
      CHECK(F.at(A.msrc[u], b).is_id_mor(k[2]));
      CHECK(E.span.apex()->mtgt[m] == x);
    }
    for (auto& [key, m] : sorted_entries(E.span.rho_mor)) {
      int x = key_hi(key), v = key_lo(key);
      auto& k = E.b.mkey[m];
      int a = E.b.okey[x][0];
      CHECK(k[0] == A.idm[a]);
      CHECK(k[4] == v);
      CHECK(F.at(a, B.mtgt[v]).is_id_mor(k[2]));
    }
  }
}

TEST_CASE("elements of known indexed categories") {
  // constant at the terminal category: the span is B itself
  Elements C = elements(corpus::const_terminal());
  CHECK(same_size(*C.span.apex(), *corpus::C2()));
  CHECK(is_iso(C.span.q));
  // representable y(1): the lax comma id / 1
  Elements R = elements(corpus::repr());
  LaxComma L = lax_comma(identity_functor(corpus::C2()), corpus::point(corpus::C2(), "1"));
  CHECK(same_size(*R.span.apex(), *L.apex()));
  CHECK(derive_cleavage_discrete(R.span.p, R.span.q).t.has_value());
}

TEST_CASE("inverse construction") {
  for (auto& [n, X] : corpus::base_cats()) {
    INFO(n);
    InvGroth G = inverse_grothendieck(unit_twosided(lax_arrow(X)));
    CHECK(validate_indexed(G.F).ok());
    for (int a = 0; a < X->n_obj(); ++a)
      for (int b = 0; b < X->n_obj(); ++b) {
        CHECK(std::size_t(G.F.at(a, b).n_obj()) == X->hom(a, b).size());
        CHECK(std::size_t(G.F.at(a, b).n_mor()) == X->cells_in_hom(a, b).size());
      }
  }
  for (const Cat& X : {corpus::arrow(), corpus::walking_xy()}) {
    InvGroth G = inverse_grothendieck(over_point(X));
    CHECK(G.F.at(0, 0).same_tables(*X));
  }
  CHECK_THROWS_AS(inverse_grothendieck(corpus::not_locally_discrete()), StructuralError);
}

TEST_CASE("round trips") {
  for (auto& [n, X] : corpus::base_cats()) {
    INFO(n);
    CHECK(roundtrip_iso(unit_twosided(lax_arrow(X))).report.ok());
  }
  for (auto& [n, mk] : corpus::commas()) {
    INFO(n);
    CHECK(roundtrip_iso(comma_twosided(mk())).report.ok());
  }
  CHECK(roundtrip_iso(over_point(corpus::arrow())).report.ok());
  for (auto& F : corpus::indexed()) {
    INFO(F.name);
    CHECK(check_elements_roundtrip(F).ok());
    CHECK(roundtrip_iso(elements(F).span).report.ok());
  }
}

TEST_CASE("Yoneda") {
  for (auto& F : corpus::indexed()) {
    INFO(F.name);
    PshContext cx = make_psh_context(F.A, {F});
    const Fin2Cat& M = cx.psh.cat();
    CHECK(validate_2cat(M).ok());
    for (int a = 0; a < F.A->n_obj(); ++a)
      for (int X = 0; X < M.n_obj(); ++X) {
        CHECK(check_yoneda(cx, a, X).ok());
        // 2-naturals y a => X against the objects of X(a), modifications
        // against its morphisms
        const Fin2Cat& Xa = *cx.psh.objs[cx.psh.b.okey[X][0]].fib[a];
        CHECK(std::size_t(Xa.n_obj()) == M.hom(cx.yobj[a], X).size());
        std::size_t mods = 0;
        for (int m : M.hom(cx.yobj[a], X))
          for (int m2 : M.hom(cx.yobj[a], X)) mods += M.cells_between(m, m2).size();
        CHECK(std::size_t(Xa.n_mor()) == mods);
      }
    CHECK(validate_2functor(cx.y).ok());
    CHECK(validate_2functor(cx.g[0]).ok());
  }
}

TEST_CASE("the canonical cell of elements is marked and dense") {
  for (auto& F : corpus::indexed()) {
    INFO(F.name);
    Elements E = elements(F);
    PshContext cx = make_psh_context(F.A, {F});
    NullaryCell chi = elements_chi(E, cx, 0);
    CHECK(check_marked_lax(chi).ok());
    // chi against itself factors through the identity, uniquely
    KanResult kr = kan_factorize(chi.phi, E, cx, 0, {}, cx.g[0]);
    CHECK(kr.report.ok());
    CHECK(kr.phi == identity_lax(cx.g[0]));
    KanProbe self{{}, cx.g[0], chi.phi};
    CHECK(count_kan_factorizations(chi, self) == 1);
  }
  // the corpus probe over (E, I_B)
  IndexedCat F = corpus::dens();
  Elements E = elements(F);
  PshContext cx = make_psh_context(F.A, {F});
  NullaryCell pr = corpus::unit_probe(E, cx, 0);
  CHECK(check_marked_lax(pr).ok());
  KanResult kr = kan_factorize(pr.phi, E, cx, 0, {unit(F.B).span}, cx.g[0]);
  CHECK(kr.report.ok());
  NullaryCell chi = elements_chi(E, cx, 0);
  std::vector<LaxTrans> found;
  CHECK(count_kan_factorizations(chi, KanProbe{{unit(F.B).span}, cx.g[0], pr.phi}, &found) == 1);
  REQUIRE(found.size() == 1);
  CHECK(found[0] == kr.phi);
}

TEST_CASE("cells between elements correspond to marked transformations") {
  IndexedCat two = corpus::two_elt();
  CellBijection cb = make_cell_bijection(two, two);
  TwoFunctor idA = identity_functor(two.A);
  std::size_t n = 0;
  for (auto& s : all_functors(two.B, two.B))
    for (auto& c : enumerate_unary({cb.EJ.span}, cb.EK.span, idA, s, 1000)) {
      KanResult kr = cell_to_marked(cb, c, {}, s);
      REQUIRE(kr.report.ok());
      CHECK(marked_to_cell(cb, kr.phi, {}, s).phi == c.phi);
      ++n;
    }
  CHECK(n > 0);
}

TEST_CASE("fibres of elements are the fibres of the indexed category") {
  for (auto& F : corpus::indexed()) {
    Elements E = elements(F);
    for (int a = 0; a < F.A->n_obj(); ++a)
      for (int b = 0; b < F.B->n_obj(); ++b) {
        INFO(F.name << " " << a << " " << b);
        Fin2Cat X = fibre(E.span, a, b);
        const Fin2Cat& Y = F.at(a, b);
        CHECK(X.n_obj() == Y.n_obj());
        CHECK(X.n_mor() == Y.n_mor());
        CHECK(X.n_cell() == X.n_mor());
        CHECK(validate_2cat(X).ok());
      }
  }
}
