#include "catch_amalgamated.hpp"
#include "twocat/corpus.hpp"

using namespace twocat;

namespace {

bool is_identity(const TwoFunctor& F) {
  for (std::size_t i = 0; i < F.obj.size(); ++i)
    if (F.obj[i] != int(i)) return false;
  for (std::size_t i = 0; i < F.mor.size(); ++i)
    if (F.mor[i] != int(i)) return false;
  for (std::size_t i = 0; i < F.cell.size(); ++i)
    if (F.cell[i] != int(i)) return false;
  return true;
}

UnaryCell identity_cell(const TwoSided& K) {
  return UnaryCell{{K}, K, identity_functor(K.A()), identity_functor(K.B()), identity_functor(K.apex()), make_apex({K})};
}

bool same_size(const Fin2Cat& X, const Fin2Cat& Y) {
  return X.n_obj() == Y.n_obj() && X.n_mor() == Y.n_mor() && X.n_cell() == Y.n_cell();
}

const std::vector<Cat> small{corpus::arrow(), corpus::C2()};

}  // namespace

TEST_CASE("identity cells") {
  for (auto& [n, C] : corpus::base_cats()) {
    INFO(n);
    UnaryCell c = identity_cell(unit(C).span);
    CHECK(check_unary_cell(c).ok());
    CHECK(oracle_unary_cell(c).ok());
  }
  for (auto& [n, mk] : corpus::commas()) {
    INFO(n);
    UnaryCell c = identity_cell(comma_twosided(mk()));
    CHECK(check_unary_cell(c).ok());
    CHECK(oracle_unary_cell(c).ok());
  }
}

TEST_CASE("units") {
  Unit one = unit(corpus::terminal());
  CHECK(one.span.apex()->n_obj() == 1);
  CHECK(one.span.apex()->n_mor() == 1);
  CHECK(one.span.apex()->n_cell() == 1);
  for (auto& [n, C] : corpus::base_cats()) {
    INFO(n);
    Unit U = unit(C);
    CHECK(check_twosided(U.span).ok());
    CHECK(is_locally_discrete(U.span).ld);
    CHECK(check_marked_lax(U.cart).ok());
  }
}

TEST_CASE("restriction") {
  for (const Cat& X : small) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs) {
        INFO(X->name);
        Restriction R = restriction(U.span, f, g);
        CHECK(check_twosided(R.span).ok());
        CHECK(check_unary_cell(R.cart).ok());
        CHECK(oracle_unary_cell(R.cart).ok());
        // restricting the unit gives the lax comma
        CHECK(same_size(*R.span.apex(), *lax_comma(f, g).apex()));
      }
    TwoFunctor id = identity_functor(X);
    Restriction R = restriction(U.span, id, id);
    CHECK(same_size(*R.span.apex(), *U.span.apex()));
    CHECK(check_cartesian(R.cart, {{U.span}}).ok());
  }
  // along a non-identity pair, probes from the unit path of the source
  Cat A = corpus::arrow();
  Unit U = unit(A);
  for (auto& f : all_functors(A, A)) {
    Restriction R = restriction(U.span, f, identity_functor(A));
    CHECK(check_cartesian(R.cart, {{U.span}}).ok());
  }
}

TEST_CASE("nullary and unary cells convert") {
  for (auto& [n, C] : corpus::base_cats()) {
    INFO(n);
    Unit U = unit(C);
    UnaryCell c = nullary_to_unary(U.cart);
    CHECK(check_unary_cell(c).ok());
    CHECK(is_identity(c.phi));
    CHECK(unary_to_nullary(identity_cell(U.span)).phi == U.cart.phi);
  }
  for (const Cat& X : small) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs)
        for (auto& c : enumerate_unary({U.span}, U.span, f, g, 1000)) {
          NullaryCell m = unary_to_nullary(c);
          CHECK(check_marked_lax(m).ok());
          CHECK(nullary_to_unary(m).phi == c.phi);
        }
  }
  // a target that is not a unit
  LaxComma L = corpus::commas()[0].second();
  CHECK_THROWS_AS(unary_to_nullary(identity_cell(comma_twosided(L))), StructuralError);
}

TEST_CASE("enumerated cells: direct check against the equivariance oracle") {
  std::size_t total = 0, valid = 0;
  for (const Cat& X : small) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs)
        for (auto& c : enumerate_unary({U.span}, U.span, f, g, 1000, false)) {
          bool a = check_unary_cell(c).ok();
          CHECK(a == oracle_unary_cell(c).ok());
          ++total;
          valid += a;
        }
  }
  CHECK(valid > 0);
  CHECK(valid < total);
}

TEST_CASE("composition of cells") {
  for (const Cat& X : small) {
    INFO(X->name);
    Unit U = unit(X);
    UnaryCell id = identity_cell(U.span);
    auto fs = all_functors(X, X);
    std::vector<UnaryCell> cells;
    for (auto& f : fs)
      for (auto& g : fs)
        for (auto& c : enumerate_unary({U.span}, U.span, f, g, 1000)) cells.push_back(c);
    REQUIRE(cells.size() > 1);
    for (auto& c : cells) {
      // identity on either side
      CHECK(compose_cells(id, {Piece{c, {}}}).phi == c.phi);
      CHECK(compose_cells(c, {Piece{id, {}}}).phi == c.phi);
    }
    // vertical composites are cells over the composite boundaries
    for (auto& a : cells)
      for (auto& b : cells) {
        UnaryCell ab = compose_cells(b, {Piece{a, {}}});
        CHECK(ab.f == compose(b.f, a.f));
        CHECK(ab.g == compose(b.g, a.g));
        CHECK(check_unary_cell(ab).ok());
        CHECK(oracle_unary_cell(ab).ok());
      }
    // a nullary piece at either end of the source
    for (bool first : {true, false}) {
      std::vector<Piece> ps{Piece{id, {}}};
      ps.insert(first ? ps.begin() : ps.end(), Piece{{}, U.cart});
      UnaryCell c = compose_cells(id, ps);
      CHECK(c.path.size() == 2);
      CHECK(check_unary_cell(c).ok());
      CHECK(oracle_unary_cell(c).ok());
    }
  }
}

TEST_CASE("the unit cell is a left Kan cell") {
  for (const Cat& X : small) {
    INFO(X->name);
    Unit U = unit(X);
    auto prs = kan_probes(U.cart, all_functors(X, X), 20);
    CHECK(prs.size() > 0);
    CHECK(check_left_kan(U.cart, prs).ok());
  }
}

TEST_CASE("(0,1)-ary cells into the unit are 2-natural transformations") {
  std::size_t caught = 0;  // arrow has only strict transformations; C2 supplies these
  for (const Cat& X : small) {
    Unit U = unit(X);
    const TwoSided& K = U.span;
    TwoFunctor id = identity_functor(X);
    CHECK(check_01_cell(U.arrow.unit, K, id, id).ok());
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs) {
        INFO(X->name);
        FunctorFilters flt;
        flt.obj = [&](int x, int y) { return K.p.obj[y] == f.obj[x] && K.q.obj[y] == g.obj[x]; };
        flt.mor = [&](int x, int y) { return K.p.mor[y] == f.mor[x] && K.q.mor[y] == g.mor[x]; };
        flt.cell = [&](int x, int y) { return K.p.cell[y] == f.cell[x] && K.q.cell[y] == g.cell[x]; };
        std::size_t maps = 0, valid = 0;
        enumerate_functors(X, K.apex(), flt, [&](const TwoFunctor& F) {
          Report r = check_01_cell(F, K, f, g);
          ++maps;
          valid += r.ok();
          if (!r.ok()) {
            CHECK(r.has("cm"));
            ++caught;
          }
          return true;
        });
        // independent count: lax transformations f => g and the strict ones
        std::size_t lax = 0, strict = 0;
        for (auto& t : all_lax(f, g)) {
          ++lax;
          bool all_id = true;
          for (int m = 0; m < X->n_mor(); ++m) all_id &= X->is_id_cell(t.nat[m]);
          strict += all_id;
        }
        CHECK(maps == lax);
        CHECK(valid == strict);
      }
  }
  CHECK(caught > 0);
  // unit insertion on pair
  Unit P = unit(corpus::pair());
  TwoFunctor id = identity_functor(corpus::pair());
  CHECK(check_01_cell(P.arrow.unit, P.span, id, id).ok());
  // wrong boundary
  CHECK(check_01_cell(P.arrow.unit, P.span, id, all_functors(corpus::pair(), corpus::pair())[0]).has("structural.boundary"));
}

TEST_CASE("marked lax transformations on a unit path match unary cells") {
  std::size_t unmarked = 0;
  for (const Cat& X : small) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs) {
        INFO(X->name);
        NullaryCell c{{U.span}, f, g, {}, U.cart.P};
        std::size_t marked = 0;
        enumerate_lax(left_boundary(c.path, *c.P, f), right_boundary(c.path, *c.P, g), {}, [&](const LaxTrans& t) {
          c.phi = t;
          Report r = check_marked_lax(c);
          if (r.ok()) {
            ++marked;
            CHECK(check_unary_cell(nullary_to_unary(c)).ok());
          } else {
            CHECK((r.has("cm") || r.has("om") || r.has("poc") || r.has("pcc")));
            ++unmarked;
          }
          return true;
        });
        CHECK(marked == enumerate_unary({U.span}, U.span, f, g, 100000).size());
      }
  }
  CHECK(unmarked > 0);
}

TEST_CASE("composition of cells is associative") {
  for (const Cat& X : small) {
    INFO(X->name);
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    std::vector<UnaryCell> cells;
    for (auto& f : fs)
      for (auto& g : fs)
        for (auto& c : enumerate_unary({U.span}, U.span, f, g, 1000)) cells.push_back(c);
    std::size_t n = 0;
    for (auto& a : cells)
      for (auto& b : cells)
        for (auto& c : cells) {
          UnaryCell l = compose_cells(c, {Piece{compose_cells(b, {Piece{a, {}}}), {}}});
          UnaryCell r = compose_cells(compose_cells(c, {Piece{b, {}}}), {Piece{a, {}}});
          CHECK(l.phi == r.phi);
          ++n;
        }
    CHECK(n > 0);
  }
}

TEST_CASE("restricting the unit gives the lax comma, cleavages included") {
  for (const Cat& X : small) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs) {
        INFO(X->name);
        Restriction R = restriction(U.span, f, g);
        LaxComma L = lax_comma(f, g);
        TwoSided T = comma_twosided(L);
        TwoFunctor mid = map_into(U.arrow.comma, compose(f, L.pA), compose(g, L.pB), L.pi);
        TwoFunctor iso = pair_into(R.apex, {L.pA, mid, L.pB});
        REQUIRE(is_iso(iso));
        CHECK(compose(R.span.p, iso) == T.p);
        CHECK(compose(R.span.q, iso) == T.q);
        for (auto& [k, m] : sorted_entries(T.rho_mor)) CHECK(lookup(R.span.rho_mor, iso.obj[key_hi(k)], key_lo(k)) == iso.mor[m]);
        for (auto& [k, m] : sorted_entries(T.lam_mor)) CHECK(lookup(R.span.lam_mor, iso.obj[key_hi(k)], key_lo(k)) == iso.mor[m]);
        for (auto& [k, c] : sorted_entries(T.rho_cell)) CHECK(lookup(R.span.rho_cell, key_hi(k), iso.mor[key_lo(k)]) == iso.cell[c]);
        for (auto& [k, c] : sorted_entries(T.lam_cell)) CHECK(lookup(R.span.lam_cell, key_hi(k), iso.mor[key_lo(k)]) == iso.cell[c]);
      }
  }
}
