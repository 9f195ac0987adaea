#include <random>

#include "catch_amalgamated.hpp"
#include "twocat/corpus.hpp"
#include "twocat/mutate.hpp"

using namespace twocat;

namespace {

std::vector<Cat> base() {
  std::vector<Cat> out;
  for (auto& [n, c] : corpus::base_cats()) out.push_back(c);
  return out;
}

// Brute-force interchange on all composable quadruples, independent of the
// checker's whisker decomposition.
bool interchange_holds(const Fin2Cat& C) {
  for (int a = 0; a < C.n_cell(); ++a)
    for (int b = 0; b < C.n_cell(); ++b) {
      int ab = C.vcomp(a, b);
      if (ab < 0) continue;
      for (int c = 0; c < C.n_cell(); ++c)
        for (int d = 0; d < C.n_cell(); ++d) {
          int cd = C.vcomp(c, d);
          if (cd < 0 || C.csrc_obj(c) != C.ctgt_obj(a)) continue;
          if (C.hcomp(cd, ab) != C.vcomp(C.hcomp(c, a), C.hcomp(d, b))) return false;
        }
    }
  return true;
}

}  // namespace

TEST_CASE("corpus 2-categories are valid") {
  for (const Cat& C : base()) {
    INFO(C->name);
    CHECK(validate_2cat(*C).ok());
    CHECK(interchange_holds(*C));
  }
}

TEST_CASE("sizes of the corpus 2-categories") {
  // pair: paths 0->1 {u,v}, 1->2 {w,x}, 0->2 the four composites; cells are
  // the reflexive product order on each hom (3 + 3 + 9) plus 3 identities
  const Fin2Cat& P = *corpus::pair();
  CHECK(P.n_obj() == 3);
  CHECK(P.n_mor() == 11);
  CHECK(P.n_cell() == 18);
  CHECK(corpus::C2()->n_cell() == 5);
  CHECK(corpus::terminal()->n_cell() == 1);
}

TEST_CASE("structural errors are distinct from axiom failures") {
  Fin2CatBuilder B("dangling");
  B.object("a");
  CHECK_THROWS_AS(B.morphism("f", "a", "b"), StructuralError);
}

TEST_CASE("a corrupted hcomp entry on C2 breaks the unit law at that entry") {
  Fin2Cat C = *corpus::C2();
  int u = C.find_mor("u"), v = C.find_mor("v"), i0 = C.find_mor("id_0");
  C.hm[key2(u, i0)] = v;  // u∘id_0 := v
  C.reindex();
  Report r = validate_2cat(C);
  REQUIRE_FALSE(r.ok());
  std::vector<Finding> one_cat;
  for (auto& f : r.findings)
    if (f.code.rfind("hcomp_mor.", 0) == 0) one_cat.push_back(f);
  REQUIRE(one_cat.size() == 1);
  CHECK(one_cat[0].code == "hcomp_mor.unit");
  CHECK(one_cat[0].witnesses == std::vector<std::string>{"u"});
  for (auto& f : r.findings) {
    INFO(f.code);
    bool touches = false;
    for (auto& w : f.witnesses) touches |= w == "u" || w == "id_0" || w == "id_u" || w == "id_id_0" || w == "g";
    CHECK(touches);
  }
}

TEST_CASE("mutation soundness of validate_2cat") {
  std::mt19937_64 rng(3);
  for (const Cat& C : base()) {
    if (C->name == "terminal") continue;  // every slot has a single admissible value
    for (int i = 0; i < 60; ++i) {
      Fin2Cat m = *C;
      Mutation mu = mutate_cat(m, rng);
      INFO(C->name << " " << mu.where);
      bool invalid = false;
      try {
        invalid = !validate_2cat(m).ok();
      } catch (const StructuralError&) {
        invalid = true;
      }
      CHECK(invalid);
    }
  }
}

TEST_CASE("dualize") {
  for (const Cat& C : base())
    for (Variant v : {Variant::op, Variant::co, Variant::coop}) {
      INFO(C->name << " " << variant_name(v));
      Fin2Cat d = dualize(*C, v);
      CHECK(validate_2cat(d).ok());
      CHECK(dualize(d, v).same_tables(*C));
    }
  CHECK(dualize(*corpus::terminal(), Variant::op).same_tables(*corpus::terminal()));
  Fin2Cat co = dualize(*corpus::C2(), Variant::co);
  int g = co.find_cell("g");
  CHECK(co.mor[co.csrc[g]] == "v");
  CHECK(co.mor[co.ctgt[g]] == "u");
  // coop = op after co
  Fin2Cat both = dualize(dualize(*corpus::C2(), Variant::co), Variant::op);
  CHECK(both.same_tables(dualize(*corpus::C2(), Variant::coop)));
}

TEST_CASE("2-functors") {
  Cat C = corpus::C2(), T = corpus::terminal();
  CHECK(validate_2functor(identity_functor(C)).ok());
  auto to_t = all_functors(C, T);
  REQUIRE(to_t.size() == 1);
  CHECK(validate_2functor(to_t[0]).ok());

  // gamma -> id_u while v is sent to v: source/target mismatch
  TwoFunctor bad = identity_functor(C);
  bad.cell[C->find_cell("g")] = C->find_cell("id_u");
  Report r = validate_2functor(bad);
  CHECK_FALSE(r.ok());

  // counts by hand: arrow -> arrow picks (0,0), (1,1) or (0,1) with a
  CHECK(all_functors(corpus::arrow(), corpus::arrow()).size() == 3);
  // C2 -> C2: both objects to one point (2 ways), or 0,1 with (u,v) in
  // {(u,u), (v,v), (u,v)} since g must go to a cell u' => v'
  CHECK(all_functors(C, C).size() == 5);
}

TEST_CASE("lax transformations") {
  Cat C = corpus::C2(), T = corpus::terminal();
  TwoFunctor id = identity_functor(C);
  CHECK(validate_lax(identity_lax(id)).ok());

  LaxArrow AA = lax_arrow(C);
  const LaxTrans& d = AA.delta();
  CHECK(validate_lax(d).ok());
  CHECK_FALSE(is_strict(d));

  // C2 -> 1 data with a forged unit cell
  auto ts = all_functors(C, T);
  LaxTrans u = identity_lax(ts[0]);
  CHECK(validate_lax(u).ok());
  LaxTrans forged = identity_lax(id);
  forged.nat[C->idm[0]] = C->find_cell("g");  // not even the right boundary
  CHECK_FALSE(validate_lax(forged).ok());

  // every enumerated lax transformation is valid and strictness matches
  // the identity-cell characterization
  for (auto& F : all_functors(C, C))
    for (auto& G : all_functors(C, C))
      for (auto& t : all_lax(F, G)) {
        CHECK(validate_lax(t).ok());
        bool all_id = true;
        for (int m = 0; m < C->n_mor(); ++m) all_id &= C->is_id_cell(t.nat[m]);
        CHECK(is_strict(t) == all_id);
      }
}

TEST_CASE("identity is strict and costrict") {
  for (const Cat& C : base()) {
    LaxTrans i = identity_lax(identity_functor(C));
    CHECK(is_strict(i));
    CHECK(is_costrict(i));
  }
}

TEST_CASE("compose_lax and whiskering laws") {
  Cat C = corpus::C2();
  auto fs = all_functors(C, C);
  std::vector<LaxTrans> ts;
  for (auto& F : fs)
    for (auto& G : fs)
      for (auto& t : all_lax(F, G)) ts.push_back(t);
  REQUIRE(ts.size() > 10);
  for (auto& t : ts) {
    CHECK(compose_lax(identity_lax(t.G), t) == t);
    CHECK(compose_lax(t, identity_lax(t.F)) == t);
  }
  for (auto& h : fs)
    for (auto& f : fs) CHECK(whisker_left(h, identity_lax(f)) == identity_lax(compose(h, f)));
  // associativity and compatibility with whiskering on composable triples
  std::size_t triples = 0;
  for (auto& a : ts)
    for (auto& b : ts) {
      if (!(a.G == b.F)) continue;
      LaxTrans ab = compose_lax(b, a);
      CHECK(validate_lax(ab).ok());
      for (auto& h : fs) CHECK(whisker_left(h, ab) == compose_lax(whisker_left(h, b), whisker_left(h, a)));
      for (auto& e : fs) CHECK(whisker_right(ab, e) == compose_lax(whisker_right(b, e), whisker_right(a, e)));
      for (auto& c : ts) {
        if (!(b.G == c.F)) continue;
        CHECK(compose_lax(c, ab) == compose_lax(compose_lax(c, b), a));
        ++triples;
      }
    }
  CHECK(triples > 0);
}

TEST_CASE("strictness agrees with a bounded middle-four probe") {
  // psi: h => k on C2 is strict iff for every phi: f => g into C2 from a
  // probe shape, (psi g) after (h phi) equals (k phi) after (psi f)
  Cat C = corpus::C2();
  auto ends = all_functors(C, C);
  std::vector<LaxTrans> probes;
  for (const Cat& X : {corpus::terminal(), corpus::arrow(), corpus::C2()}) {
    auto fs = all_functors(X, C);
    for (auto& f : fs)
      for (auto& g : fs)
        for (auto& t : all_lax(f, g)) probes.push_back(t);
  }
  std::size_t strict = 0, lax = 0;
  for (auto& h : ends)
    for (auto& k : ends)
      for (auto& psi : all_lax(h, k)) {
        bool mf = true;
        for (auto& phi : probes) {
          LaxTrans lhs = compose_lax(whisker_right(psi, phi.G), whisker_left(h, phi));
          LaxTrans rhs = compose_lax(whisker_left(k, phi), whisker_right(psi, phi.F));
          if (!(lhs == rhs)) {
            mf = false;
            break;
          }
        }
        CHECK(is_strict(psi) == mf);
        (mf ? strict : lax)++;
      }
  CHECK(strict > 0);
  CHECK(lax > 0);
}
