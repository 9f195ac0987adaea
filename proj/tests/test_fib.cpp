#include <random>

#include "catch_amalgamated.hpp"
#include "twocat/corpus.hpp"
#include "twocat/mutate.hpp"

using namespace twocat;

namespace {

std::vector<std::pair<std::string, TwoSided>> spans() {
  std::vector<std::pair<std::string, TwoSided>> out;
  for (auto& [n, C] : corpus::base_cats()) out.push_back({"unit_" + n, unit_twosided(lax_arrow(C))});
  for (auto& [n, mk] : corpus::commas()) out.push_back({n, comma_twosided(mk(), n)});
  return out;
}

TwoFunctor to_terminal(const Cat& X) { return all_functors(X, corpus::terminal())[0]; }

}  // namespace

TEST_CASE("corpus cleavages are split op-2-fibrations") {
  for (auto& [n, t] : spans()) {
    INFO(n);
    CHECK(check_split_opfib(t.right()).ok());
    CHECK(check_split_cofib(t).ok());
    CHECK(check_twosided(t).ok());
  }
  for (auto& n : {"opfib_unit_C2", "opfib_unit_pair"}) {
    INFO(n);
    Value v = *corpus::lookup(n);
    CHECK(check_split_opfib(v.clv).ok());
  }
}

TEST_CASE("retargeting one morphism lift breaks the split or opcartesian conditions") {
  TwoSided t = unit_twosided(lax_arrow(corpus::C2()));
  const Fin2Cat& J = *t.apex();
  const Fin2Cat& B = *t.B();
  std::size_t tried = 0;
  for (auto& [k, l] : sorted_entries(t.rho_mor)) {
    int i = key_hi(k), u = key_lo(k);
    for (int m : J.out(i)) {
      if (m == l || t.q.mor[m] != u) continue;
      Cleavage c = t.right();
      c.mor[k] = m;
      Report r = check_split_opfib(c);
      INFO(J.obj[i] << " " << B.mor[u] << " -> " << J.mor[m]);
      CHECK_FALSE(r.ok());
      CHECK((r.has_prefix("sm.") || r.has("om1") || r.has("om2")));
      CHECK(oracle_opfib(make_action_context(c.q), c).ok() == r.ok());
      ++tried;
    }
  }
  CHECK(tried > 0);
}

TEST_CASE("cleavage and action round trip") {
  for (auto& [n, t] : spans()) {
    INFO(n);
    for (const Cleavage& c : {t.right(), t.left_coop()}) {
      ActionContext cx = make_action_context(c.q);
      ActionResult a = cleavage_to_action(cx, c);
      REQUIRE(a.act);
      CHECK(a.report.ok());
      CHECK(action_to_cleavage(cx, *a.act) == c);
    }
  }
}

TEST_CASE("direct check agrees with the action oracle on mutants") {
  std::mt19937_64 rng(11);
  std::size_t n = 0;
  for (auto& [name, t] : spans()) {
    if (t.apex()->n_mor() > 60) continue;
    for (int i = 0; i < 15; ++i) {
      TwoSided m = t;
      try {
        mutate_twosided(m, rng, false);
      } catch (const StructuralError&) {
        break;
      }
      Cleavage c = m.right();
      INFO(name << " " << i);
      CHECK(check_split_opfib(c).ok() == oracle_opfib(make_action_context(c.q), c).ok());
      ++n;
    }
  }
  CHECK(n > 30);
}

TEST_CASE("cleavages of locally discrete spans are recovered from the legs") {
  for (auto& [n, t] : spans()) {
    INFO(n);
    Derived d = derive_cleavage_discrete(t.p, t.q);
    REQUIRE(d.t);
    CHECK(*d.t == t);
  }
  // 1 <- 1 -> 1
  Cat T = corpus::terminal();
  TwoFunctor id = identity_functor(T);
  Derived d = derive_cleavage_discrete(id, id);
  REQUIRE(d.t);
  CHECK(d.t->rho_mor.size() == 1);
  CHECK(d.t->lam_mor.size() == 1);
  CHECK(d.t->rho_cell.size() == 1);
  CHECK(d.t->lam_cell.size() == 1);
  CHECK(check_twosided(*d.t).ok());

  // arrow <- 1 -> 1 picking 1: the arrow 0 -> 1 has no lift
  Derived bad = derive_cleavage_discrete(corpus::point(corpus::arrow(), "1"), id);
  CHECK_FALSE(bad.t);
  CHECK(bad.report.has("derive.lam_mor"));
}

TEST_CASE("local discreteness") {
  for (auto& [n, t] : spans()) {
    INFO(n);
    LocalDiscreteness ld = is_locally_discrete(t);
    CHECK(ld.jr);
    CHECK(ld.ld);
  }
  TwoSided nonld = corpus::not_locally_discrete();
  CHECK(check_twosided(nonld).ok());
  LocalDiscreteness ld = is_locally_discrete(nonld);
  CHECK_FALSE(ld.jr);
  REQUIRE(ld.jr_report.findings.size() == 1);
  CHECK(ld.jr_report.findings[0].witnesses == std::vector<std::string>{"g"});
  CHECK_FALSE(ld.ld);
}

TEST_CASE("fibres of the unit are hom categories") {
  for (auto& [n, C] : corpus::base_cats()) {
    TwoSided t = unit_twosided(lax_arrow(C));
    for (int a = 0; a < C->n_obj(); ++a)
      for (int b = 0; b < C->n_obj(); ++b) {
        INFO(n << " " << C->obj[a] << " " << C->obj[b]);
        Fin2Cat F = fibre(t, a, b);
        CHECK(validate_2cat(F).ok());
        CHECK(std::size_t(F.n_obj()) == C->hom(a, b).size());
        CHECK(std::size_t(F.n_mor()) == C->cells_in_hom(a, b).size());
        CHECK(F.n_cell() == F.n_mor());
      }
  }
  TwoSided nonld = corpus::not_locally_discrete();
  CHECK(fibre(nonld, 0, 0).same_tables(*corpus::C2()));
}

TEST_CASE("morphisms of op-fibrations") {
  TwoSided t = unit_twosided(lax_arrow(corpus::C2()));
  Cleavage c = t.right();
  TwoFunctor id = identity_functor(t.apex()), g = identity_functor(t.B());
  CHECK(check_opfib_morphism(c, c, id, g).ok());

  // another cleavage differing in one non-identity entry
  const Fin2Cat& J = *t.apex();
  bool found = false;
  for (auto& [k, l] : sorted_entries(c.mor)) {
    if (J.is_id_mor(l)) continue;
    for (int m : J.out(key_hi(k)))
      if (m != l && t.q.mor[m] == key_lo(k)) {
        Cleavage other = c;
        other.mor[k] = m;
        Report r = check_opfib_morphism(c, other, id, g);
        CHECK(r.has("morphism.lift"));
        found = true;
        break;
      }
    if (found) break;
  }
  CHECK(found);

  // the square must commute
  TwoFunctor off = identity_functor(t.B());
  auto ends = all_functors(t.B(), t.B());
  for (auto& e : ends)
    if (!(e == off)) {
      CHECK(check_opfib_morphism(c, c, id, e).has("morphism.square"));
      break;
    }
  // to the terminal opfibration
  TwoFunctor q1 = to_terminal(t.B());
  Cleavage triv{identity_functor(corpus::terminal()), {}, {}};
  triv.mor[key2(0, 0)] = 0;
  triv.cell[key2(0, 0)] = 0;
  CHECK(check_opfib_morphism(c, triv, compose(q1, t.q), q1).ok());
}

TEST_CASE("the two local discreteness criteria agree on the corpus") {
  std::size_t n = 0;
  for (auto& e : corpus::entries()) {
    Value v = e.make();
    if (v.kind != Kind::two_sided || !check_twosided(v.ts).ok()) continue;
    INFO(e.name);
    LocalDiscreteness ld = is_locally_discrete(v.ts);
    CHECK(ld.jr == ld.ld);
    ++n;
  }
  CHECK(n >= 10);
}
