#pragma once

#include <functional>
#include <map>
#include <optional>

#include "groth.hpp"
#include "shapes.hpp"

namespace twocat {

// Builds an IndexedCat from named data. Unset transitions default to
// identities where the fibres (or functors) at both ends coincide.
class IndexedBuilder {
 public:
  IndexedBuilder(std::string name, Cat A, Cat B) {
    F_.name = std::move(name);
    F_.A = std::move(A);
    F_.B = std::move(B);
    const Fin2Cat &Ac = *F_.A, &Bc = *F_.B;
    F_.fib.assign(Ac.n_obj(), std::vector<Cat>(Bc.n_obj()));
    F_.ustar.assign(Ac.n_mor(), std::vector<Fn1>(Bc.n_obj()));
    F_.vshriek.assign(Bc.n_mor(), std::vector<Fn1>(Ac.n_obj()));
    F_.astar.assign(Ac.n_cell(), std::vector<std::vector<int>>(Bc.n_obj()));
    F_.bshriek.assign(Bc.n_cell(), std::vector<std::vector<int>>(Ac.n_obj()));
    uset_.assign(Ac.n_mor(), std::vector<bool>(Bc.n_obj(), false));
    vset_.assign(Bc.n_mor(), std::vector<bool>(Ac.n_obj(), false));
    aset_.assign(Ac.n_cell(), std::vector<bool>(Bc.n_obj(), false));
    bset_.assign(Bc.n_cell(), std::vector<bool>(Ac.n_obj(), false));
  }

  IndexedBuilder& fibre(const std::string& a, const std::string& b, Cat X) {
    F_.fib[oa(a)][ob(b)] = std::move(X);
    return *this;
  }
  IndexedBuilder& fibre_all(const Cat& X) {
    for (auto& row : F_.fib)
      for (auto& c : row) c = X;
    return *this;
  }
  // object and non-identity morphism images by id
  IndexedBuilder& ustar(const std::string& u, const std::string& b, const std::map<std::string, std::string>& objs,
                        const std::map<std::string, std::string>& mors = {}) {
    int ui = find(*F_.A, u, false), bi = ob(b);
    F_.ustar[ui][bi] = fn(F_.at(F_.A->mtgt[ui], bi), F_.at(F_.A->msrc[ui], bi), objs, mors);
    uset_[ui][bi] = true;
    return *this;
  }
  IndexedBuilder& vshriek(const std::string& v, const std::string& a, const std::map<std::string, std::string>& objs,
                          const std::map<std::string, std::string>& mors = {}) {
    int vi = find(*F_.B, v, false), ai = oa(a);
    F_.vshriek[vi][ai] = fn(F_.at(ai, F_.B->msrc[vi]), F_.at(ai, F_.B->mtgt[vi]), objs, mors);
    vset_[vi][ai] = true;
    return *this;
  }
  // components by source object id
  IndexedBuilder& astar(const std::string& al, const std::string& b, const std::map<std::string, std::string>& comps) {
    int ci = find(*F_.A, al, true), bi = ob(b);
    const Fin2Cat &X = F_.at(F_.A->ctgt_obj(ci), bi), &Y = F_.at(F_.A->csrc_obj(ci), bi);
    F_.astar[ci][bi] = comp_table(X, Y, comps);
    aset_[ci][bi] = true;
    return *this;
  }
  IndexedBuilder& bshriek(const std::string& be, const std::string& a, const std::map<std::string, std::string>& comps) {
    int ci = find(*F_.B, be, true), ai = oa(a);
    const Fin2Cat &X = F_.at(ai, F_.B->csrc_obj(ci)), &Y = F_.at(ai, F_.B->ctgt_obj(ci));
    F_.bshriek[ci][ai] = comp_table(X, Y, comps);
    bset_[ci][ai] = true;
    return *this;
  }

  IndexedCat build() {
    const Fin2Cat &A = *F_.A, &B = *F_.B;
    for (auto& row : F_.fib)
      for (auto& c : row)
        if (!c) throw StructuralError(F_.name + ": fibre left unset");
    for (int u = 0; u < A.n_mor(); ++u)
      for (int b = 0; b < B.n_obj(); ++b)
        if (!uset_[u][b]) {
          if (!A.is_id_mor(u) && F_.fib[A.msrc[u]][b] != F_.fib[A.mtgt[u]][b]) throw StructuralError(F_.name + ": u* left unset for " + A.mor[u]);
          F_.ustar[u][b] = detail::identity1(F_.at(A.msrc[u], b));
        }
    for (int v = 0; v < B.n_mor(); ++v)
      for (int a = 0; a < A.n_obj(); ++a)
        if (!vset_[v][a]) {
          if (!B.is_id_mor(v) && F_.fib[a][B.msrc[v]] != F_.fib[a][B.mtgt[v]]) throw StructuralError(F_.name + ": v_! left unset for " + B.mor[v]);
          F_.vshriek[v][a] = detail::identity1(F_.at(a, B.msrc[v]));
        }
    for (int c = 0; c < A.n_cell(); ++c)
      for (int b = 0; b < B.n_obj(); ++b)
        if (!aset_[c][b]) {
          if (!A.is_id_cell(c) && !(F_.ustar[A.csrc[c]][b] == F_.ustar[A.ctgt[c]][b])) throw StructuralError(F_.name + ": alpha* left unset for " + A.cell[c]);
          const Fin2Cat& Y = F_.at(A.csrc_obj(c), b);
          for (int i : F_.ustar[A.csrc[c]][b].obj) F_.astar[c][b].push_back(Y.idm[i]);
        }
    for (int c = 0; c < B.n_cell(); ++c)
      for (int a = 0; a < A.n_obj(); ++a)
        if (!bset_[c][a]) {
          if (!B.is_id_cell(c) && !(F_.vshriek[B.csrc[c]][a] == F_.vshriek[B.ctgt[c]][a])) throw StructuralError(F_.name + ": beta_! left unset for " + B.cell[c]);
          const Fin2Cat& Y = F_.at(a, B.ctgt_obj(c));
          for (int i : F_.vshriek[B.csrc[c]][a].obj) F_.bshriek[c][a].push_back(Y.idm[i]);
        }
    return F_;
  }

 private:
  IndexedCat F_;
  std::vector<std::vector<bool>> uset_, vset_, aset_, bset_;

  int oa(const std::string& s) const { return need(F_.A->find_obj(s), s); }
  int ob(const std::string& s) const { return need(F_.B->find_obj(s), s); }
  static int find(const Fin2Cat& C, const std::string& s, bool cell) { return need(cell ? C.find_cell(s) : C.find_mor(s), s); }
  static int need(int x, const std::string& s) {
    if (x < 0) throw StructuralError("unknown id " + s);
    return x;
  }
  static Fn1 fn(const Fin2Cat& X, const Fin2Cat& Y, const std::map<std::string, std::string>& objs,
                const std::map<std::string, std::string>& mors) {
    Fn1 f{std::vector<int>(X.n_obj(), -1), std::vector<int>(X.n_mor(), -1)};
    for (auto& [s, t] : objs) f.obj[need(X.find_obj(s), s)] = need(Y.find_obj(t), t);
    for (int i = 0; i < X.n_obj(); ++i)
      if (f.obj[i] < 0) throw StructuralError("functor leaves object " + X.obj[i] + " unmapped");
    for (auto& [s, t] : mors) f.mor[need(X.find_mor(s), s)] = need(Y.find_mor(t), t);
    for (int m = 0; m < X.n_mor(); ++m)
      if (f.mor[m] < 0) {
        if (X.is_id_mor(m)) f.mor[m] = Y.idm[f.obj[X.msrc[m]]];
        else {
          // a unique candidate between the images is taken as the image
          auto& h = Y.hom(f.obj[X.msrc[m]], f.obj[X.mtgt[m]]);
          if (h.size() != 1) throw StructuralError("functor leaves morphism " + X.mor[m] + " unmapped");
          f.mor[m] = h[0];
        }
      }
    return f;
  }
  static std::vector<int> comp_table(const Fin2Cat& X, const Fin2Cat& Y, const std::map<std::string, std::string>& comps) {
    std::vector<int> t(X.n_obj(), -1);
    for (auto& [s, m] : comps) t[need(X.find_obj(s), s)] = need(Y.find_mor(m), m);
    for (int i = 0; i < X.n_obj(); ++i)
      if (t[i] < 0) throw StructuralError("component at " + X.obj[i] + " unset");
    return t;
  }
};

// Representable y a as an indexed category over (A, terminal).
inline IndexedCat representable_indexed(const Cat& A, int a) {
  Psh P = representable(A, a);
  IndexedCat F{P.name, A, make_cat(terminal_cat()), {}, {}, {}, {}, {}};
  const Fin2Cat& Ac = *A;
  for (int x = 0; x < Ac.n_obj(); ++x) F.fib.push_back({P.fib[x]});
  for (int u = 0; u < Ac.n_mor(); ++u) F.ustar.push_back({P.ustar[u]});
  for (int c = 0; c < Ac.n_cell(); ++c) F.astar.push_back({P.astar[c]});
  F.vshriek.push_back({});
  F.bshriek.push_back({});
  for (int x = 0; x < Ac.n_obj(); ++x) {
    F.vshriek[0].push_back(detail::identity1(*P.fib[x]));
    F.bshriek[0].push_back(P.fib[x]->idm);
  }
  return F;
}

// ---------------------------------------------------------------------------
// Instance values and the builtin corpus

enum class Kind { two_cat, two_functor, lax_trans, span, cleavage, two_sided, indexed_cat, cell };

inline const std::vector<std::pair<Kind, std::string>>& kind_names() {
  static const std::vector<std::pair<Kind, std::string>> k{
      {Kind::two_cat, "two_cat"},     {Kind::two_functor, "two_functor"}, {Kind::lax_trans, "lax_trans"},
      {Kind::span, "span"},           {Kind::cleavage, "cleavage"},       {Kind::two_sided, "two_sided"},
      {Kind::indexed_cat, "indexed_cat"}, {Kind::cell, "cell"}};
  return k;
}

inline std::string kind_name(Kind k) {
  for (auto& [x, n] : kind_names())
    if (x == k) return n;
  return "?";
}

// One of the instance kinds; only the member matching kind is meaningful.
// A span is a two_sided value with empty cleavage tables.
struct Value {
  Kind kind = Kind::two_cat;
  Cat cat;
  TwoFunctor fun;
  LaxTrans lax;
  TwoSided ts;
  Cleavage clv;
  IndexedCat ic;
  std::optional<UnaryCell> unary;
  std::optional<NullaryCell> nullary;
};

inline Value of_cat(Cat c) { Value v; v.kind = Kind::two_cat; v.cat = std::move(c); return v; }
inline Value of_fun(TwoFunctor f) { Value v; v.kind = Kind::two_functor; v.fun = std::move(f); return v; }
inline Value of_lax(LaxTrans t) { Value v; v.kind = Kind::lax_trans; v.lax = std::move(t); return v; }
inline Value of_ts(TwoSided t, Kind k = Kind::two_sided) { Value v; v.kind = k; v.ts = std::move(t); return v; }
inline Value of_clv(Cleavage c) { Value v; v.kind = Kind::cleavage; v.clv = std::move(c); return v; }
inline Value of_ic(IndexedCat f) { Value v; v.kind = Kind::indexed_cat; v.ic = std::move(f); return v; }
inline Value of_cell(UnaryCell c) { Value v; v.kind = Kind::cell; v.unary = std::move(c); return v; }
inline Value of_cell(NullaryCell c) { Value v; v.kind = Kind::cell; v.nullary = std::move(c); return v; }

namespace corpus {

inline Cat terminal() { static Cat c = make_cat(terminal_cat()); return c; }
inline Cat arrow() { static Cat c = make_cat(arrow_cat()); return c; }
inline Cat C2() { static Cat c = make_cat(cell_cat()); return c; }
// composable pair 0 =u,v=> 1 =w,x=> 2 with cells g: u => v, d: w => x
inline Cat pair() {
  static Cat c = make_cat(posetal_2cat({"pair", {"0", "1", "2"},
                                        {{"u", "0", "1"}, {"v", "0", "1"}, {"w", "1", "2"}, {"x", "1", "2"}},
                                        {{{"u"}, {"v"}, "g"}, {{"w"}, {"x"}, "d"}}}));
  return c;
}
inline Cat walking_xy() { static Cat c = make_cat(posetal_2cat({"xy", {"x", "y"}, {{"s", "x", "y"}}, {}})); return c; }
inline Cat walking_pq() { static Cat c = make_cat(posetal_2cat({"pq", {"p", "q"}, {{"t", "p", "q"}}, {}})); return c; }

inline std::vector<std::pair<std::string, Cat>> base_cats() {
  return {{"terminal", terminal()}, {"arrow", arrow()}, {"C2", C2()}, {"pair", pair()}};
}

// the object x of C as a 2-functor terminal -> C
inline TwoFunctor point(const Cat& C, const std::string& x) {
  int o = C->find_obj(x);
  return TwoFunctor{terminal(), C, {o}, {C->idm[o]}, {C->idc[C->idm[o]]}};
}

inline IndexedCat const_terminal() { return IndexedBuilder("const", terminal(), C2()).fibre_all(terminal()).build(); }
inline IndexedCat repr() {
  IndexedCat F = representable_indexed(C2(), C2()->find_obj("1"));
  F.name = "repr";
  return F;
}
inline IndexedCat two_elt() {
  return IndexedBuilder("two_elt", terminal(), arrow())
      .fibre("*", "0", walking_xy())
      .fibre("*", "1", walking_pq())
      .vshriek("a", "*", {{"x", "p"}, {"y", "q"}}, {{"s", "t"}})
      .build();
}
inline IndexedCat dens() {
  return IndexedBuilder("dens", terminal(), arrow())
      .fibre("*", "0", terminal())
      .fibre("*", "1", walking_pq())
      .vshriek("a", "*", {{"*", "p"}})
      .build();
}
inline std::vector<IndexedCat> indexed() { return {const_terminal(), repr(), two_elt(), dens()}; }

// 1 <- C2 -> 1: a valid two-sided fibration that is not locally discrete
inline TwoSided not_locally_discrete() {
  TwoSided t;
  t.name = "nonld";
  const Fin2Cat& X = *C2();
  t.p = TwoFunctor{C2(), terminal(), std::vector<int>(X.n_obj(), 0), std::vector<int>(X.n_mor(), 0),
                   std::vector<int>(X.n_cell(), 0)};
  t.q = t.p;
  for (int x = 0; x < X.n_obj(); ++x) {
    t.lam_mor[key2(x, 0)] = X.idm[x];
    t.rho_mor[key2(x, 0)] = X.idm[x];
  }
  for (int m = 0; m < X.n_mor(); ++m) {
    t.lam_cell[key2(0, m)] = X.idc[m];
    t.rho_cell[key2(0, m)] = X.idc[m];
  }
  return t;
}

// The probe phi = chi then (g whiskered with delta) on apex(E ⧺ I_B); it
// factors through chi as the unit-shaped marked transformation.
inline NullaryCell unit_probe(const Elements& E, const PshContext& cx, int fam) {
  NullaryCell chi = elements_chi(E, cx, fam);
  Unit U = unit(E.F.B);
  std::vector<TwoSided> full{E.span, U.span};
  ApexPtr P = make_apex(full);
  LaxTrans a = whisker_right(chi.phi, P->proj[0]);
  LaxTrans d = whisker_right(whisker_left(cx.g[fam], U.arrow.delta()), P->proj[1]);
  d.F = a.G;
  return NullaryCell{full, cx.y, cx.g[fam], compose_lax(d, a), P};
}

// Lax commas of the corpus, by name.
inline std::vector<std::pair<std::string, std::function<LaxComma()>>> commas() {
  return {
      {"comma_C2_1", [] { return lax_comma(identity_functor(C2()), point(C2(), "1")); }},
      {"comma_0_arrow", [] { return lax_comma(point(arrow(), "0"), identity_functor(arrow())); }},
      {"comma_pair_2", [] { return lax_comma(identity_functor(pair()), point(pair(), "2")); }},
  };
}

struct Entry {
  std::string name;
  std::function<Value()> make;
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = [] {
    std::vector<Entry> v;
    for (auto& [n, c] : base_cats()) {
      Cat cc = c;
      v.push_back({n, [cc] { return of_cat(cc); }});
    }
    for (auto& [n, c] : base_cats()) {
      Cat cc = c;
      v.push_back({"arrow_" + n, [cc] { return of_cat(lax_arrow(cc).apex()); }});
      v.push_back({"unit_" + n, [cc, n = n] { return of_ts(unit_twosided(lax_arrow(cc), "unit_" + n)); }});
    }
    v.push_back({"opfib_unit_C2", [] { return of_clv(unit_twosided(lax_arrow(C2())).right()); }});
    v.push_back({"opfib_unit_pair", [] { return of_clv(unit_twosided(lax_arrow(pair())).right()); }});
    v.push_back({"point_C2_1", [] { return of_fun(point(C2(), "1")); }});
    v.push_back({"point_arrow_0", [] { return of_fun(point(arrow(), "0")); }});
    for (auto& [n, mk] : commas()) {
      auto m = mk;
      v.push_back({n, [m, n = n] { return of_ts(comma_twosided(m(), n)); }});
    }
    v.push_back({"span_comma_C2_1", [] {
                   TwoSided t = comma_twosided(lax_comma(identity_functor(C2()), point(C2(), "1")), "span_comma_C2_1");
                   t.lam_mor.clear();
                   t.lam_cell.clear();
                   t.rho_mor.clear();
                   t.rho_cell.clear();
                   return of_ts(t, Kind::span);
                 }});
    v.push_back({"delta_C2", [] { return of_lax(lax_arrow(C2()).delta()); }});
    v.push_back({"nonld", [] { return of_ts(not_locally_discrete()); }});
    for (auto mk : {const_terminal, repr, two_elt, dens}) {
      std::string n = mk().name;
      v.push_back({n, [mk] { return of_ic(mk()); }});
      v.push_back({"elements_" + n, [mk] {
                     Elements E = elements(mk());
                     E.span.name = "elements_" + E.F.name;
                     return of_ts(E.span);
                   }});
    }
    v.push_back({"cell_id_unit_C2", [] {
                   Unit U = unit(C2());
                   TwoFunctor id = identity_functor(C2());
                   return of_cell(UnaryCell{{U.span}, U.span, id, id, identity_functor(U.span.apex()), make_apex({U.span})});
                 }});
    v.push_back({"cell_delta_C2", [] { return of_cell(unit(C2()).cart); }});
    v.push_back({"cell_delta_arrow", [] { return of_cell(unit(arrow()).cart); }});
    v.push_back({"kan_probe_dens", [] {
                   IndexedCat F = dens();
                   Elements E = elements(F);
                   PshContext cx = make_psh_context(F.A, {F});
                   return of_cell(unit_probe(E, cx, 0));
                 }});
    return v;
  }();
  return e;
}

inline std::optional<Value> lookup(const std::string& name) {
  for (auto& e : entries())
    if (e.name == name) return e.make();
  return std::nullopt;
}

}  // namespace corpus

}  // namespace twocat
