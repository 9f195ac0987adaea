#pragma once

#include <map>

#include "construct.hpp"
#include "vdc.hpp"

namespace twocat {

// A 1-functor between locally discrete 2-categories, on objects and morphisms.
struct Fn1 {
  std::vector<int> obj, mor;
  bool operator==(const Fn1& o) const { return obj == o.obj && mor == o.mor; }
};

// Indexed category F: op A × B -> Cat, stored through its separated
// transitions u* = F(u, id), v_! = F(id, v), alpha* and beta_!.
struct IndexedCat {
  std::string name;
  Cat A, B;
  std::vector<std::vector<Cat>> fib;                   // [a][b]
  std::vector<std::vector<Fn1>> ustar;                 // [u][b]: fib[a1][b] -> fib[a0][b]
  std::vector<std::vector<Fn1>> vshriek;               // [v][a]: fib[a][b0] -> fib[a][b1]
  std::vector<std::vector<std::vector<int>>> astar;    // [alpha][b][i]: u0*i -> u1*i in fib[a0][b]
  std::vector<std::vector<std::vector<int>>> bshriek;  // [beta][a][i]: v0!i -> v1!i in fib[a][b1]

  const Fin2Cat& at(int a, int b) const { return *fib[a][b]; }
};

namespace detail {

inline bool is_1cat(const Fin2Cat& C) {
  for (int c = 0; c < C.n_cell(); ++c)
    if (!C.is_id_cell(c)) return false;
  return true;
}

inline Report check_fn1(const Fin2Cat& X, const Fin2Cat& Y, const Fn1& F, const std::string& loc) {
  Report r;
  if (int(F.obj.size()) != X.n_obj() || int(F.mor.size()) != X.n_mor()) {
    r.add("indexed.shape", loc, "functor table has the wrong length");
    return r;
  }
  for (int i : F.obj)
    if (!Y.ok_obj(i)) { r.add("indexed.shape", loc, "object image out of range"); return r; }
  for (int m : F.mor)
    if (!Y.ok_mor(m)) { r.add("indexed.shape", loc, "morphism image out of range"); return r; }
  for (int m = 0; m < X.n_mor(); ++m)
    if (Y.msrc[F.mor[m]] != F.obj[X.msrc[m]] || Y.mtgt[F.mor[m]] != F.obj[X.mtgt[m]])
      r.add("indexed.functor", loc, "morphism image has the wrong boundary", {X.mor[m]});
  for (int i = 0; i < X.n_obj(); ++i)
    if (F.mor[X.idm[i]] != Y.idm[F.obj[i]]) r.add("indexed.functor", loc, "identity not preserved", {X.obj[i]});
  for (auto& [k, gf] : sorted_entries(X.hm))
    if (F.mor[gf] != Y.comp(F.mor[key_hi(k)], F.mor[key_lo(k)]))
      r.add("indexed.functor", loc, "composite not preserved", {X.mor[key_hi(k)], X.mor[key_lo(k)]});
  return r;
}

// components: X objects -> Y morphisms, natural from F to G.
inline Report check_nat1(const Fin2Cat& X, const Fin2Cat& Y, const Fn1& F, const Fn1& G, const std::vector<int>& t,
                         const std::string& loc) {
  Report r;
  if (int(t.size()) != X.n_obj()) {
    r.add("indexed.shape", loc, "component table has the wrong length");
    return r;
  }
  for (int i = 0; i < X.n_obj(); ++i)
    if (!Y.ok_mor(t[i]) || Y.msrc[t[i]] != F.obj[i] || Y.mtgt[t[i]] != G.obj[i]) {
      r.add("indexed.natural", loc, "component has the wrong boundary", {X.obj[i]});
      return r;
    }
  for (int m = 0; m < X.n_mor(); ++m)
    if (Y.comp(G.mor[m], t[X.msrc[m]]) != Y.comp(t[X.mtgt[m]], F.mor[m]))
      r.add("indexed.natural", loc, "naturality square fails", {X.mor[m]});
  return r;
}

inline Fn1 compose1(const Fn1& G, const Fn1& F) {
  Fn1 H;
  for (int i : F.obj) H.obj.push_back(G.obj[i]);
  for (int m : F.mor) H.mor.push_back(G.mor[m]);
  return H;
}

inline Fn1 identity1(const Fin2Cat& X) {
  Fn1 F;
  for (int i = 0; i < X.n_obj(); ++i) F.obj.push_back(i);
  for (int m = 0; m < X.n_mor(); ++m) F.mor.push_back(m);
  return F;
}

}  // namespace detail

inline Report validate_indexed(const IndexedCat& F) {
  Report r;
  const Fin2Cat &A = *F.A, &B = *F.B;
  if (int(F.fib.size()) != A.n_obj() || int(F.ustar.size()) != A.n_mor() || int(F.vshriek.size()) != B.n_mor() ||
      int(F.astar.size()) != A.n_cell() || int(F.bshriek.size()) != B.n_cell()) {
    r.add("structural.shape", F.name, "table counts disagree with the index 2-categories");
    return r;
  }
  for (int a = 0; a < A.n_obj(); ++a) {
    if (int(F.fib[a].size()) != B.n_obj()) { r.add("structural.shape", F.name, "fibre row has the wrong length"); return r; }
    for (int b = 0; b < B.n_obj(); ++b) {
      std::string loc = "F(" + A.obj[a] + "," + B.obj[b] + ")";
      if (!F.fib[a][b]) { r.add("structural.shape", loc, "missing fibre"); return r; }
      Report vr = validate_2cat(*F.fib[a][b]);
      r.merge(vr, "indexed.fibre.");
      if (vr.ok() && !detail::is_1cat(*F.fib[a][b])) r.add("indexed.fibre", loc, "fibre has a non-identity cell");
    }
  }
  if (!r.ok()) return r;
  for (int u = 0; u < A.n_mor(); ++u) {
    if (int(F.ustar[u].size()) != B.n_obj()) { r.add("structural.shape", F.name, "u* row has the wrong length"); return r; }
    for (int b = 0; b < B.n_obj(); ++b)
      r.merge(detail::check_fn1(F.at(A.mtgt[u], b), F.at(A.msrc[u], b), F.ustar[u][b], A.mor[u] + "*@" + B.obj[b]));
  }
  for (int v = 0; v < B.n_mor(); ++v) {
    if (int(F.vshriek[v].size()) != A.n_obj()) { r.add("structural.shape", F.name, "v_! row has the wrong length"); return r; }
    for (int a = 0; a < A.n_obj(); ++a)
      r.merge(detail::check_fn1(F.at(a, B.msrc[v]), F.at(a, B.mtgt[v]), F.vshriek[v][a], B.mor[v] + "!@" + A.obj[a]));
  }
  if (!r.ok()) return r;
  // strict functoriality of the transitions
  for (int a = 0; a < A.n_obj(); ++a)
    for (int b = 0; b < B.n_obj(); ++b) {
      Fn1 id = detail::identity1(F.at(a, b));
      if (!(F.ustar[A.idm[a]][b] == id)) r.add("indexed.ustar.id", A.obj[a] + "," + B.obj[b], "identity does not act trivially");
      if (!(F.vshriek[B.idm[b]][a] == id)) r.add("indexed.vshriek.id", A.obj[a] + "," + B.obj[b], "identity does not act trivially");
    }
  for (auto& [k, w] : sorted_entries(A.hm))
    for (int b = 0; b < B.n_obj(); ++b)
      if (!(F.ustar[w][b] == detail::compose1(F.ustar[key_lo(k)][b], F.ustar[key_hi(k)][b])))
        r.add("indexed.ustar.comp", A.mor[w] + "@" + B.obj[b], "(u'∘u)* differs from u*∘u'*");
  for (auto& [k, w] : sorted_entries(B.hm))
    for (int a = 0; a < A.n_obj(); ++a)
      if (!(F.vshriek[w][a] == detail::compose1(F.vshriek[key_hi(k)][a], F.vshriek[key_lo(k)][a])))
        r.add("indexed.vshriek.comp", B.mor[w] + "@" + A.obj[a], "(v'∘v)_! differs from v'_!∘v_!");
  for (int u = 0; u < A.n_mor(); ++u)
    for (int v = 0; v < B.n_mor(); ++v) {
      int a0 = A.msrc[u], a1 = A.mtgt[u], b0 = B.msrc[v], b1 = B.mtgt[v];
      (void)a1;
      (void)b0;
      if (!(detail::compose1(F.vshriek[v][a0], F.ustar[u][b0]) == detail::compose1(F.ustar[u][b1], F.vshriek[v][a1])))
        r.add("indexed.commute", A.mor[u] + "," + B.mor[v], "v_!u* differs from u*v_!");
    }
  if (!r.ok()) return r;
  // transition natural transformations
  for (int al = 0; al < A.n_cell(); ++al) {
    int u0 = A.csrc[al], u1 = A.ctgt[al], a0 = A.msrc[u0], a1 = A.mtgt[u0];
    if (int(F.astar[al].size()) != B.n_obj()) { r.add("structural.shape", F.name, "alpha* row has the wrong length"); return r; }
    for (int b = 0; b < B.n_obj(); ++b)
      r.merge(detail::check_nat1(F.at(a1, b), F.at(a0, b), F.ustar[u0][b], F.ustar[u1][b], F.astar[al][b],
                                 A.cell[al] + "*@" + B.obj[b]));
  }
  for (int be = 0; be < B.n_cell(); ++be) {
    int v0 = B.csrc[be], v1 = B.ctgt[be], b0 = B.msrc[v0], b1 = B.mtgt[v0];
    if (int(F.bshriek[be].size()) != A.n_obj()) { r.add("structural.shape", F.name, "beta_! row has the wrong length"); return r; }
    for (int a = 0; a < A.n_obj(); ++a)
      r.merge(detail::check_nat1(F.at(a, b0), F.at(a, b1), F.vshriek[v0][a], F.vshriek[v1][a], F.bshriek[be][a],
                                 B.cell[be] + "!@" + A.obj[a]));
  }
  if (!r.ok()) return r;
  for (int u = 0; u < A.n_mor(); ++u)
    for (int b = 0; b < B.n_obj(); ++b) {
      const Fin2Cat& X = F.at(A.msrc[u], b);
      const auto& t = F.astar[A.idc[u]][b];
      for (int i = 0; i < int(t.size()); ++i)
        if (t[i] != X.idm[F.ustar[u][b].obj[i]]) r.add("indexed.astar.id", A.mor[u] + "@" + B.obj[b], "identity cell acts nontrivially");
    }
  for (int v = 0; v < B.n_mor(); ++v)
    for (int a = 0; a < A.n_obj(); ++a) {
      const Fin2Cat& X = F.at(a, B.mtgt[v]);
      const auto& t = F.bshriek[B.idc[v]][a];
      for (int i = 0; i < int(t.size()); ++i)
        if (t[i] != X.idm[F.vshriek[v][a].obj[i]]) r.add("indexed.bshriek.id", B.mor[v] + "@" + A.obj[a], "identity cell acts nontrivially");
    }
  for (auto& [k, w] : sorted_entries(A.vc)) {
    int x = key_hi(k), y = key_lo(k), a0 = A.csrc_obj(x);
    for (int b = 0; b < B.n_obj(); ++b) {
      const Fin2Cat& X = F.at(a0, b);
      for (int i = 0; i < int(F.astar[w][b].size()); ++i)
        if (F.astar[w][b][i] != X.comp(F.astar[y][b][i], F.astar[x][b][i]))
          r.add("indexed.astar.vcomp", A.cell[w] + "@" + B.obj[b], "vertical composite not preserved");
    }
  }
  for (auto& [k, w] : sorted_entries(B.vc)) {
    int x = key_hi(k), y = key_lo(k), b1 = B.ctgt_obj(x);
    for (int a = 0; a < A.n_obj(); ++a) {
      const Fin2Cat& X = F.at(a, b1);
      for (int i = 0; i < int(F.bshriek[w][a].size()); ++i)
        if (F.bshriek[w][a][i] != X.comp(F.bshriek[y][a][i], F.bshriek[x][a][i]))
          r.add("indexed.bshriek.vcomp", B.cell[w] + "@" + A.obj[a], "vertical composite not preserved");
    }
  }
  // (alpha'∘alpha)*_i = u1*(alpha'*_i) ∘ alpha*_{u0'* i}
  for (auto& [k, w] : sorted_entries(A.hc)) {
    int ap = key_hi(k), al = key_lo(k);
    int u0p = A.csrc[ap], u1 = A.ctgt[al], u0 = A.csrc[al];
    (void)u0;
    int a0 = A.csrc_obj(al);
    for (int b = 0; b < B.n_obj(); ++b) {
      const Fin2Cat& X = F.at(a0, b);
      for (int i = 0; i < int(F.astar[w][b].size()); ++i) {
        int want = X.comp(F.ustar[u1][b].mor[F.astar[ap][b][i]], F.astar[al][b][F.ustar[u0p][b].obj[i]]);
        if (F.astar[w][b][i] != want) r.add("indexed.astar.hcomp", A.cell[w] + "@" + B.obj[b], "horizontal composite not preserved");
      }
    }
  }
  // (beta'∘beta)_!_i = beta'_{v1! i} ∘ v0'_!(beta_i)
  for (auto& [k, w] : sorted_entries(B.hc)) {
    int bp = key_hi(k), be = key_lo(k);
    int v0p = B.csrc[bp], v1 = B.ctgt[be];
    int b2 = B.ctgt_obj(bp);
    for (int a = 0; a < A.n_obj(); ++a) {
      const Fin2Cat& X = F.at(a, b2);
      for (int i = 0; i < int(F.bshriek[w][a].size()); ++i) {
        int want = X.comp(F.bshriek[bp][a][F.vshriek[v1][a].obj[i]], F.vshriek[v0p][a].mor[F.bshriek[be][a][i]]);
        if (F.bshriek[w][a][i] != want) r.add("indexed.bshriek.hcomp", B.cell[w] + "@" + A.obj[a], "horizontal composite not preserved");
      }
    }
  }
  // alpha* commutes with v_!, beta_! commutes with u*
  for (int al = 0; al < A.n_cell(); ++al)
    for (int v = 0; v < B.n_mor(); ++v) {
      int a1 = A.ctgt_obj(al), a0 = A.csrc_obj(al), b0 = B.msrc[v], b1 = B.mtgt[v];
      for (int i = 0; i < F.at(a1, b0).n_obj(); ++i)
        if (F.vshriek[v][a0].mor[F.astar[al][b0][i]] != F.astar[al][b1][F.vshriek[v][a1].obj[i]])
          r.add("indexed.astar.stable", A.cell[al] + "," + B.mor[v], "alpha* does not commute with v_!", {F.at(a1, b0).obj[i]});
    }
  for (int be = 0; be < B.n_cell(); ++be)
    for (int u = 0; u < A.n_mor(); ++u) {
      int b0 = B.csrc_obj(be), b1 = B.ctgt_obj(be), a0 = A.msrc[u], a1 = A.mtgt[u];
      for (int i = 0; i < F.at(a1, b0).n_obj(); ++i)
        if (F.ustar[u][b1].mor[F.bshriek[be][a1][i]] != F.bshriek[be][a0][F.ustar[u][b0].obj[i]])
          r.add("indexed.bshriek.stable", B.cell[be] + "," + A.mor[u], "beta_! does not commute with u*", {F.at(a1, b0).obj[i]});
    }
  return r;
}

// ---------------------------------------------------------------------------
// 2-category of elements

struct Elements {
  IndexedCat F;
  TwoSided span;
  Built b;  // obj key {a,i,b}; mor key {u,i0,s,i1,v}; cell key {alpha,beta,i0,s0,s1,i1}
};

inline Elements elements(const IndexedCat& F) {
  const Fin2Cat &A = *F.A, &B = *F.B;
  RawBuild rb;
  rb.c.name = "el(" + F.name + ")";
  auto oname = [&](int a, int i, int b) { return "(" + A.obj[a] + "|" + F.at(a, b).obj[i] + "|" + B.obj[b] + ")"; };
  for (int a = 0; a < A.n_obj(); ++a)
    for (int b = 0; b < B.n_obj(); ++b)
      for (int i = 0; i < F.at(a, b).n_obj(); ++i) rb.add_obj(oname(a, i, b), {a, i, b});
  // morphisms grouped by endpoint pair for the cell pass
  std::map<std::pair<int, int>, std::vector<int>> par;
  for (int u = 0; u < A.n_mor(); ++u)
    for (int v = 0; v < B.n_mor(); ++v) {
      int a0 = A.msrc[u], a1 = A.mtgt[u], b0 = B.msrc[v], b1 = B.mtgt[v];
      const Fin2Cat& X = F.at(a0, b1);
      for (int i0 = 0; i0 < F.at(a0, b0).n_obj(); ++i0)
        for (int i1 = 0; i1 < F.at(a1, b1).n_obj(); ++i1) {
          int x = rb.obj({a0, i0, b0}), y = rb.obj({a1, i1, b1});
          for (int s : X.hom(F.vshriek[v][a0].obj[i0], F.ustar[u][b1].obj[i1])) {
            std::string id = "(" + A.mor[u] + "|" + F.at(a0, b0).obj[i0] + ">" + X.mor[s] + ">" + F.at(a1, b1).obj[i1] + "|" + B.mor[v] + ")";
            par[{x, y}].push_back(rb.add_mor(id, {u, i0, s, i1, v}, x, y));
          }
        }
    }
  for (int x = 0; x < rb.c.n_obj(); ++x) {
    auto& k = rb.okey[x];
    const Fin2Cat& X = F.at(k[0], k[2]);
    rb.c.idm[x] = rb.mor({A.idm[k[0]], k[1], X.idm[k[1]], k[1], B.idm[k[2]]});
  }
  for (auto& [ends, ms] : par)
    for (int m0 : ms)
      for (int m1 : ms) {
        auto &k0 = rb.mkey[m0], &k1 = rb.mkey[m1];
        int a0 = A.msrc[k0[0]], b1 = B.mtgt[k0[4]];
        const Fin2Cat& X = F.at(a0, b1);
        for (int al : A.cells_between(k0[0], k1[0]))
          for (int be : B.cells_between(k0[4], k1[4])) {
            if (X.comp(F.astar[al][b1][k0[3]], k0[2]) != X.comp(k1[2], F.bshriek[be][a0][k0[1]])) continue;
            std::string id = "[" + A.cell[al] + "|" + F.at(a0, B.msrc[k0[4]]).obj[k0[1]] + ">" + X.mor[k0[2]] + ";" +
                             X.mor[k1[2]] + ">" + F.at(A.mtgt[k0[0]], b1).obj[k0[3]] + "|" + B.cell[be] + "]";
            int c = rb.add_cell(id, {al, be, k0[1], k0[2], k1[2], k0[3]}, m0, m1);
            if (m0 == m1 && A.is_id_cell(al) && B.is_id_cell(be)) rb.c.idc[m0] = c;
          }
      }
  rb.c.reindex();
  // (u',s',v')∘(u,s,v) = (u'u, u*s' ∘ v'_!s, v'v)
  auto mcomp = [&](int u, int s, int vp, int sp) {
    int a0 = A.msrc[u], b2 = B.mtgt[vp];
    return F.at(a0, b2).comp(F.ustar[u][b2].mor[sp], F.vshriek[vp][a0].mor[s]);
  };
  fill_tables(
      rb.c,
      [&](int g, int f) {
        auto &kf = rb.mkey[f], &kg = rb.mkey[g];
        return rb.mor({A.comp(kg[0], kf[0]), kf[1], mcomp(kf[0], kf[2], kg[4], kg[2]), kg[3], B.comp(kg[4], kf[4])});
      },
      [&](int x, int y) {
        auto &kx = rb.ckey[x], &ky = rb.ckey[y];
        return rb.cell({A.vcomp(kx[0], ky[0]), B.vcomp(kx[1], ky[1]), kx[2], kx[3], ky[4], kx[5]});
      },
      [&](int psi, int phi) {
        auto &kf = rb.ckey[phi], &kg = rb.ckey[psi];
        int u0 = A.csrc[kf[0]], u1 = A.ctgt[kf[0]];
        int vp0 = B.csrc[kg[1]], vp1 = B.ctgt[kg[1]];
        return rb.cell({A.hcomp(kg[0], kf[0]), B.hcomp(kg[1], kf[1]), kf[2], mcomp(u0, kf[3], vp0, kg[3]),
                        mcomp(u1, kf[4], vp1, kg[4]), kg[5]});
      });
  Elements E{F, {}, rb.finish()};
  const Built& bt = E.b;
  const Fin2Cat& X = *bt.cat;
  TwoSided& t = E.span;
  t.name = X.name;
  t.p = TwoFunctor{bt.cat, F.A, {}, {}, {}};
  t.q = TwoFunctor{bt.cat, F.B, {}, {}, {}};
  for (auto& k : bt.okey) { t.p.obj.push_back(k[0]); t.q.obj.push_back(k[2]); }
  for (auto& k : bt.mkey) { t.p.mor.push_back(k[0]); t.q.mor.push_back(k[4]); }
  for (auto& k : bt.ckey) { t.p.cell.push_back(k[0]); t.q.cell.push_back(k[1]); }
  auto need = [](int x) {
    if (x < 0) throw InconsistencyError("elements: chosen lift is missing");
    return x;
  };
  for (int x = 0; x < X.n_obj(); ++x) {
    int a = bt.okey[x][0], i = bt.okey[x][1], b = bt.okey[x][2];
    for (int u : A.in(a)) {
      int a0 = A.msrc[u], ui = F.ustar[u][b].obj[i];
      t.lam_mor[key2(x, u)] = need(bt.mor({u, ui, F.at(a0, b).idm[ui], i, B.idm[b]}));
    }
    for (int v : B.out(b)) {
      int b1 = B.mtgt[v], vi = F.vshriek[v][a].obj[i];
      t.rho_mor[key2(x, v)] = need(bt.mor({A.idm[a], i, F.at(a, b1).idm[vi], vi, v}));
    }
  }
  for (int m = 0; m < X.n_mor(); ++m) {
    auto& k = bt.mkey[m];
    int u = k[0], i0 = k[1], s = k[2], i1 = k[3], v = k[4];
    int a0 = A.msrc[u], b1 = B.mtgt[v];
    const Fin2Cat& Y = F.at(a0, b1);
    for (int al : A.cells_from(u))
      t.lam_cell[key2(al, m)] = need(bt.cell({al, B.idc[v], i0, s, Y.comp(F.astar[al][b1][i1], s), i1}));
    for (int be : B.cells_to(v))
      t.rho_cell[key2(be, m)] = need(bt.cell({A.idc[u], be, i0, Y.comp(s, F.bshriek[be][a0][i0]), s, i1}));
  }
  return E;
}

// ---------------------------------------------------------------------------
// Presheaves on A and a finite presheaf 2-category

struct Psh {
  std::string name;
  Cat A;
  std::vector<Cat> fib;                      // [a]
  std::vector<Fn1> ustar;                    // [u]: fib[a1] -> fib[a0]
  std::vector<std::vector<int>> astar;       // [alpha][i]
  std::vector<int> repr_obj;                 // for y a: A-morphism -> fibre object (over its source)
  std::vector<int> repr_mor;                 // for y a: A-cell -> fibre morphism
  int repr = -1;                             // a, when this is y a
};

inline Psh presheaf_of(const IndexedCat& F, int b) {
  const Fin2Cat &A = *F.A, &B = *F.B;
  Psh P{"g(" + B.obj[b] + ")", F.A, {}, {}, {}, {}, {}, -1};
  for (int a = 0; a < A.n_obj(); ++a) P.fib.push_back(F.fib[a][b]);
  for (int u = 0; u < A.n_mor(); ++u) P.ustar.push_back(F.ustar[u][b]);
  for (int al = 0; al < A.n_cell(); ++al) P.astar.push_back(F.astar[al][b]);
  return P;
}

// y a = A(-, a): fibres are hom-categories, u* precomposes, alpha* whiskers.
inline Psh representable(const Cat& Ac, int a) {
  const Fin2Cat& A = *Ac;
  Psh P{"y(" + A.obj[a] + ")", Ac, {}, {}, {}, std::vector<int>(A.n_mor(), -1), std::vector<int>(A.n_cell(), -1), a};
  std::vector<Built> hom;
  for (int x = 0; x < A.n_obj(); ++x) {
    RawBuild rb;
    rb.c.name = "A(" + A.obj[x] + "," + A.obj[a] + ")";
    for (int w : A.hom(x, a)) rb.add_obj(A.mor[w], {w});
    for (int w : A.hom(x, a))
      for (int w2 : A.hom(x, a))
        for (int g : A.cells_between(w, w2)) rb.add_mor(A.cell[g], {g}, rb.obj({w}), rb.obj({w2}));
    for (int w : A.hom(x, a)) {
      int o = rb.obj({w});
      int m = rb.mor({A.idc[w]});
      rb.c.idm[o] = m;
    }
    for (int m = 0; m < rb.c.n_mor(); ++m) {
      rb.add_cell("id_" + rb.c.mor[m], {rb.mkey[m][0]}, m, m);
      rb.c.idc[m] = m;
    }
    rb.c.reindex();
    fill_tables(
        rb.c, [&](int g, int f) { return rb.mor({A.vcomp(rb.mkey[f][0], rb.mkey[g][0])}); },
        [&](int x1, int) { return x1; },
        [&](int psi, int phi) { return rb.cell({A.vcomp(rb.mkey[phi][0], rb.mkey[psi][0])}); });
    hom.push_back(rb.finish());
    P.fib.push_back(hom.back().cat);
    for (int w : A.hom(x, a)) P.repr_obj[w] = hom.back().obj({w});
    for (int w : A.hom(x, a))
      for (int w2 : A.hom(x, a))
        for (int g : A.cells_between(w, w2)) P.repr_mor[g] = hom.back().mor({g});
  }
  for (int u = 0; u < A.n_mor(); ++u) {
    int a0 = A.msrc[u], a1 = A.mtgt[u];
    Fn1 f;
    for (auto& k : hom[a1].okey) f.obj.push_back(P.repr_obj[A.comp(k[0], u)]);
    for (auto& k : hom[a1].mkey) f.mor.push_back(P.repr_mor[A.whr(k[0], u)]);
    (void)a0;
    P.ustar.push_back(f);
  }
  for (int al = 0; al < A.n_cell(); ++al) {
    int a1 = A.ctgt_obj(al);
    std::vector<int> c;
    for (auto& k : hom[a1].okey) c.push_back(P.repr_mor[A.whl(k[0], al)]);
    P.astar.push_back(c);
  }
  return P;
}

// 2-natural transformation between presheaves, one functor per object of A.
struct TwoNat {
  int X, Y;
  std::vector<Fn1> comp;
};

inline std::vector<int> nat_key(const TwoNat& t) {
  std::vector<int> k{t.X, t.Y};
  for (auto& f : t.comp) {
    k.insert(k.end(), f.obj.begin(), f.obj.end());
    k.insert(k.end(), f.mor.begin(), f.mor.end());
  }
  return k;
}

namespace detail {

// Depth-first search over variables 0..n-1. cons[k] checks the constraints
// whose largest variable is k, once variables 0..k are assigned.
inline void backtrack(int n, const std::function<std::vector<int>(int, const std::vector<int>&)>& dom,
                      const std::vector<std::vector<std::function<bool(const std::vector<int>&)>>>& cons,
                      const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> val(n, -1);
  std::size_t steps = 0;
  std::function<bool(int)> go = [&](int k) -> bool {
    if (k == n) return visit(val);
    for (int x : dom(k, val)) {
      if (++steps > settings().search_cap) throw CapError("presheaf search exceeded the search cap");
      val[k] = x;
      bool ok = true;
      for (auto& c : cons[k])
        if (!c(val)) { ok = false; break; }
      if (ok && !go(k + 1)) return false;
    }
    val[k] = -1;
    return true;
  };
  go(0);
}

}  // namespace detail

inline std::vector<TwoNat> all_twonat(const std::vector<Psh>& ps, int X, int Y) {
  const Psh &P = ps[X], &Q = ps[Y];
  const Fin2Cat& A = *P.A;
  // variables: objects of every P(a), then morphisms of every P(a)
  std::vector<std::pair<int, int>> ov, mv;
  std::vector<std::vector<int>> oidx(A.n_obj()), midx(A.n_obj());
  for (int a = 0; a < A.n_obj(); ++a)
    for (int i = 0; i < P.fib[a]->n_obj(); ++i) { oidx[a].push_back(int(ov.size())); ov.push_back({a, i}); }
  int no = int(ov.size());
  for (int a = 0; a < A.n_obj(); ++a)
    for (int m = 0; m < P.fib[a]->n_mor(); ++m) { midx[a].push_back(no + int(mv.size())); mv.push_back({a, m}); }
  int n = no + int(mv.size());
  std::vector<std::vector<std::function<bool(const std::vector<int>&)>>> cons(n);
  auto add = [&](std::vector<int> vars, std::function<bool(const std::vector<int>&)> f) {
    cons[*std::max_element(vars.begin(), vars.end())].push_back(std::move(f));
  };
  for (int u = 0; u < A.n_mor(); ++u) {
    int a0 = A.msrc[u], a1 = A.mtgt[u];
    const Fin2Cat& P1 = *P.fib[a1];
    for (int i = 0; i < P1.n_obj(); ++i) {
      int vi = oidx[a1][i], vj = oidx[a0][P.ustar[u].obj[i]];
      add({vi, vj}, [=, &Q](const std::vector<int>& val) { return val[vj] == Q.ustar[u].obj[val[vi]]; });
    }
    for (int m = 0; m < P1.n_mor(); ++m) {
      int vi = midx[a1][m], vj = midx[a0][P.ustar[u].mor[m]];
      add({vi, vj}, [=, &Q](const std::vector<int>& val) { return val[vj] == Q.ustar[u].mor[val[vi]]; });
    }
  }
  for (int al = 0; al < A.n_cell(); ++al) {
    int a0 = A.csrc_obj(al), a1 = A.ctgt_obj(al);
    for (int i = 0; i < P.fib[a1]->n_obj(); ++i) {
      int vi = oidx[a1][i], vm = midx[a0][P.astar[al][i]];
      add({vi, vm}, [=, &Q](const std::vector<int>& val) { return val[vm] == Q.astar[al][val[vi]]; });
    }
  }
  for (int a = 0; a < A.n_obj(); ++a) {
    const Fin2Cat &Pa = *P.fib[a], &Qa = *Q.fib[a];
    for (int i = 0; i < Pa.n_obj(); ++i) {
      int vi = oidx[a][i], vm = midx[a][Pa.idm[i]];
      add({vi, vm}, [=, &Qa](const std::vector<int>& val) { return val[vm] == Qa.idm[val[vi]]; });
    }
    for (auto& [k, gf] : sorted_entries(Pa.hm)) {
      int vg = midx[a][key_hi(k)], vf = midx[a][key_lo(k)], vgf = midx[a][gf];
      add({vg, vf, vgf}, [=, &Qa](const std::vector<int>& val) { return val[vgf] == Qa.comp(val[vg], val[vf]); });
    }
  }
  auto dom = [&](int k, const std::vector<int>& val) {
    std::vector<int> d;
    if (k < no) {
      for (int j = 0; j < Q.fib[ov[k].first]->n_obj(); ++j) d.push_back(j);
    } else {
      auto [a, m] = mv[k - no];
      const Fin2Cat& Pa = *P.fib[a];
      d = Q.fib[a]->hom(val[oidx[a][Pa.msrc[m]]], val[oidx[a][Pa.mtgt[m]]]);
    }
    return d;
  };
  std::vector<TwoNat> out;
  detail::backtrack(n, dom, cons, [&](const std::vector<int>& val) {
    TwoNat t{X, Y, std::vector<Fn1>(A.n_obj())};
    for (int k = 0; k < no; ++k) t.comp[ov[k].first].obj.push_back(val[k]);
    for (int k = 0; k < int(mv.size()); ++k) t.comp[mv[k].first].mor.push_back(val[no + k]);
    out.push_back(std::move(t));
    check_cap(out.size(), "2-natural transformation");
    return true;
  });
  return out;
}

// Modifications theta => theta', one morphism of Q(a) per object of P(a).
inline std::vector<std::vector<std::vector<int>>> all_mods(const std::vector<Psh>& ps, const TwoNat& th, const TwoNat& th2) {
  const Psh &P = ps[th.X], &Q = ps[th.Y];
  const Fin2Cat& A = *P.A;
  std::vector<std::pair<int, int>> vars;
  std::vector<std::vector<int>> idx(A.n_obj());
  for (int a = 0; a < A.n_obj(); ++a)
    for (int i = 0; i < P.fib[a]->n_obj(); ++i) { idx[a].push_back(int(vars.size())); vars.push_back({a, i}); }
  int n = int(vars.size());
  std::vector<std::vector<std::function<bool(const std::vector<int>&)>>> cons(n);
  auto add = [&](int v1, int v2, std::function<bool(const std::vector<int>&)> f) { cons[std::max(v1, v2)].push_back(std::move(f)); };
  for (int a = 0; a < A.n_obj(); ++a) {
    const Fin2Cat &Pa = *P.fib[a], &Qa = *Q.fib[a];
    for (int s = 0; s < Pa.n_mor(); ++s) {
      int vi = idx[a][Pa.msrc[s]], vj = idx[a][Pa.mtgt[s]];
      int ts = th.comp[a].mor[s], ts2 = th2.comp[a].mor[s];
      add(vi, vj, [=, &Qa](const std::vector<int>& val) { return Qa.comp(ts2, val[vi]) == Qa.comp(val[vj], ts); });
    }
  }
  for (int u = 0; u < A.n_mor(); ++u) {
    int a0 = A.msrc[u], a1 = A.mtgt[u];
    for (int i = 0; i < P.fib[a1]->n_obj(); ++i) {
      int vi = idx[a1][i], vj = idx[a0][P.ustar[u].obj[i]];
      add(vi, vj, [=, &Q](const std::vector<int>& val) { return val[vj] == Q.ustar[u].mor[val[vi]]; });
    }
  }
  auto dom = [&](int k, const std::vector<int>&) {
    auto [a, i] = vars[k];
    return Q.fib[a]->hom(th.comp[a].obj[i], th2.comp[a].obj[i]);
  };
  std::vector<std::vector<std::vector<int>>> out;
  detail::backtrack(n, dom, cons, [&](const std::vector<int>& val) {
    std::vector<std::vector<int>> m(A.n_obj());
    for (int k = 0; k < n; ++k) m[vars[k].first].push_back(val[k]);
    out.push_back(std::move(m));
    check_cap(out.size(), "modification");
    return true;
  });
  return out;
}

// Full sub-2-category of presheaves on A spanned by a list of presheaves:
// all 2-natural transformations and modifications between them. Morphism
// keys are nat_key contents; cell keys are both boundary keys followed by
// the flattened components.
struct PshCat {
  Cat A;
  std::vector<Psh> objs;
  Built b;
  std::vector<TwoNat> nats;  // by morphism index

  const Fin2Cat& cat() const { return *b.cat; }
  int nat_index(const TwoNat& t) const { return b.mor(nat_key(t)); }
  std::vector<std::vector<int>> mod(int c) const {
    const TwoNat& t = nats[cat().csrc[c]];
    std::vector<std::vector<int>> m;
    const auto& k = b.ckey[c];
    std::size_t off = b.mkey[cat().csrc[c]].size() + b.mkey[cat().ctgt[c]].size();
    for (int a = 0; a < int(t.comp.size()); ++a) {
      std::vector<int> row;
      for (std::size_t i = 0; i < t.comp[a].obj.size(); ++i) row.push_back(k[off++]);
      m.push_back(row);
    }
    return m;
  }
  int mod_index(int th, int th2, const std::vector<std::vector<int>>& m) const {
    std::vector<int> k = b.mkey[th];
    k.insert(k.end(), b.mkey[th2].begin(), b.mkey[th2].end());
    for (auto& row : m) k.insert(k.end(), row.begin(), row.end());
    return b.cell(k);
  }
};

inline PshCat make_pshcat(const Cat& A, std::vector<Psh> objs) {
  PshCat P{A, std::move(objs), {}, {}};
  const auto& ps = P.objs;
  const Fin2Cat& Ac = *A;
  RawBuild rb;
  rb.c.name = "Psh(" + Ac.name + ")";
  std::vector<TwoNat> raw;
  std::vector<std::vector<int>> by_pair(ps.size() * ps.size());
  for (int X = 0; X < int(ps.size()); ++X) rb.add_obj(ps[X].name, {X});
  for (int X = 0; X < int(ps.size()); ++X)
    for (int Y = 0; Y < int(ps.size()); ++Y) {
      auto ts = all_twonat(ps, X, Y);
      for (std::size_t j = 0; j < ts.size(); ++j) {
        int m = rb.add_mor(ps[X].name + "=" + std::to_string(j) + "=>" + ps[Y].name, nat_key(ts[j]), X, Y);
        by_pair[X * ps.size() + Y].push_back(m);
        raw.push_back(std::move(ts[j]));
      }
    }
  std::vector<std::vector<std::vector<int>>> comps;  // by raw cell
  for (int X = 0; X < int(ps.size()); ++X)
    for (int Y = 0; Y < int(ps.size()); ++Y)
      for (int m0 : by_pair[X * ps.size() + Y])
        for (int m1 : by_pair[X * ps.size() + Y]) {
          auto ms = all_mods(ps, raw[m0], raw[m1]);
          for (std::size_t j = 0; j < ms.size(); ++j) {
            std::vector<int> k = rb.mkey[m0];
            k.insert(k.end(), rb.mkey[m1].begin(), rb.mkey[m1].end());
            for (auto& row : ms[j]) k.insert(k.end(), row.begin(), row.end());
            bool ident = m0 == m1;
            for (int a = 0; ident && a < Ac.n_obj(); ++a)
              for (std::size_t i = 0; ident && i < ms[j][a].size(); ++i)
                ident = ms[j][a][i] == ps[Y].fib[a]->idm[raw[m0].comp[a].obj[i]];
            int c = rb.add_cell(rb.c.mor[m0] + "~" + std::to_string(j) + "~>" + rb.c.mor[m1], k, m0, m1);
            if (ident) rb.c.idc[m0] = c;
            comps.push_back(std::move(ms[j]));
          }
        }
  for (int X = 0; X < int(ps.size()); ++X) {
    TwoNat id{X, X, {}};
    for (int a = 0; a < Ac.n_obj(); ++a) id.comp.push_back(detail::identity1(*ps[X].fib[a]));
    rb.c.idm[X] = rb.mor(nat_key(id));
  }
  rb.c.reindex();
  auto ncomp = [&](const TwoNat& g, const TwoNat& f) {
    TwoNat h{f.X, g.Y, {}};
    for (int a = 0; a < Ac.n_obj(); ++a) h.comp.push_back(detail::compose1(g.comp[a], f.comp[a]));
    return h;
  };
  auto cell_key = [&](int m0, int m1, const std::vector<std::vector<int>>& m) {
    std::vector<int> k = rb.mkey[m0];
    k.insert(k.end(), rb.mkey[m1].begin(), rb.mkey[m1].end());
    for (auto& row : m) k.insert(k.end(), row.begin(), row.end());
    return k;
  };
  fill_tables(
      rb.c, [&](int g, int f) { return rb.mor(nat_key(ncomp(raw[g], raw[f]))); },
      [&](int x, int y) {
        int Y = rb.c.mtgt[rb.c.csrc[x]];
        std::vector<std::vector<int>> m(Ac.n_obj());
        for (int a = 0; a < Ac.n_obj(); ++a)
          for (std::size_t i = 0; i < comps[x][a].size(); ++i) m[a].push_back(ps[Y].fib[a]->comp(comps[y][a][i], comps[x][a][i]));
        return rb.cell(cell_key(rb.c.csrc[x], rb.c.ctgt[y], m));
      },
      [&](int psi, int phi) {
        // (n∘m)_{a,i} = n_{a, theta'_a i} ∘ psi0_a(m_{a,i})
        int f0 = rb.c.csrc[phi], f1 = rb.c.ctgt[phi], g0 = rb.c.csrc[psi], g1 = rb.c.ctgt[psi];
        int Z = rb.c.mtgt[g0];
        std::vector<std::vector<int>> m(Ac.n_obj());
        for (int a = 0; a < Ac.n_obj(); ++a)
          for (std::size_t i = 0; i < comps[phi][a].size(); ++i)
            m[a].push_back(ps[Z].fib[a]->comp(comps[psi][a][raw[f1].comp[a].obj[i]], raw[g0].comp[a].mor[comps[phi][a][i]]));
        int h0 = rb.mor(nat_key(ncomp(raw[g0], raw[f0]))), h1 = rb.mor(nat_key(ncomp(raw[g1], raw[f1])));
        return rb.cell(cell_key(h0, h1, m));
      });
  P.b = rb.finish();
  // recover the transformation content by canonical index
  for (auto& k : P.b.mkey) {
    TwoNat t{k[0], k[1], {}};
    std::size_t off = 2;
    for (int a = 0; a < Ac.n_obj(); ++a) {
      Fn1 f;
      for (int i = 0; i < ps[t.X].fib[a]->n_obj(); ++i) f.obj.push_back(k[off++]);
      for (int s = 0; s < ps[t.X].fib[a]->n_mor(); ++s) f.mor.push_back(k[off++]);
      t.comp.push_back(f);
    }
    P.nats.push_back(std::move(t));
  }
  return P;
}

// Presheaf 2-category for the representables of A and the curried fibres of
// each indexed family, with y: A -> Psh and g_k: B_k -> Psh.
struct PshContext {
  PshCat psh;
  std::vector<IndexedCat> fams;
  std::vector<int> yobj;                // a -> object
  std::vector<std::vector<int>> gobj;   // [fam][b] -> object
  TwoFunctor y;
  std::vector<TwoFunctor> g;
};

inline PshContext make_psh_context(const Cat& A, const std::vector<IndexedCat>& fams) {
  const Fin2Cat& Ac = *A;
  std::vector<Psh> ps;
  PshContext cx;
  cx.fams = fams;
  for (int a = 0; a < Ac.n_obj(); ++a) ps.push_back(representable(A, a));
  for (std::size_t k = 0; k < fams.size(); ++k) {
    if (!TwoFunctor::same(fams[k].A, A)) throw StructuralError("indexed family over a different 2-category");
    for (int b = 0; b < fams[k].B->n_obj(); ++b) {
      Psh p = presheaf_of(fams[k], b);
      p.name = fams[k].name + "(" + fams[k].B->obj[b] + ")";
      ps.push_back(std::move(p));
    }
  }
  cx.psh = make_pshcat(A, ps);
  const PshCat& P = cx.psh;
  for (int a = 0; a < Ac.n_obj(); ++a) cx.yobj.push_back(P.b.obj({a}));
  int base = Ac.n_obj();
  for (auto& F : fams) {
    std::vector<int> row;
    for (int b = 0; b < F.B->n_obj(); ++b) row.push_back(P.b.obj({base + b}));
    base += F.B->n_obj();
    cx.gobj.push_back(row);
  }
  auto need = [](int x, const char* what) {
    if (x < 0) throw InconsistencyError(std::string("presheaf 2-category is missing ") + what);
    return x;
  };
  // y on morphisms: u∘-, on cells: alpha∘-
  cx.y = TwoFunctor{A, P.b.cat, {}, {}, {}};
  for (int a = 0; a < Ac.n_obj(); ++a) cx.y.obj.push_back(cx.yobj[a]);
  for (int u = 0; u < Ac.n_mor(); ++u) {
    int a0 = Ac.msrc[u], a1 = Ac.mtgt[u];
    const Psh &Y0 = P.objs[a0], &Y1 = P.objs[a1];
    TwoNat t{a0, a1, {}};
    for (int x = 0; x < Ac.n_obj(); ++x) {
      Fn1 f;
      std::vector<int> inv0(Y0.fib[x]->n_obj()), minv0(Y0.fib[x]->n_mor());
      for (int w : Ac.hom(x, a0)) inv0[Y0.repr_obj[w]] = w;
      for (int w : Ac.hom(x, a0))
        for (int w2 : Ac.hom(x, a0))
          for (int gm : Ac.cells_between(w, w2)) minv0[Y0.repr_mor[gm]] = gm;
      for (int w : inv0) f.obj.push_back(Y1.repr_obj[Ac.comp(u, w)]);
      for (int gm : minv0) f.mor.push_back(Y1.repr_mor[Ac.whl(u, gm)]);
      t.comp.push_back(f);
    }
    cx.y.mor.push_back(need(P.nat_index(t), "a representable transformation"));
  }
  for (int al = 0; al < Ac.n_cell(); ++al) {
    int u0 = Ac.csrc[al], u1 = Ac.ctgt[al], a0 = Ac.msrc[u0];
    const Psh &Y0 = P.objs[a0], &Y1 = P.objs[Ac.mtgt[u0]];
    std::vector<std::vector<int>> m;
    for (int x = 0; x < Ac.n_obj(); ++x) {
      std::vector<int> inv0(Y0.fib[x]->n_obj());
      for (int w : Ac.hom(x, a0)) inv0[Y0.repr_obj[w]] = w;
      std::vector<int> row;
      for (int w : inv0) row.push_back(Y1.repr_mor[Ac.whr(al, w)]);
      m.push_back(row);
    }
    cx.y.cell.push_back(need(P.mod_index(cx.y.mor[u0], cx.y.mor[u1], m), "a representable modification"));
  }
  for (std::size_t k = 0; k < fams.size(); ++k) {
    const IndexedCat& F = fams[k];
    const Fin2Cat& B = *F.B;
    TwoFunctor g{F.B, P.b.cat, cx.gobj[k], {}, {}};
    for (int v = 0; v < B.n_mor(); ++v) {
      TwoNat t{P.b.okey[cx.gobj[k][B.msrc[v]]][0], P.b.okey[cx.gobj[k][B.mtgt[v]]][0], {}};
      for (int a = 0; a < Ac.n_obj(); ++a) t.comp.push_back(F.vshriek[v][a]);
      g.mor.push_back(need(P.nat_index(t), "a transition transformation"));
    }
    for (int be = 0; be < B.n_cell(); ++be) {
      std::vector<std::vector<int>> m;
      for (int a = 0; a < Ac.n_obj(); ++a) m.push_back(F.bshriek[be][a]);
      g.cell.push_back(need(P.mod_index(g.mor[B.csrc[be]], g.mor[B.ctgt[be]], m), "a transition modification"));
    }
    cx.g.push_back(g);
  }
  return cx;
}

// ---------------------------------------------------------------------------
// Yoneda: evaluation and its inverse

// theta: y a => X, evaluated at id_a.
inline int yoneda_ev(const PshContext& cx, int theta) {
  const PshCat& P = cx.psh;
  const TwoNat& t = P.nats[theta];
  const Psh& Ya = P.objs[t.X];
  if (Ya.repr < 0) throw StructuralError("evaluation needs a representable source");
  int a = Ya.repr;
  return t.comp[a].obj[Ya.repr_obj[P.A->idm[a]]];
}

// modification theta => theta' between transformations out of y a.
inline int yoneda_ev_cell(const PshContext& cx, int mod) {
  const PshCat& P = cx.psh;
  int th = P.cat().csrc[mod];
  const Psh& Ya = P.objs[P.nats[th].X];
  if (Ya.repr < 0) throw StructuralError("evaluation needs a representable source");
  int a = Ya.repr;
  return P.mod(mod)[a][Ya.repr_obj[P.A->idm[a]]];
}

// -*i: y a => X for i in X(a).
inline int yoneda_star(const PshContext& cx, int a, int X, int i) {
  const PshCat& P = cx.psh;
  const Fin2Cat& A = *P.A;
  const Psh &Ya = P.objs[P.b.okey[cx.yobj[a]][0]], &Q = P.objs[P.b.okey[X][0]];
  TwoNat t{P.b.okey[cx.yobj[a]][0], P.b.okey[X][0], {}};
  for (int x = 0; x < A.n_obj(); ++x) {
    Fn1 f(Fn1{std::vector<int>(Ya.fib[x]->n_obj(), -1), std::vector<int>(Ya.fib[x]->n_mor(), -1)});
    for (int w : A.hom(x, a)) f.obj[Ya.repr_obj[w]] = Q.ustar[w].obj[i];
    for (int w : A.hom(x, a))
      for (int w2 : A.hom(x, a))
        for (int gm : A.cells_between(w, w2)) f.mor[Ya.repr_mor[gm]] = Q.astar[gm][i];
    t.comp.push_back(f);
  }
  int m = P.nat_index(t);
  if (m < 0) throw InconsistencyError("-*i is not a 2-natural transformation; presheaf data is invalid");
  return m;
}

// -*s: -*i => -*j for s: i -> j in X(a).
inline int yoneda_star_mor(const PshContext& cx, int a, int X, int s) {
  const PshCat& P = cx.psh;
  const Fin2Cat& A = *P.A;
  const Psh &Ya = P.objs[P.b.okey[cx.yobj[a]][0]], &Q = P.objs[P.b.okey[X][0]];
  const Fin2Cat& Xa = *Q.fib[a];
  int ti = yoneda_star(cx, a, X, Xa.msrc[s]), tj = yoneda_star(cx, a, X, Xa.mtgt[s]);
  std::vector<std::vector<int>> m;
  for (int x = 0; x < A.n_obj(); ++x) {
    std::vector<int> row(Ya.fib[x]->n_obj(), -1);
    for (int w : A.hom(x, a)) row[Ya.repr_obj[w]] = Q.ustar[w].mor[s];
    m.push_back(row);
  }
  int c = P.mod_index(ti, tj, m);
  if (c < 0) throw InconsistencyError("-*s is not a modification; presheaf data is invalid");
  return c;
}

// Checks ev∘star = id, star∘ev = id, and that star exhausts the enumerated
// transformations and modifications out of y a into X.
inline Report check_yoneda(const PshContext& cx, int a, int X) {
  Report r;
  const PshCat& P = cx.psh;
  const Fin2Cat& M = P.cat();
  const Fin2Cat& Xa = *P.objs[P.b.okey[X][0]].fib[a];
  std::string loc = P.A->obj[a] + "," + M.obj[X];
  std::vector<int> hit(M.n_mor(), 0);
  for (int i = 0; i < Xa.n_obj(); ++i) {
    int t = yoneda_star(cx, a, X, i);
    if (yoneda_ev(cx, t) != i) r.add("yoneda.ev_star", loc, "ev(star(i)) differs from i", {Xa.obj[i]});
    hit[t]++;
  }
  for (int m : M.hom(cx.yobj[a], X)) {
    if (hit[m] != 1) r.add("yoneda.exhaust", loc, hit[m] ? "transformation hit twice" : "transformation not in the image of star", {M.mor[m]});
    if (yoneda_star(cx, a, X, yoneda_ev(cx, m)) != m) r.add("yoneda.star_ev", loc, "star(ev(theta)) differs from theta", {M.mor[m]});
  }
  std::vector<int> chit(M.n_cell(), 0);
  for (int s = 0; s < Xa.n_mor(); ++s) {
    int c = yoneda_star_mor(cx, a, X, s);
    if (yoneda_ev_cell(cx, c) != s) r.add("yoneda.ev_star", loc, "ev(star(s)) differs from s", {Xa.mor[s]});
    chit[c]++;
  }
  for (int m : M.hom(cx.yobj[a], X))
    for (int m2 : M.hom(cx.yobj[a], X))
      for (int c : M.cells_between(m, m2))
        if (chit[c] != 1) r.add("yoneda.exhaust", loc, "modification not hit exactly once", {M.cell[c]});
  return r;
}

// The marked lax transformation chi: y∘pi_A => g∘pi_B on elements(F).
inline NullaryCell elements_chi(const Elements& E, const PshContext& cx, int fam) {
  const Fin2Cat &X = *E.b.cat, &A = *E.F.A, &M = cx.psh.cat();
  const TwoFunctor& g = cx.g[fam];
  NullaryCell c;
  c.path = {E.span};
  c.P = make_apex(c.path);
  c.f = cx.y;
  c.g = g;
  c.phi.F = compose(cx.y, E.span.p);
  c.phi.G = compose(g, E.span.q);
  for (auto& k : E.b.okey) c.phi.comp.push_back(yoneda_star(cx, k[0], g.obj[k[2]], k[1]));
  for (int m = 0; m < X.n_mor(); ++m) {
    auto& k = E.b.mkey[m];
    int u = k[0], v = k[4], a0 = A.msrc[u], b1 = E.F.B->mtgt[v];
    int x = X.msrc[m], y = X.mtgt[m];
    int src = M.comp(g.mor[v], c.phi.comp[x]), tgt = M.comp(c.phi.comp[y], cx.y.mor[u]);
    const Psh& Ya = cx.psh.objs[cx.psh.b.okey[cx.yobj[a0]][0]];
    const Psh& Q = cx.psh.objs[cx.psh.b.okey[g.obj[b1]][0]];
    std::vector<std::vector<int>> mm;
    for (int x2 = 0; x2 < A.n_obj(); ++x2) {
      std::vector<int> row(Ya.fib[x2]->n_obj(), -1);
      for (int w : A.hom(x2, a0)) row[Ya.repr_obj[w]] = Q.ustar[w].mor[k[2]];
      mm.push_back(row);
    }
    int cc = cx.psh.mod_index(src, tgt, mm);
    if (cc < 0) throw InconsistencyError("chi: naturality modification missing");
    c.phi.nat.push_back(cc);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Inverse Grothendieck construction

struct FibreMaps {
  Cat cat;
  std::vector<int> obj, mor;  // fibre index -> apex index
  std::vector<int> oinv, minv;  // apex index -> fibre index or -1
};

inline FibreMaps fibre_maps(const TwoSided& t, int a, int b) {
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  FibreMaps fm{make_cat(fibre(t, a, b)), {}, {}, std::vector<int>(J.n_obj(), -1), std::vector<int>(J.n_mor(), -1)};
  for (int i = 0; i < J.n_obj(); ++i)
    if (t.p.obj[i] == a && t.q.obj[i] == b) { fm.oinv[i] = int(fm.obj.size()); fm.obj.push_back(i); }
  for (int m = 0; m < J.n_mor(); ++m)
    if (fm.oinv[J.msrc[m]] >= 0 && fm.oinv[J.mtgt[m]] >= 0 && A.is_id_mor(t.p.mor[m]) && B.is_id_mor(t.q.mor[m])) {
      fm.minv[m] = int(fm.mor.size());
      fm.mor.push_back(m);
    }
  return fm;
}

struct InvGroth {
  IndexedCat F;
  std::vector<std::vector<FibreMaps>> fib;  // [a][b]
};

inline InvGroth inverse_grothendieck(const TwoSided& t, const std::string& name = "") {
  Report pre = check_twosided(t);
  if (!pre.ok()) throw StructuralError("inverse Grothendieck construction needs a valid two-sided fibration");
  if (!is_locally_discrete(t).ld) throw StructuralError("inverse Grothendieck construction needs a locally discrete span");
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  InvGroth out;
  IndexedCat& F = out.F;
  F.name = name.empty() ? "curry(" + t.name + ")" : name;
  F.A = t.A();
  F.B = t.B();
  out.fib.resize(A.n_obj());
  F.fib.resize(A.n_obj());
  for (int a = 0; a < A.n_obj(); ++a)
    for (int b = 0; b < B.n_obj(); ++b) {
      out.fib[a].push_back(fibre_maps(t, a, b));
      F.fib[a].push_back(out.fib[a][b].cat);
    }
  auto unique = [&](const FibreMaps& fm, int x, int y, const std::function<bool(int)>& ok, const std::string& what) {
    int found = -1, n = 0;
    for (int c : fm.cat->hom(x, y))
      if (ok(fm.mor[c])) { found = c; ++n; }
    if (n != 1) throw InconsistencyError(what + (n ? ": lift is not unique" : ": no lift exists"));
    return found;
  };
  F.ustar.assign(A.n_mor(), {});
  for (int u = 0; u < A.n_mor(); ++u)
    for (int b = 0; b < B.n_obj(); ++b) {
      const FibreMaps &src = out.fib[A.mtgt[u]][b], &dst = out.fib[A.msrc[u]][b];
      Fn1 f;
      for (int i : src.obj) f.obj.push_back(dst.oinv[J.msrc[lookup(t.lam_mor, i, u)]]);
      for (int s : src.mor) {
        int i = J.msrc[s], j = J.mtgt[s];
        int li = lookup(t.lam_mor, i, u), lj = lookup(t.lam_mor, j, u);
        int want = J.comp(s, li);
        f.mor.push_back(unique(dst, dst.oinv[J.msrc[li]], dst.oinv[J.msrc[lj]],
                               [&](int c) { return J.comp(lj, c) == want; }, "u*s for " + J.mor[s]));
      }
      F.ustar[u].push_back(f);
    }
  F.vshriek.assign(B.n_mor(), {});
  for (int v = 0; v < B.n_mor(); ++v)
    for (int a = 0; a < A.n_obj(); ++a) {
      const FibreMaps &src = out.fib[a][B.msrc[v]], &dst = out.fib[a][B.mtgt[v]];
      Fn1 f;
      for (int i : src.obj) f.obj.push_back(dst.oinv[J.mtgt[lookup(t.rho_mor, i, v)]]);
      for (int s : src.mor) {
        int i = J.msrc[s], j = J.mtgt[s];
        int ri = lookup(t.rho_mor, i, v), rj = lookup(t.rho_mor, j, v);
        int want = J.comp(rj, s);
        f.mor.push_back(unique(dst, dst.oinv[J.mtgt[ri]], dst.oinv[J.mtgt[rj]],
                               [&](int c) { return J.comp(c, ri) == want; }, "v_!s for " + J.mor[s]));
      }
      F.vshriek[v].push_back(f);
    }
  F.astar.assign(A.n_cell(), {});
  for (int al = 0; al < A.n_cell(); ++al) {
    int u0 = A.csrc[al], u1 = A.ctgt[al], a0 = A.msrc[u0], a1 = A.mtgt[u0];
    for (int b = 0; b < B.n_obj(); ++b) {
      const FibreMaps &src = out.fib[a1][b], &dst = out.fib[a0][b];
      std::vector<int> comps;
      for (int i : src.obj) {
        int l0 = lookup(t.lam_mor, i, u0), l1 = lookup(t.lam_mor, i, u1);
        int want = J.ctgt[lookup(t.lam_cell, al, l0)];
        comps.push_back(unique(dst, dst.oinv[J.msrc[l0]], dst.oinv[J.msrc[l1]],
                               [&](int c) { return J.comp(l1, c) == want; }, "alpha* at " + J.obj[i]));
      }
      F.astar[al].push_back(comps);
    }
  }
  F.bshriek.assign(B.n_cell(), {});
  for (int be = 0; be < B.n_cell(); ++be) {
    int v0 = B.csrc[be], v1 = B.ctgt[be], b0 = B.msrc[v0], b1 = B.mtgt[v0];
    for (int a = 0; a < A.n_obj(); ++a) {
      const FibreMaps &src = out.fib[a][b0], &dst = out.fib[a][b1];
      std::vector<int> comps;
      for (int i : src.obj) {
        int r0 = lookup(t.rho_mor, i, v0), r1 = lookup(t.rho_mor, i, v1);
        int want = J.csrc[lookup(t.rho_cell, be, r1)];
        comps.push_back(unique(dst, dst.oinv[J.mtgt[r0]], dst.oinv[J.mtgt[r1]],
                               [&](int c) { return J.comp(c, r0) == want; }, "beta_! at " + J.obj[i]));
      }
      F.bshriek[be].push_back(comps);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Round trips

struct RoundTrip {
  InvGroth inv;
  Elements el;
  TwoFunctor phi, psi;  // J -> elements(curry J) and back
  Report report;
};

inline RoundTrip roundtrip_iso(const TwoSided& t) {
  RoundTrip rt{inverse_grothendieck(t), {}, {}, {}, {}};
  rt.el = elements(rt.inv.F);
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  const Elements& E = rt.el;
  const Fin2Cat& X = *E.b.cat;
  auto& fib = rt.inv.fib;
  auto fo = [&](int i) { return fib[t.p.obj[i]][t.q.obj[i]].oinv[i]; };
  // s-hat: the unique fibre morphism with lam(ps, j)∘s-hat∘rho(i, qs) = s
  auto hat = [&](int s) {
    int i = J.msrc[s], j = J.mtgt[s], u = t.p.mor[s], v = t.q.mor[s];
    int r = lookup(t.rho_mor, i, v), l = lookup(t.lam_mor, j, u);
    const FibreMaps& fm = fib[t.p.obj[i]][t.q.obj[j]];
    int found = -1, n = 0;
    for (int c : fm.cat->hom(fm.oinv[J.mtgt[r]], fm.oinv[J.msrc[l]]))
      if (J.comp(l, J.comp(fm.mor[c], r)) == s) { found = c; ++n; }
    if (n != 1) throw InconsistencyError("roundtrip: factorization of " + J.mor[s] + (n ? " is not unique" : " does not exist"));
    return found;
  };
  TwoFunctor& phi = rt.phi;
  phi = TwoFunctor{t.apex(), E.b.cat, {}, {}, {}};
  std::vector<int> hats;
  for (int i = 0; i < J.n_obj(); ++i) phi.obj.push_back(E.b.obj({t.p.obj[i], fo(i), t.q.obj[i]}));
  for (int s = 0; s < J.n_mor(); ++s) {
    hats.push_back(hat(s));
    phi.mor.push_back(E.b.mor({t.p.mor[s], fo(J.msrc[s]), hats[s], fo(J.mtgt[s]), t.q.mor[s]}));
  }
  for (int c = 0; c < J.n_cell(); ++c) {
    int s0 = J.csrc[c], s1 = J.ctgt[c];
    phi.cell.push_back(E.b.cell({t.p.cell[c], t.q.cell[c], fo(J.msrc[s0]), hats[s0], hats[s1], fo(J.mtgt[s0])}));
  }
  for (auto* v : {&phi.obj, &phi.mor, &phi.cell})
    for (int x : *v)
      if (x < 0) throw InconsistencyError("roundtrip: image missing from the elements 2-category");
  TwoFunctor& psi = rt.psi;
  psi = TwoFunctor{E.b.cat, t.apex(), {}, {}, {}};
  for (auto& k : E.b.okey) psi.obj.push_back(fib[k[0]][k[2]].obj[k[1]]);
  auto psi_mor = [&](const std::vector<int>& k) {
    int u = k[0], v = k[4], a0 = A.msrc[u], a1 = A.mtgt[u], b0 = B.msrc[v], b1 = B.mtgt[v];
    int i = fib[a0][b0].obj[k[1]], j = fib[a1][b1].obj[k[3]];
    int sJ = fib[a0][b1].mor[k[2]];
    return J.comp(lookup(t.lam_mor, j, u), J.comp(sJ, lookup(t.rho_mor, i, v)));
  };
  for (auto& k : E.b.mkey) psi.mor.push_back(psi_mor(k));
  for (int c = 0; c < X.n_cell(); ++c) {
    auto& k = E.b.ckey[c];
    auto &k0 = E.b.mkey[X.csrc[c]], &k1 = E.b.mkey[X.ctgt[c]];
    int al = k[0], be = k[1];
    int u0 = k0[0], v0 = k0[4], u1 = k1[0], v1 = k1[4];
    int a0 = A.msrc[u0], a1 = A.mtgt[u0], b0 = B.msrc[v0], b1 = B.mtgt[v0];
    int i = fib[a0][b0].obj[k0[1]], j = fib[a1][b1].obj[k0[3]];
    int s0 = fib[a0][b1].mor[k0[2]], s1 = fib[a0][b1].mor[k1[2]];
    int l0 = lookup(t.lam_mor, j, u0), l1 = lookup(t.lam_mor, j, u1);
    int r0 = lookup(t.rho_mor, i, v0), r1 = lookup(t.rho_mor, i, v1);
    int first = J.whr(lookup(t.lam_cell, al, l0), J.comp(s0, r0));
    int second = J.whl(J.comp(l1, s1), lookup(t.rho_cell, be, r1));
    if (J.ctgt[first] != J.csrc[second]) throw InconsistencyError("roundtrip: inverse cell does not compose");
    psi.cell.push_back(J.vcomp(first, second));
  }
  Report& r = rt.report;
  r.merge(validate_2functor(phi, "phi"));
  r.merge(validate_2functor(psi, "psi"));
  if (!r.ok()) return rt;
  if (!(compose(psi, phi) == identity_functor(t.apex()))) r.add("roundtrip.psi_phi", "psi∘phi", "not the identity");
  if (!(compose(phi, psi) == identity_functor(E.b.cat))) r.add("roundtrip.phi_psi", "phi∘psi", "not the identity");
  if (!(compose(E.span.p, phi) == t.p) || !(compose(E.span.q, phi) == t.q)) r.add("roundtrip.span", "phi", "not a span morphism");
  if (!r.ok()) return rt;
  r.merge(check_opfib_morphism(t.right(), E.span.right(), phi, identity_functor(t.B())), "roundtrip.right.");
  r.merge(check_opfib_morphism(t.left_coop(), E.span.left_coop(), dualize(phi, Variant::coop),
                               identity_functor(E.span.left_coop().q.tgt)),
          "roundtrip.left.");
  return rt;
}

// inverse_grothendieck(elements(F)) ≅ F through the fibre inclusions
// i |-> (a,i,b), s |-> (id,s,id).
inline Report check_elements_roundtrip(const IndexedCat& F) {
  Report r;
  Elements E = elements(F);
  InvGroth G = inverse_grothendieck(E.span);
  const Fin2Cat &A = *F.A, &B = *F.B;
  // obj[a][b][i] = index of i in G's fibre, likewise mor
  std::vector<std::vector<std::vector<int>>> om(A.n_obj()), mm(A.n_obj());
  for (int a = 0; a < A.n_obj(); ++a)
    for (int b = 0; b < B.n_obj(); ++b) {
      const Fin2Cat& X = F.at(a, b);
      const FibreMaps& fm = G.fib[a][b];
      std::string loc = A.obj[a] + "," + B.obj[b];
      std::vector<int> o, m;
      for (int i = 0; i < X.n_obj(); ++i) o.push_back(fm.oinv[E.b.obj({a, i, b})]);
      for (int s = 0; s < X.n_mor(); ++s) m.push_back(fm.minv[E.b.mor({A.idm[a], X.msrc[s], s, X.mtgt[s], B.idm[b]})]);
      std::vector<int> so = o, sm = m;
      std::sort(so.begin(), so.end());
      std::sort(sm.begin(), sm.end());
      bool bij = int(fm.obj.size()) == X.n_obj() && int(fm.mor.size()) == X.n_mor();
      for (int k = 0; bij && k < int(so.size()); ++k) bij = so[k] == k;
      for (int k = 0; bij && k < int(sm.size()); ++k) bij = sm[k] == k;
      if (!bij) r.add("groth.fibre", loc, "fibre inclusion is not bijective");
      for (int s = 0; bij && s < X.n_mor(); ++s) {
        const Fin2Cat& Y = *fm.cat;
        if (Y.msrc[m[s]] != o[X.msrc[s]] || Y.mtgt[m[s]] != o[X.mtgt[s]]) r.add("groth.fibre", loc, "boundary not preserved", {X.mor[s]});
      }
      for (auto& [k, gf] : sorted_entries(X.hm))
        if (bij && m[gf] != fm.cat->comp(m[key_hi(k)], m[key_lo(k)])) r.add("groth.fibre", loc, "composite not preserved");
      om[a].push_back(o);
      mm[a].push_back(m);
    }
  if (!r.ok()) return r;
  for (int u = 0; u < A.n_mor(); ++u)
    for (int b = 0; b < B.n_obj(); ++b) {
      int a0 = A.msrc[u], a1 = A.mtgt[u];
      for (int i = 0; i < F.at(a1, b).n_obj(); ++i)
        if (G.F.ustar[u][b].obj[om[a1][b][i]] != om[a0][b][F.ustar[u][b].obj[i]]) r.add("groth.ustar", A.mor[u] + "@" + B.obj[b], "u* differs on an object");
      for (int s = 0; s < F.at(a1, b).n_mor(); ++s)
        if (G.F.ustar[u][b].mor[mm[a1][b][s]] != mm[a0][b][F.ustar[u][b].mor[s]]) r.add("groth.ustar", A.mor[u] + "@" + B.obj[b], "u* differs on a morphism");
    }
  for (int v = 0; v < B.n_mor(); ++v)
    for (int a = 0; a < A.n_obj(); ++a) {
      int b0 = B.msrc[v], b1 = B.mtgt[v];
      for (int i = 0; i < F.at(a, b0).n_obj(); ++i)
        if (G.F.vshriek[v][a].obj[om[a][b0][i]] != om[a][b1][F.vshriek[v][a].obj[i]]) r.add("groth.vshriek", B.mor[v] + "@" + A.obj[a], "v_! differs on an object");
      for (int s = 0; s < F.at(a, b0).n_mor(); ++s)
        if (G.F.vshriek[v][a].mor[mm[a][b0][s]] != mm[a][b1][F.vshriek[v][a].mor[s]]) r.add("groth.vshriek", B.mor[v] + "@" + A.obj[a], "v_! differs on a morphism");
    }
  for (int al = 0; al < A.n_cell(); ++al)
    for (int b = 0; b < B.n_obj(); ++b) {
      int a0 = A.csrc_obj(al), a1 = A.ctgt_obj(al);
      for (int i = 0; i < F.at(a1, b).n_obj(); ++i)
        if (G.F.astar[al][b][om[a1][b][i]] != mm[a0][b][F.astar[al][b][i]]) r.add("groth.astar", A.cell[al] + "@" + B.obj[b], "alpha* differs");
    }
  for (int be = 0; be < B.n_cell(); ++be)
    for (int a = 0; a < A.n_obj(); ++a) {
      int b0 = B.csrc_obj(be), b1 = B.ctgt_obj(be);
      for (int i = 0; i < F.at(a, b0).n_obj(); ++i)
        if (G.F.bshriek[be][a][om[a][b0][i]] != mm[a][b1][F.bshriek[be][a][i]]) r.add("groth.bshriek", B.cell[be] + "@" + A.obj[a], "beta_! differs");
    }
  return r;
}

// ---------------------------------------------------------------------------
// Density of chi: explicit factorization

// phi: marked lax on apex(E ⧺ H) over (y∘pi_A∘pi_E, k∘q_n∘pi_n). Returns phi'
// over (g∘p_1∘pi_1, k∘q_n∘pi_n) with chi then phi' equal to phi. For an
// empty H, phi' is a 2-natural transformation g => k on B.
struct KanResult {
  LaxTrans phi;
  Report report;
};

inline KanResult kan_factorize(const LaxTrans& phi, const Elements& E, const PshContext& cx, int fam,
                               const std::vector<TwoSided>& H, const TwoFunctor& k) {
  const Fin2Cat &A = *E.F.A, &B = *E.F.B, &M = cx.psh.cat();
  const TwoFunctor& g = cx.g[fam];
  const bool empty = H.empty();
  std::vector<TwoSided> full{E.span};
  full.insert(full.end(), H.begin(), H.end());
  MultiPullback P = path_apex(full);
  ApexPtr PH = empty ? nullptr : make_apex(H);
  Cat base = empty ? E.F.B : PH->apex();
  const Fin2Cat& XH = *base;
  auto hkey_obj = [&](int h) { return empty ? std::vector<int>{} : PH->b.okey[h]; };
  auto hkey_mor = [&](int s) { return empty ? std::vector<int>{} : PH->b.mkey[s]; };
  auto b_of = [&](int h) { return empty ? h : H[0].p.obj[PH->b.okey[h][0]]; };
  auto v_of = [&](int s) { return empty ? s : H[0].p.mor[PH->b.mkey[s][0]]; };
  auto tuple = [](int x0, const std::vector<int>& rest) {
    std::vector<int> t{x0};
    t.insert(t.end(), rest.begin(), rest.end());
    return t;
  };
  TwoFunctor F = empty ? g : left_boundary(H, *PH, g);
  TwoFunctor G = empty ? k : right_boundary(H, *PH, k);
  LaxTrans out{F, G, {}, {}};
  auto fail = [](const std::string& w) -> int { throw InconsistencyError("kan_factorize: " + w); };
  for (int h = 0; h < XH.n_obj(); ++h) {
    int b = b_of(h);
    TwoNat t{cx.psh.b.okey[g.obj[b]][0], cx.psh.b.okey[G.obj[h]][0], {}};
    std::vector<int> idh;
    if (!empty)
      for (int c = 0; c < int(H.size()); ++c) idh.push_back(H[c].apex()->idm[PH->b.okey[h][c]]);
    for (int a = 0; a < A.n_obj(); ++a) {
      const Fin2Cat& Fa = E.F.at(a, b);
      Fn1 f;
      for (int i = 0; i < Fa.n_obj(); ++i) {
        int x = P.b.obj(tuple(E.b.obj({a, i, b}), hkey_obj(h)));
        if (x < 0) fail("object missing from the path apex");
        f.obj.push_back(yoneda_ev(cx, phi.comp[x]));
      }
      for (int s = 0; s < Fa.n_mor(); ++s) {
        int m = P.b.mor(tuple(E.b.mor({A.idm[a], Fa.msrc[s], s, Fa.mtgt[s], B.idm[b]}), idh));
        if (m < 0) fail("morphism missing from the path apex");
        f.mor.push_back(yoneda_ev_cell(cx, phi.nat[m]));
      }
      t.comp.push_back(f);
    }
    int idx = cx.psh.nat_index(t);
    if (idx < 0) fail("component is not a 2-natural transformation");
    out.comp.push_back(idx);
  }
  for (int s = 0; s < XH.n_mor(); ++s) {
    int h = XH.msrc[s], h2 = XH.mtgt[s];
    int b = b_of(h), v = v_of(s);
    std::vector<std::vector<int>> mm;
    for (int a = 0; a < A.n_obj(); ++a) {
      std::vector<int> row;
      for (int i = 0; i < E.F.at(a, b).n_obj(); ++i) {
        int m = P.b.mor(tuple(lookup(E.span.rho_mor, E.b.obj({a, i, b}), v), hkey_mor(s)));
        if (m < 0) fail("morphism missing from the path apex");
        row.push_back(yoneda_ev_cell(cx, phi.nat[m]));
      }
      mm.push_back(row);
    }
    int src = M.comp(G.mor[s], out.comp[h]), tgt = M.comp(out.comp[h2], F.mor[s]);
    int c = cx.psh.mod_index(src, tgt, mm);
    if (c < 0) fail("naturality cell is not a modification");
    out.nat.push_back(c);
  }
  KanResult kr{out, {}};
  if (empty) {
    kr.report.merge(validate_lax(out, "factor"), "factor.");
    if (!is_strict(out)) kr.report.add("factor.strict", "phi'", "factor over the empty path is not 2-natural");
  } else {
    kr.report.merge(check_marked_lax(NullaryCell{H, g, k, out, PH}), "factor.");
  }
  if (!kr.report.ok()) return kr;
  TwoFunctor toH;
  if (empty) {
    toH = compose(E.span.q, P.proj[0]);
  } else {
    std::vector<TwoFunctor> hc(P.proj.begin() + 1, P.proj.end());
    toH = pair_into(*PH, hc);
  }
  LaxTrans lhs = whisker_right(elements_chi(E, cx, fam).phi, P.proj[0]);
  LaxTrans rhs = whisker_right(out, toH);
  rhs.F = lhs.G;
  if (!(compose_lax(rhs, lhs) == phi)) kr.report.add("kan.equation", "phi'", "chi then phi' differs from phi");
  return kr;
}

struct CellBijection {
  PshContext cx;
  Elements EJ, EK;
  int fj = 0, fk = 1;
  NullaryCell chiJ, chiK;
};

inline CellBijection make_cell_bijection(const IndexedCat& FJ, const IndexedCat& FK) {
  CellBijection cb{make_psh_context(FJ.A, {FJ, FK}), elements(FJ), elements(FK), 0, 1, {}, {}};
  cb.chiJ = elements_chi(cb.EJ, cb.cx, 0);
  cb.chiK = elements_chi(cb.EK, cb.cx, 1);
  return cb;
}

// phi: (E_J ⧺ H) => E_K over (id_A, s)  |->  psi: (H) => Psh over (g_J, g_K∘s).
inline KanResult cell_to_marked(const CellBijection& cb, const UnaryCell& phi, const std::vector<TwoSided>& H,
                                const TwoFunctor& s) {
  LaxTrans lhs = whisker_right(cb.chiK.phi, phi.phi);
  return kan_factorize(lhs, cb.EJ, cb.cx, cb.fj, H, compose(cb.cx.g[cb.fk], s));
}

// psi |-> phi, factoring chi_J ⋄ psi through chi_K.
inline UnaryCell marked_to_cell(const CellBijection& cb, const LaxTrans& psi, const std::vector<TwoSided>& H,
                                const TwoFunctor& s) {
  const PshContext& cx = cb.cx;
  const Fin2Cat& M = cx.psh.cat();
  std::vector<TwoSided> full{cb.EJ.span};
  full.insert(full.end(), H.begin(), H.end());
  ApexPtr P = make_apex(full);
  TwoFunctor toJ = P->proj[0], toH;
  if (H.empty()) {
    toH = compose(cb.EJ.span.q, toJ);
  } else {
    std::vector<TwoFunctor> hc(P->proj.begin() + 1, P->proj.end());
    toH = pair_into(*make_apex(H), hc);
  }
  LaxTrans a = whisker_right(cb.chiJ.phi, toJ);
  LaxTrans b = whisker_right(psi, toH);
  b.F = a.G;
  LaxTrans theta = compose_lax(b, a);
  const Elements& EK = cb.EK;
  const Fin2Cat &X = *P->apex(), &A = *EK.F.A;
  TwoFunctor fprime = compose(cb.EJ.span.p, toJ);
  TwoFunctor gprime = compose(s, compose(full.back().q, P->proj.back()));
  UnaryCell c{full, EK.span, identity_functor(EK.F.A), s, TwoFunctor{P->apex(), EK.b.cat, {}, {}, {}}, P};
  auto fail = [](const std::string& w) -> int { throw InconsistencyError("marked_to_cell: " + w); };
  for (int x = 0; x < X.n_obj(); ++x) {
    int o = EK.b.obj({fprime.obj[x], yoneda_ev(cx, theta.comp[x]), gprime.obj[x]});
    if (o < 0) fail("object image missing");
    c.phi.obj.push_back(o);
  }
  for (int m = 0; m < X.n_mor(); ++m) {
    auto &ks = EK.b.okey[c.phi.obj[X.msrc[m]]], &kt = EK.b.okey[c.phi.obj[X.mtgt[m]]];
    int mo = EK.b.mor({fprime.mor[m], ks[1], yoneda_ev_cell(cx, theta.nat[m]), kt[1], gprime.mor[m]});
    if (mo < 0) fail("morphism image missing");
    c.phi.mor.push_back(mo);
  }
  for (int cc = 0; cc < X.n_cell(); ++cc) {
    auto &k0 = EK.b.mkey[c.phi.mor[X.csrc[cc]]], &k1 = EK.b.mkey[c.phi.mor[X.ctgt[cc]]];
    int co = EK.b.cell({fprime.cell[cc], gprime.cell[cc], k0[1], k0[2], k1[2], k0[3]});
    if (co < 0) fail("cell image missing");
    c.phi.cell.push_back(co);
  }
  (void)M;
  (void)A;
  return c;
}

}  // namespace twocat
