#pragma once

#include "construct.hpp"
#include "shapes.hpp"

namespace twocat {

// ---------------------------------------------------------------------------
// Iterated pullbacks X1 ×_{M1} X2 ×_{M2} ... ×_{Mn-1} Xn

struct MultiPullback {
  std::vector<Cat> factors;
  std::vector<TwoFunctor> right, left;  // right[k]: X_k -> M_k, left[k]: X_{k+1} -> M_k
  Built b;
  std::vector<TwoFunctor> proj;

  const Cat& apex() const { return b.cat; }
  int arity() const { return int(factors.size()); }
};

namespace detail {

template <class Count, class Img, class Name, class Emit>
void tuples(int n, Count count, Img img, Name name, Emit emit, const std::vector<TwoFunctor>& right,
            const std::vector<TwoFunctor>& left) {
  // group each factor after the first by its left-leg image
  std::vector<std::unordered_map<int, std::vector<int>>> by_left(n);
  for (int k = 1; k < n; ++k)
    for (int x = 0; x < count(k); ++x) by_left[k][img(left[k - 1], x)].push_back(x);
  std::vector<int> cur(n);
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      std::vector<std::string> parts;
      for (int j = 0; j < n; ++j) parts.push_back(name(j, cur[j]));
      emit(cur, "<" + join(parts, ",") + ">");
      return;
    }
    if (k == 0) {
      for (int x = 0; x < count(0); ++x) {
        cur[0] = x;
        rec(1);
      }
      return;
    }
    auto it = by_left[k].find(img(right[k - 1], cur[k - 1]));
    if (it == by_left[k].end()) return;
    for (int x : it->second) {
      cur[k] = x;
      rec(k + 1);
    }
  };
  rec(0);
}

}  // namespace detail

inline MultiPullback multi_pullback(const std::vector<Cat>& factors, const std::vector<TwoFunctor>& right,
                                    const std::vector<TwoFunctor>& left) {
  const int n = int(factors.size());
  if (n == 0) throw StructuralError("multi_pullback of an empty family");
  if (int(right.size()) != n - 1 || int(left.size()) != n - 1)
    throw StructuralError("multi_pullback: leg count mismatch");
  for (int k = 0; k + 1 < n; ++k) {
    if (!TwoFunctor::same(right[k].src, factors[k]) || !TwoFunctor::same(left[k].src, factors[k + 1]) ||
        !TwoFunctor::same(right[k].tgt, left[k].tgt))
      throw StructuralError("multi_pullback: legs do not form a cospan chain at position " + std::to_string(k));
  }
  MultiPullback P{factors, right, left, {}, {}};
  if (n == 1) {
    const Fin2Cat& X = *factors[0];
    P.b.cat = factors[0];
    for (int i = 0; i < X.n_obj(); ++i) { P.b.okey.push_back({i}); P.b.oix.emplace(std::vector<int>{i}, i); }
    for (int i = 0; i < X.n_mor(); ++i) { P.b.mkey.push_back({i}); P.b.mix.emplace(std::vector<int>{i}, i); }
    for (int i = 0; i < X.n_cell(); ++i) { P.b.ckey.push_back({i}); P.b.cix.emplace(std::vector<int>{i}, i); }
    P.proj.push_back(identity_functor(factors[0]));
    return P;
  }
  RawBuild rb;
  std::vector<std::string> names;
  for (auto& f : factors) names.push_back(f->name);
  rb.c.name = join(names, " x ");
  detail::tuples(
      n, [&](int k) { return factors[k]->n_obj(); }, [](const TwoFunctor& F, int x) { return F.obj[x]; },
      [&](int k, int x) { return factors[k]->obj[x]; },
      [&](const std::vector<int>& t, std::string id) { rb.add_obj(std::move(id), t); }, right, left);
  detail::tuples(
      n, [&](int k) { return factors[k]->n_mor(); }, [](const TwoFunctor& F, int x) { return F.mor[x]; },
      [&](int k, int x) { return factors[k]->mor[x]; },
      [&](const std::vector<int>& t, std::string id) {
        std::vector<int> s(n), u(n);
        for (int k = 0; k < n; ++k) {
          s[k] = factors[k]->msrc[t[k]];
          u[k] = factors[k]->mtgt[t[k]];
        }
        rb.add_mor(std::move(id), t, rb.obj(s), rb.obj(u));
      },
      right, left);
  detail::tuples(
      n, [&](int k) { return factors[k]->n_cell(); }, [](const TwoFunctor& F, int x) { return F.cell[x]; },
      [&](int k, int x) { return factors[k]->cell[x]; },
      [&](const std::vector<int>& t, std::string id) {
        std::vector<int> s(n), u(n);
        for (int k = 0; k < n; ++k) {
          s[k] = factors[k]->csrc[t[k]];
          u[k] = factors[k]->ctgt[t[k]];
        }
        rb.add_cell(std::move(id), t, rb.mor(s), rb.mor(u));
      },
      right, left);
  for (int o = 0; o < rb.c.n_obj(); ++o) {
    std::vector<int> t(n);
    for (int k = 0; k < n; ++k) t[k] = factors[k]->idm[rb.okey[o][k]];
    rb.c.idm[o] = rb.mor(t);
  }
  for (int m = 0; m < rb.c.n_mor(); ++m) {
    std::vector<int> t(n);
    for (int k = 0; k < n; ++k) t[k] = factors[k]->idc[rb.mkey[m][k]];
    rb.c.idc[m] = rb.cell(t);
  }
  rb.c.reindex();
  auto pointwise = [&](const std::vector<std::vector<int>>& keys, const TupleIndex& ix, int a, int b, int which) {
    std::vector<int> t(n);
    for (int k = 0; k < n; ++k) {
      const Fin2Cat& X = *factors[k];
      t[k] = which == 0 ? X.comp(keys[a][k], keys[b][k]) : which == 1 ? X.vcomp(keys[a][k], keys[b][k])
                                                                     : X.hcomp(keys[a][k], keys[b][k]);
    }
    return lookup(ix, t);
  };
  fill_tables(
      rb.c, [&](int g, int f) { return pointwise(rb.mkey, rb.mix, g, f, 0); },
      [&](int a, int b) { return pointwise(rb.ckey, rb.cix, a, b, 1); },
      [&](int a, int b) { return pointwise(rb.ckey, rb.cix, a, b, 2); });
  P.b = rb.finish();
  for (int k = 0; k < n; ++k) {
    TwoFunctor pr{P.b.cat, factors[k], {}, {}, {}};
    for (auto& t : P.b.okey) pr.obj.push_back(t[k]);
    for (auto& t : P.b.mkey) pr.mor.push_back(t[k]);
    for (auto& t : P.b.ckey) pr.cell.push_back(t[k]);
    P.proj.push_back(std::move(pr));
  }
  return P;
}

inline MultiPullback pullback(const TwoFunctor& f, const TwoFunctor& g) {
  return multi_pullback({f.src, g.src}, {f}, {g});
}

// The 2-functor X -> P whose k-th component is comps[k].
inline TwoFunctor pair_into(const MultiPullback& P, const std::vector<TwoFunctor>& comps) {
  const int n = P.arity();
  if (int(comps.size()) != n) throw StructuralError("pair_into: wrong number of components");
  const Cat& X = comps[0].src;
  for (int k = 0; k < n; ++k)
    if (!TwoFunctor::same(comps[k].tgt, P.factors[k]) || !TwoFunctor::same(comps[k].src, X))
      throw StructuralError("pair_into: component " + std::to_string(k) + " has the wrong boundary");
  TwoFunctor F{X, P.apex(), {}, {}, {}};
  std::vector<int> t(n);
  auto need = [&](int r, const std::string& what) {
    if (r < 0) throw StructuralError("pair_into: components disagree over the shared boundary at " + what);
    return r;
  };
  for (int x = 0; x < X->n_obj(); ++x) {
    for (int k = 0; k < n; ++k) t[k] = comps[k].obj[x];
    F.obj.push_back(need(P.b.obj(t), X->obj[x]));
  }
  for (int x = 0; x < X->n_mor(); ++x) {
    for (int k = 0; k < n; ++k) t[k] = comps[k].mor[x];
    F.mor.push_back(need(P.b.mor(t), X->mor[x]));
  }
  for (int x = 0; x < X->n_cell(); ++x) {
    for (int k = 0; k < n; ++k) t[k] = comps[k].cell[x];
    F.cell.push_back(need(P.b.cell(t), X->cell[x]));
  }
  return F;
}

// maps[k]: P.factor k -> Q.factor k, assembled into P -> Q.
inline TwoFunctor pullback_map(const MultiPullback& P, const MultiPullback& Q, const std::vector<TwoFunctor>& maps) {
  std::vector<TwoFunctor> comps;
  for (int k = 0; k < P.arity(); ++k) comps.push_back(compose(maps[k], P.proj[k]));
  return pair_into(Q, comps);
}

// ---------------------------------------------------------------------------
// Lax comma f/g for f: A -> C, g: B -> C

// Objects (a, u: fa -> gb, b); morphisms (s, zeta, t) with
// zeta: gt∘u0 => u1∘fs; cells (sigma, tau) with
// zeta0 ⋄ (u1∘f sigma) = (g tau∘u0) ⋄ zeta1.
struct LaxComma {
  TwoFunctor f, g;
  Built b;
  TwoFunctor pA, pB;
  LaxTrans pi;  // f∘pA => g∘pB

  const Cat& apex() const { return b.cat; }
  // object key (a, u, b); morphism key (s, zeta, t, u0, u1);
  // cell key (sigma, tau, zeta0, zeta1, u0, u1)
  int obj_of(int a, int u, int bb) const { return b.obj({a, u, bb}); }
  int mor_of(int s, int z, int t, int u0, int u1) const { return b.mor({s, z, t, u0, u1}); }
  int cell_of(int sg, int tau, int z0, int z1, int u0, int u1) const { return b.cell({sg, tau, z0, z1, u0, u1}); }
  int ou(int x) const { return b.okey[x][1]; }
  int mz(int m) const { return b.mkey[m][1]; }
};

inline LaxComma lax_comma(const TwoFunctor& f, const TwoFunctor& g) {
  if (!TwoFunctor::same(f.tgt, g.tgt)) throw StructuralError("lax_comma: f and g have different codomains");
  const Fin2Cat &A = *f.src, &B = *g.src, &C = *f.tgt;
  RawBuild rb;
  rb.c.name = "(" + A.name + "/" + B.name + ")";
  std::map<std::pair<int, int>, std::vector<int>> by_ab;
  for (int a = 0; a < A.n_obj(); ++a)
    for (int b = 0; b < B.n_obj(); ++b)
      for (int u : C.hom(f.obj[a], g.obj[b])) {
        int o = rb.add_obj("(" + A.obj[a] + "|" + C.mor[u] + "|" + B.obj[b] + ")", {a, u, b});
        by_ab[{a, b}].push_back(o);
      }
  std::map<std::pair<int, int>, std::vector<int>> by_ends;
  const int nobj = rb.c.n_obj();
  for (int o0 = 0; o0 < nobj; ++o0) {
    int a0 = rb.okey[o0][0], u0 = rb.okey[o0][1], b0 = rb.okey[o0][2];
    for (int s : A.out(a0))
      for (int t : B.out(b0)) {
        auto it = by_ab.find({A.mtgt[s], B.mtgt[t]});
        if (it == by_ab.end()) continue;
        for (int o1 : it->second) {
          int u1 = rb.okey[o1][1];
          int X = C.comp(g.mor[t], u0), Y = C.comp(u1, f.mor[s]);
          for (int z : C.cells_between(X, Y)) {
            int m = rb.add_mor("(" + A.mor[s] + "|" + C.mor[u0] + ">" + C.cell[z] + ">" + C.mor[u1] + "|" + B.mor[t] + ")",
                               {s, z, t, u0, u1}, o0, o1);
            by_ends[{o0, o1}].push_back(m);
          }
        }
      }
  }
  for (auto& [ends, ms] : by_ends) {
    for (int m0 : ms)
      for (int m1 : ms) {
        auto &k0 = rb.mkey[m0], &k1 = rb.mkey[m1];
        int u0 = k0[3], u1 = k0[4];
        for (int sg : A.cells_between(k0[0], k1[0]))
          for (int tau : B.cells_between(k0[2], k1[2])) {
            int lhs = C.vcomp(k0[1], C.whl(u1, f.cell[sg]));
            int rhs = C.vcomp(C.whr(g.cell[tau], u0), k1[1]);
            if (lhs != rhs) continue;
            rb.add_cell("[" + A.cell[sg] + "|" + C.mor[u0] + ">" + C.cell[k0[1]] + ";" + C.cell[k1[1]] + ">" +
                            C.mor[u1] + "|" + B.cell[tau] + "]",
                        {sg, tau, k0[1], k1[1], u0, u1}, m0, m1);
          }
      }
  }
  for (int o = 0; o < nobj; ++o) {
    auto& k = rb.okey[o];
    rb.c.idm[o] = rb.mor({A.idm[k[0]], C.idc[k[1]], B.idm[k[2]], k[1], k[1]});
  }
  for (int m = 0; m < rb.c.n_mor(); ++m) {
    auto& k = rb.mkey[m];
    rb.c.idc[m] = rb.cell({A.idc[k[0]], B.idc[k[2]], k[1], k[1], k[3], k[4]});
  }
  rb.c.reindex();
  fill_tables(
      rb.c,
      [&](int m2, int m1) {
        auto &k1 = rb.mkey[m1], &k2 = rb.mkey[m2];
        int z = C.vcomp(C.whl(g.mor[k2[2]], k1[1]), C.whr(k2[1], f.mor[k1[0]]));
        return rb.mor({A.comp(k2[0], k1[0]), z, B.comp(k2[2], k1[2]), k1[3], k2[4]});
      },
      [&](int c1, int c2) {
        auto &k1 = rb.ckey[c1], &k2 = rb.ckey[c2];
        return rb.cell({A.vcomp(k1[0], k2[0]), B.vcomp(k1[1], k2[1]), k1[2], k2[3], k1[4], k1[5]});
      },
      [&](int c2, int c1) {
        const Fin2Cat& R = rb.c;
        int s = R.comp(R.csrc[c2], R.csrc[c1]), t = R.comp(R.ctgt[c2], R.ctgt[c1]);
        if (s < 0 || t < 0) return -1;
        auto &k1 = rb.ckey[c1], &k2 = rb.ckey[c2];
        return rb.cell({A.hcomp(k2[0], k1[0]), B.hcomp(k2[1], k1[1]), rb.mkey[s][1], rb.mkey[t][1], k1[4], k2[5]});
      });
  LaxComma L{f, g, rb.finish(), {}, {}, {}};
  const Built& b = L.b;
  L.pA = TwoFunctor{b.cat, f.src, {}, {}, {}};
  L.pB = TwoFunctor{b.cat, g.src, {}, {}, {}};
  for (auto& k : b.okey) { L.pA.obj.push_back(k[0]); L.pB.obj.push_back(k[2]); }
  for (auto& k : b.mkey) { L.pA.mor.push_back(k[0]); L.pB.mor.push_back(k[2]); }
  for (auto& k : b.ckey) { L.pA.cell.push_back(k[0]); L.pB.cell.push_back(k[1]); }
  L.pi = LaxTrans{compose(f, L.pA), compose(g, L.pB), {}, {}};
  for (auto& k : b.okey) L.pi.comp.push_back(k[1]);
  for (auto& k : b.mkey) L.pi.nat.push_back(k[1]);
  return L;
}

// The 2-functor X -> f/g induced by (fa, fb, lax) with lax: f∘fa => g∘fb.
inline TwoFunctor map_into(const LaxComma& L, const TwoFunctor& fa, const TwoFunctor& fb, const LaxTrans& lax) {
  const Fin2Cat& X = *fa.src;
  TwoFunctor F{fa.src, L.apex(), {}, {}, {}};
  auto need = [&](int r, const std::string& what) {
    if (r < 0) throw StructuralError("map_into: no comma element for " + what);
    return r;
  };
  for (int x = 0; x < X.n_obj(); ++x) F.obj.push_back(need(L.obj_of(fa.obj[x], lax.comp[x], fb.obj[x]), X.obj[x]));
  for (int m = 0; m < X.n_mor(); ++m)
    F.mor.push_back(need(L.mor_of(fa.mor[m], lax.nat[m], fb.mor[m], lax.comp[X.msrc[m]], lax.comp[X.mtgt[m]]), X.mor[m]));
  for (int c = 0; c < X.n_cell(); ++c) {
    int s = X.csrc[c], t = X.ctgt[c];
    F.cell.push_back(need(L.cell_of(fa.cell[c], fb.cell[c], lax.nat[s], lax.nat[t], lax.comp[X.msrc[s]],
                                    lax.comp[X.mtgt[s]]),
                          X.cell[c]));
  }
  return F;
}

// ---------------------------------------------------------------------------
// Lax arrow object A^2 with its internal-category structure

struct LaxArrow {
  LaxComma comma;      // id_A / id_A
  MultiPullback pair;  // A^2 ×_A A^2 along tgt, src
  TwoFunctor unit;     // A -> A^2
  TwoFunctor mult;     // A^2 ×_A A^2 -> A^2

  const Cat& apex() const { return comma.apex(); }
  const TwoFunctor& src() const { return comma.pA; }
  const TwoFunctor& tgt() const { return comma.pB; }
  const LaxTrans& delta() const { return comma.pi; }
};

inline LaxArrow lax_arrow(const Cat& A) {
  TwoFunctor id = identity_functor(A);
  LaxArrow R{lax_comma(id, id), {}, {}, {}};
  R.pair = multi_pullback({R.apex(), R.apex()}, {R.tgt()}, {R.src()});
  R.unit = map_into(R.comma, id, id, identity_lax(id));
  LaxTrans d1 = whisker_right(R.delta(), R.pair.proj[0]);
  LaxTrans d2 = whisker_right(R.delta(), R.pair.proj[1]);
  // tgt∘pi1 and src∘pi2 agree as 2-functors on the pullback
  d2.F = d1.G;
  R.mult = map_into(R.comma, compose(R.src(), R.pair.proj[0]), compose(R.tgt(), R.pair.proj[1]), compose_lax(d2, d1));
  return R;
}

// f^2 : A^2 -> C^2
inline TwoFunctor arrow_map(const LaxArrow& AA, const LaxArrow& CC, const TwoFunctor& f) {
  LaxTrans w = whisker_left(f, AA.delta());
  return map_into(CC.comma, compose(f, AA.src()), compose(f, AA.tgt()), w);
}

// ---------------------------------------------------------------------------
// 1-dimensional universal property of a comma cell

struct CommaCell {
  TwoFunctor f, g;    // f: A -> C, g: B -> C
  TwoFunctor pA, pB;  // from the apex
  LaxTrans pi;        // f∘pA => g∘pB
  const Cat& apex() const { return pA.src; }
};

inline CommaCell as_cell(const LaxComma& L) { return {L.f, L.g, L.pA, L.pB, L.pi}; }

struct Probe {
  TwoFunctor fa, fb;
  LaxTrans lax;
};

// Every (fa, fb, lax) on the given apex shapes, up to bound per shape.
inline std::vector<Probe> comma_probes(const TwoFunctor& f, const TwoFunctor& g, const std::vector<Cat>& shapes,
                                       std::size_t bound) {
  std::vector<Probe> out;
  for (const Cat& X : shapes) {
    std::size_t here = 0;
    auto FA = all_functors(X, f.src);
    auto FB = all_functors(X, g.src);
    for (auto& fa : FA) {
      for (auto& fb : FB) {
        if (here >= bound) break;
        TwoFunctor F = compose(f, fa), G = compose(g, fb);
        enumerate_lax(F, G, {}, [&](const LaxTrans& t) {
          out.push_back({fa, fb, t});
          return ++here < bound;
        });
      }
    }
  }
  return out;
}

inline const std::vector<Cat>& probe_shapes() {
  static const std::vector<Cat> s{make_cat(terminal_cat()), make_cat(arrow_cat()), make_cat(cell_cat())};
  return s;
}

// Number of 2-functors h: X -> apex with pA∘h = fa, pB∘h = fb, pi∘h = lax
// (counting stops at 2).
inline std::size_t count_comma_factorizations(const CommaCell& cc, const Probe& pr) {
  FunctorFilters flt;
  flt.obj = [&](int x, int y) {
    return cc.pA.obj[y] == pr.fa.obj[x] && cc.pB.obj[y] == pr.fb.obj[x] && cc.pi.comp[y] == pr.lax.comp[x];
  };
  flt.mor = [&](int m, int n) {
    return cc.pA.mor[n] == pr.fa.mor[m] && cc.pB.mor[n] == pr.fb.mor[m] && cc.pi.nat[n] == pr.lax.nat[m];
  };
  flt.cell = [&](int c, int d) { return cc.pA.cell[d] == pr.fa.cell[c] && cc.pB.cell[d] == pr.fb.cell[c]; };
  return enumerate_functors(pr.fa.src, cc.apex(), flt, [](const TwoFunctor&) { return true; }, 2);
}

// Checks a candidate comma cell: well-formedness, the iterated-pullback
// presentation A ×_C C^2 ×_C B, and unique factorization of every probe.
inline Report check_comma_1univ(const CommaCell& cc, const std::vector<Probe>* extra = nullptr,
                                std::size_t bound = settings().probe_bound) {
  Report r;
  r.merge(validate_2functor(cc.pA, "pA"));
  r.merge(validate_2functor(cc.pB, "pB"));
  if (!r.ok()) return r;
  if (!(cc.pi.F == compose(cc.f, cc.pA)) || !(cc.pi.G == compose(cc.g, cc.pB))) {
    r.add("comma.boundary", "pi", "comma cell does not lie over f∘pA and g∘pB");
    return r;
  }
  r.merge(validate_lax(cc.pi, "pi"));
  if (!r.ok()) return r;

  LaxArrow CC = lax_arrow(cc.f.tgt);
  MultiPullback IP = multi_pullback({cc.f.src, CC.apex(), cc.g.src}, {cc.f, CC.tgt()}, {CC.src(), cc.g});
  try {
    TwoFunctor mid = map_into(CC.comma, compose(cc.f, cc.pA), compose(cc.g, cc.pB), cc.pi);
    TwoFunctor iso = pair_into(IP, {cc.pA, mid, cc.pB});
    if (!is_iso(iso)) r.add("comma.pullback_iso", "apex", "apex is not isomorphic to A ×_C C^2 ×_C B");
  } catch (const StructuralError& e) {
    r.add("comma.pullback_iso", "apex", e.what());
  }

  Probe self{cc.pA, cc.pB, cc.pi};
  auto judge = [&](const Probe& pr, const std::string& where) {
    std::size_t n = count_comma_factorizations(cc, pr);
    if (n == 0) r.add("comma.exists", where, "probe has no factorization through the comma cell");
    if (n > 1) r.add("comma.unique", where, "probe has more than one factorization");
  };
  judge(self, "self");
  auto probes = comma_probes(cc.f, cc.g, probe_shapes(), bound);
  for (std::size_t i = 0; i < probes.size(); ++i) judge(probes[i], probes[i].fa.src->name + "#" + std::to_string(i));
  if (extra)
    for (std::size_t i = 0; i < extra->size(); ++i) judge((*extra)[i], "extra#" + std::to_string(i));
  return r;
}

}  // namespace twocat
