#pragma once

#include "fib.hpp"

namespace twocat {

// Context for the action form of a cleavage of q: J -> B. Built once per
// functor and reused for every cleavage on it.
struct ActionContext {
  TwoFunctor q;
  LaxComma qB;     // q / id_B
  LaxArrow BB;     // B^2
  MultiPullback JB;   // J ×_B B^2 (q, src)
  MultiPullback JBB;  // J ×_B B^2 ×_B B^2
  TwoFunctor to_pb;   // qB -> JB, (i|u|b) |-> <i, (qi|u|b)>
  TwoFunctor from_pb; // inverse
};

inline ActionContext make_action_context(const TwoFunctor& q) {
  ActionContext cx;
  cx.q = q;
  cx.qB = lax_comma(q, identity_functor(q.tgt));
  cx.BB = lax_arrow(q.tgt);
  cx.JB = multi_pullback({q.src, cx.BB.apex()}, {q}, {cx.BB.src()});
  cx.JBB = multi_pullback({q.src, cx.BB.apex(), cx.BB.apex()}, {q, cx.BB.tgt()}, {cx.BB.src(), cx.BB.src()});
  TwoFunctor mid = map_into(cx.BB.comma, compose(q, cx.qB.pA), cx.qB.pB, cx.qB.pi);
  cx.to_pb = pair_into(cx.JB, {cx.qB.pA, mid});
  if (!is_iso(cx.to_pb)) throw InconsistencyError("q/B is not isomorphic to J ×_B B^2");
  cx.from_pb = inverse(cx.to_pb);
  return cx;
}

struct ActionResult {
  std::optional<TwoFunctor> act;  // q/B -> J
  Report report;
};

// The right action determined by a cleavage. Morphisms and cells of q/B are
// sent to the unique factorizations through the chosen lifts.
inline ActionResult cleavage_to_action(const ActionContext& cx, const Cleavage& c) {
  ActionResult out;
  Report& r = out.report;
  const LaxComma& L = cx.qB;
  const Fin2Cat &X = *L.apex(), &J = *cx.q.src, &B = *cx.q.tgt;
  const TwoFunctor& q = cx.q;
  TwoFunctor F{L.apex(), cx.q.src, std::vector<int>(X.n_obj(), -1), std::vector<int>(X.n_mor(), -1),
               std::vector<int>(X.n_cell(), -1)};
  auto lift = [&](int i, int u) {
    int l = c.lift(i, u);
    return J.ok_mor(l) ? l : -1;
  };
  for (int x = 0; x < X.n_obj(); ++x) {
    int l = lift(L.b.okey[x][0], L.b.okey[x][1]);
    if (l < 0) { r.add("action.obj", "rho", "missing lift", {X.obj[x]}); return out; }
    F.obj[x] = J.mtgt[l];
  }
  // X_m = beta*(rho(j,v)∘s) for m = (s, beta, t): (i|u|b) -> (j|v|c)
  std::vector<int> Xm(X.n_mor(), -1), Ym(X.n_mor(), -1);
  for (int m = 0; m < X.n_mor(); ++m) {
    auto& k = L.b.mkey[m];
    int s = k[0], be = k[1], t = k[2], u = k[3], v = k[4];
    int i = J.msrc[s], j = J.mtgt[s];
    int li = lift(i, u), lj = lift(j, v);
    if (li < 0 || lj < 0) { r.add("action.mor", "rho", "missing lift", {X.mor[m]}); return out; }
    int ys = J.comp(lj, s);
    int cl = c.clift(be, ys);
    if (!J.ok_cell(cl) || J.ctgt[cl] != ys) { r.add("action.mor", "rho", "missing cell lift", {X.mor[m]}); return out; }
    Xm[m] = J.csrc[cl];
    Ym[m] = ys;
    std::vector<int> hits;
    for (int w : J.hom(F.obj[X.msrc[m]], F.obj[X.mtgt[m]]))
      if (q.mor[w] == t && J.comp(w, li) == Xm[m]) hits.push_back(w);
    if (hits.size() != 1) { r.add("action.mor", "rho", "no unique factorization for a morphism", {X.mor[m]}); return out; }
    F.mor[m] = hits[0];
  }
  for (int x = 0; x < X.n_cell(); ++x) {
    auto& k = L.b.ckey[x];
    int sg = k[0], tau = k[1];
    int m1 = X.csrc[x], m2 = X.ctgt[x];
    int u = L.b.mkey[m1][3], v = L.b.mkey[m1][4];
    int s1 = L.b.mkey[m1][0];
    int i = J.msrc[s1], j = J.mtgt[s1];
    int li = lift(i, u), lj = lift(j, v);
    int b1 = L.b.mkey[m1][1], b2 = L.b.mkey[m2][1];
    int rhs = J.vcomp(c.clift(b1, Ym[m1]), J.whl(lj, sg));
    std::vector<int> hits;
    for (int kk : J.cells_between(Xm[m1], Xm[m2]))
      if (q.cell[kk] == B.whr(tau, u) && J.vcomp(kk, c.clift(b2, Ym[m2])) == rhs) hits.push_back(kk);
    if (hits.size() != 1) { r.add("action.cell", "rho", "no unique cartesian factorization for a cell", {X.cell[x]}); return out; }
    int kap = hits[0];
    std::vector<int> h2;
    for (int tt : J.cells_between(F.mor[m1], F.mor[m2]))
      if (q.cell[tt] == tau && J.whr(tt, li) == kap) h2.push_back(tt);
    if (h2.size() != 1) { r.add("action.cell", "rho", "no unique opcartesian factorization for a cell", {X.cell[x]}); return out; }
    F.cell[x] = h2[0];
  }
  out.act = std::move(F);
  return out;
}

inline Cleavage action_to_cleavage(const ActionContext& cx, const TwoFunctor& act) {
  const LaxComma& L = cx.qB;
  const Fin2Cat &J = *cx.q.src, &B = *cx.q.tgt;
  const TwoFunctor& q = cx.q;
  Cleavage c{q, {}, {}};
  for (int i = 0; i < J.n_obj(); ++i) {
    int b0 = q.obj[i], id0 = B.idm[b0];
    for (int u : B.out(b0)) {
      int m = L.mor_of(J.idm[i], B.idc[u], u, id0, u);
      if (m < 0) throw InconsistencyError("action_to_cleavage: no comma morphism for a lift");
      c.mor[key2(i, u)] = act.mor[m];
    }
  }
  for (int s = 0; s < J.n_mor(); ++s) {
    int qs = q.mor[s];
    int ida = B.idm[q.obj[J.msrc[s]]], idb = B.idm[q.obj[J.mtgt[s]]];
    for (int be : B.cells_to(qs)) {
      int u = B.csrc[be];
      int x = L.cell_of(J.idc[s], be, be, B.idc[qs], ida, idb);
      if (x < 0) throw InconsistencyError("action_to_cleavage: no comma cell for a lift");
      (void)u;
      c.cell[key2(be, s)] = act.cell[x];
    }
  }
  return c;
}

// Associativity, unit and span-morphism laws for an action in pullback form
// JB -> J.
inline Report check_right_action(const ActionContext& cx, const TwoFunctor& act_pb, const TwoFunctor* p = nullptr,
                                 const std::string& where = "rho") {
  Report r;
  r.merge(validate_2functor(act_pb, where + ".action"));
  if (!r.ok()) return r;
  const MultiPullback &JB = cx.JB, &JBB = cx.JBB;
  TwoFunctor idJ = identity_functor(cx.q.src);
  // unit
  TwoFunctor ins = pair_into(JB, {idJ, compose(cx.BB.unit, cx.q)});
  if (!(compose(act_pb, ins) == idJ)) r.add("action.unit", where, "acting by identities is not the identity");
  // associativity
  MultiPullback BB2 = cx.BB.pair;
  TwoFunctor p23 = pair_into(BB2, {JBB.proj[1], JBB.proj[2]});
  TwoFunctor lhs_in = pair_into(JB, {JBB.proj[0], compose(cx.BB.mult, p23)});
  TwoFunctor p12 = pair_into(JB, {JBB.proj[0], JBB.proj[1]});
  TwoFunctor rhs_in = pair_into(JB, {compose(act_pb, p12), JBB.proj[2]});
  if (!(compose(act_pb, lhs_in) == compose(act_pb, rhs_in))) r.add("action.assoc", where, "action is not associative");
  // span morphism
  if (!(compose(cx.q, act_pb) == compose(cx.BB.tgt(), JB.proj[1]))) r.add("action.span", where, "q∘rho differs from tgt∘pi2");
  if (p && !(compose(*p, act_pb) == compose(*p, JB.proj[0]))) r.add("action.span", where, "p∘rho differs from p∘pi1");
  return r;
}

// Left-action context: the coop dual of the right-action context of p,
// with the identification A^2 ×_A J ≅ (p^coop / A^coop)^coop.
struct LeftContext {
  ActionContext co;   // for p^coop
  LaxArrow AA;
  MultiPullback AJ;   // A^2 ×_A J (tgt, p)
  MultiPullback AAJ;  // A^2 ×_A A^2 ×_A J
  std::vector<int> corr_obj, corr_mor, corr_cell;  // AJ element -> p^coop/A^coop element
};

inline LeftContext make_left_context(const TwoFunctor& p) {
  LeftContext lc;
  lc.co = make_action_context(dualize(p, Variant::coop));
  lc.AA = lax_arrow(p.tgt);
  lc.AJ = multi_pullback({lc.AA.apex(), p.src}, {lc.AA.tgt()}, {p});
  lc.AAJ = multi_pullback({lc.AA.apex(), lc.AA.apex(), p.src}, {lc.AA.tgt(), lc.AA.tgt()}, {lc.AA.src(), p});
  const LaxComma &K = lc.co.qB, &Ar = lc.AA.comma;
  const Fin2Cat& X = *lc.AJ.apex();
  for (int x = 0; x < X.n_obj(); ++x) {
    auto& t = lc.AJ.b.okey[x];
    auto& ao = Ar.b.okey[t[0]];
    lc.corr_obj.push_back(K.obj_of(t[1], ao[1], ao[0]));
  }
  for (int m = 0; m < X.n_mor(); ++m) {
    auto& t = lc.AJ.b.mkey[m];
    auto& am = Ar.b.mkey[t[0]];
    lc.corr_mor.push_back(K.mor_of(t[1], am[1], am[0], am[4], am[3]));
  }
  for (int c = 0; c < X.n_cell(); ++c) {
    auto& t = lc.AJ.b.ckey[c];
    auto& ac = Ar.b.ckey[t[0]];
    lc.corr_cell.push_back(K.cell_of(t[1], ac[0], ac[3], ac[2], ac[5], ac[4]));
  }
  for (auto* v : {&lc.corr_obj, &lc.corr_mor, &lc.corr_cell})
    for (int i : *v)
      if (i < 0) throw InconsistencyError("left action identification is not total");
  return lc;
}

// act: p^coop / A^coop -> J^coop, read as A^2 ×_A J -> J.
inline TwoFunctor left_action_pb(const LeftContext& lc, const TwoFunctor& act, const Cat& J) {
  TwoFunctor F{lc.AJ.apex(), J, {}, {}, {}};
  for (int x : lc.corr_obj) F.obj.push_back(act.obj[x]);
  for (int x : lc.corr_mor) F.mor.push_back(act.mor[x]);
  for (int x : lc.corr_cell) F.cell.push_back(act.cell[x]);
  return F;
}

inline Report check_left_action(const LeftContext& lc, const TwoFunctor& lam_pb, const TwoFunctor& p,
                                const TwoFunctor& q) {
  Report r;
  r.merge(validate_2functor(lam_pb, "lambda.action"));
  if (!r.ok()) return r;
  const MultiPullback &AJ = lc.AJ, &AAJ = lc.AAJ;
  TwoFunctor idJ = identity_functor(p.src);
  TwoFunctor ins = pair_into(AJ, {compose(lc.AA.unit, p), idJ});
  if (!(compose(lam_pb, ins) == idJ)) r.add("action.unit", "lambda", "acting by identities is not the identity");
  TwoFunctor p12 = pair_into(lc.AA.pair, {AAJ.proj[0], AAJ.proj[1]});
  TwoFunctor lhs_in = pair_into(AJ, {compose(lc.AA.mult, p12), AAJ.proj[2]});
  TwoFunctor p23 = pair_into(AJ, {AAJ.proj[1], AAJ.proj[2]});
  TwoFunctor rhs_in = pair_into(AJ, {AAJ.proj[0], compose(lam_pb, p23)});
  if (!(compose(lam_pb, lhs_in) == compose(lam_pb, rhs_in))) r.add("action.assoc", "lambda", "action is not associative");
  if (!(compose(p, lam_pb) == compose(lc.AA.src(), AJ.proj[0]))) r.add("action.span", "lambda", "p∘lambda differs from src∘pi1");
  if (!(compose(q, lam_pb) == compose(q, AJ.proj[1]))) r.add("action.span", "lambda", "q∘lambda differs from q∘pi2");
  return r;
}

// Independent route for two-sided fibrations: derive both actions from the
// tables, check the action laws and their compatibility, and require the
// action-to-cleavage map to reproduce the tables.
struct TwoSidedOracle {
  ActionContext right;
  LeftContext left;
  MultiPullback AJB;  // A^2 ×_A J ×_B B^2
};

inline TwoSidedOracle make_twosided_oracle(const TwoFunctor& p, const TwoFunctor& q) {
  TwoSidedOracle o{make_action_context(q), make_left_context(p), {}};
  o.AJB = multi_pullback({o.left.AA.apex(), p.src, o.right.BB.apex()}, {o.left.AA.tgt(), q},
                         {p, o.right.BB.src()});
  return o;
}

inline Report oracle_twosided(const TwoSidedOracle& o, const TwoSided& t) {
  Report r;
  r.merge(validate_2functor(t.p, "p"));
  r.merge(validate_2functor(t.q, "q"));
  if (!r.ok()) return r;
  Cleavage rc = t.right();
  ActionResult ra = cleavage_to_action(o.right, rc);
  r.merge(ra.report);
  Cleavage lc = t.left_coop();
  ActionResult la = cleavage_to_action(o.left.co, lc);
  r.merge(la.report, "co.");
  if (!ra.act || !la.act) return r;
  r.merge(validate_2functor(*ra.act, "rho.action"));
  r.merge(validate_2functor(*la.act, "lambda.action"));
  if (!r.ok()) return r;
  if (!(action_to_cleavage(o.right, *ra.act) == rc)) r.add("action.roundtrip", "rho", "tables differ from the cleavage of their action");
  if (!(action_to_cleavage(o.left.co, *la.act) == lc)) r.add("action.roundtrip", "lambda", "tables differ from the cocleavage of their action");
  if (!r.ok()) return r;
  TwoFunctor rho_pb = compose(*ra.act, o.right.from_pb);
  TwoFunctor lam_pb = left_action_pb(o.left, *la.act, t.apex());
  r.merge(check_right_action(o.right, rho_pb, &t.p));
  r.merge(check_left_action(o.left, lam_pb, t.p, t.q));
  if (!r.ok()) return r;
  const MultiPullback& X = o.AJB;
  TwoFunctor l12 = compose(lam_pb, pair_into(o.left.AJ, {X.proj[0], X.proj[1]}));
  TwoFunctor lhs = compose(rho_pb, pair_into(o.right.JB, {l12, X.proj[2]}));
  TwoFunctor r23 = compose(rho_pb, pair_into(o.right.JB, {X.proj[1], X.proj[2]}));
  TwoFunctor rhs = compose(lam_pb, pair_into(o.left.AJ, {X.proj[0], r23}));
  if (!(lhs == rhs)) r.add("action.compat", "lambda/rho", "left and right actions do not commute");
  return r;
}

// Single-sided oracle for a split op-fibration.
inline Report oracle_opfib(const ActionContext& cx, const Cleavage& c) {
  Report r;
  ActionResult ra = cleavage_to_action(cx, c);
  r.merge(ra.report);
  if (!ra.act) return r;
  r.merge(validate_2functor(*ra.act, "rho.action"));
  if (!r.ok()) return r;
  if (!(action_to_cleavage(cx, *ra.act) == c)) r.add("action.roundtrip", "rho", "tables differ from the cleavage of their action");
  if (!r.ok()) return r;
  r.merge(check_right_action(cx, compose(*ra.act, cx.from_pb)));
  return r;
}

// Oracle entry point for arbitrary input: the legs are validated before the
// action contexts are built from them.
inline Report check_twosided_oracle(const TwoSided& t) {
  Report r;
  r.merge(validate_2functor(t.p, "p"));
  r.merge(validate_2functor(t.q, "q"));
  if (!r.ok()) return r;
  return oracle_twosided(make_twosided_oracle(t.p, t.q), t);
}

}  // namespace twocat
