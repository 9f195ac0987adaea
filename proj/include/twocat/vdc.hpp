#pragma once

#include "action.hpp"

namespace twocat {

// Apex of a path J1, ..., Jn of spans: J1 ×_{A1} J2 ×_{A2} ... ×_{An-1} Jn.
inline MultiPullback path_apex(const std::vector<TwoSided>& path, std::size_t lo = 0, std::size_t hi = SIZE_MAX) {
  if (hi == SIZE_MAX) hi = path.size();
  if (lo >= hi) throw StructuralError("empty path");
  std::vector<Cat> f;
  std::vector<TwoFunctor> right, left;
  for (std::size_t k = lo; k < hi; ++k) {
    f.push_back(path[k].apex());
    if (k + 1 < hi) {
      if (!TwoFunctor::same(path[k].B(), path[k + 1].A()))
        throw StructuralError("path is not composable at position " + std::to_string(k));
      right.push_back(path[k].q);
      left.push_back(path[k + 1].p);
    }
  }
  return multi_pullback(f, right, left);
}

using ApexPtr = std::shared_ptr<const MultiPullback>;

// Unary cell (J1, ..., Jn) => K over f: A0 -> C, g: An -> D. The underlying
// span morphism is phi: apex(path) -> apex(K).
struct UnaryCell {
  std::vector<TwoSided> path;
  TwoSided K;
  TwoFunctor f, g;
  TwoFunctor phi;
  ApexPtr P;
};

// Nullary cell (J1, ..., Jn) => C over f: A0 -> C, g: An -> C, given as a
// lax transformation f∘p1∘pi1 => g∘qn∘pin on apex(path).
struct NullaryCell {
  std::vector<TwoSided> path;
  TwoFunctor f, g;
  LaxTrans phi;
  ApexPtr P;
};

inline ApexPtr make_apex(const std::vector<TwoSided>& path) {
  return std::make_shared<const MultiPullback>(path_apex(path));
}

inline TwoFunctor left_boundary(const std::vector<TwoSided>& path, const MultiPullback& P, const TwoFunctor& f) {
  return compose(f, compose(path.front().p, P.proj.front()));
}
inline TwoFunctor right_boundary(const std::vector<TwoSided>& path, const MultiPullback& P, const TwoFunctor& g) {
  return compose(g, compose(path.back().q, P.proj.back()));
}

namespace detail {

inline std::vector<int> ids_except(const MultiPullback& P, const std::vector<int>& key, int kind) {
  std::vector<int> t(key.size());
  for (std::size_t k = 0; k < key.size(); ++k) {
    const Fin2Cat& X = *P.factors[k];
    t[k] = kind == 0 ? X.idm[key[k]] : X.idc[key[k]];
  }
  return t;
}

}  // namespace detail

// The six conditions on a span morphism out of a path apex.
inline Report check_unary_cell(const UnaryCell& c) {
  Report r;
  const MultiPullback& P = *c.P;
  const int n = int(c.path.size());
  if (!TwoFunctor::same(c.phi.src, P.apex()) || !TwoFunctor::same(c.phi.tgt, c.K.apex())) {
    r.add("structural.boundary", "phi", "underlying 2-functor does not go from the path apex to the target");
    return r;
  }
  r.merge(validate_2functor(c.phi, "phi"));
  if (!r.ok()) return r;
  if (!(compose(c.K.p, c.phi) == left_boundary(c.path, P, c.f)))
    r.add("span.left", "phi", "p_K∘phi differs from f∘p1∘pi1");
  if (!(compose(c.K.q, c.phi) == right_boundary(c.path, P, c.g)))
    r.add("span.right", "phi", "q_K∘phi differs from g∘qn∘pin");
  if (!r.ok()) return r;
  const Fin2Cat &X = *P.apex(), &Kx = *c.K.apex();
  const TwoSided &J1 = c.path.front(), &Jn = c.path.back();
  const Fin2Cat &A0 = *J1.A(), &An = *Jn.B();
  const TwoFunctor &f = c.f, &g = c.g, &phi = c.phi;
  auto need = [&](int x, const char* what, const std::string& w) {
    if (x < 0) r.add("structural.apex", w, std::string("tuple missing from the path apex: ") + what);
    return x;
  };
  // (pcm), (poc)
  for (int x = 0; x < X.n_obj(); ++x) {
    auto t = detail::ids_except(P, P.b.okey[x], 0);
    int i1 = P.b.okey[x][0];
    for (int u : A0.in(J1.p.obj[i1])) {
      t[0] = lookup(J1.lam_mor, i1, u);
      int m = need(P.b.mor(t), "lam", X.obj[x]);
      if (m >= 0 && phi.mor[m] != lookup(c.K.lam_mor, phi.obj[x], f.mor[u]))
        r.add("pcm", X.obj[x], "cartesian lift in the first span is not preserved", {A0.mor[u]});
    }
  }
  for (int s = 0; s < X.n_mor(); ++s) {
    auto t = detail::ids_except(P, P.b.mkey[s], 1);
    int s1 = P.b.mkey[s][0];
    for (int al : A0.cells_from(J1.p.mor[s1])) {
      t[0] = lookup(J1.lam_cell, al, s1);
      int x = need(P.b.cell(t), "lam cell", X.mor[s]);
      if (x >= 0 && phi.cell[x] != lookup(c.K.lam_cell, f.cell[al], phi.mor[s]))
        r.add("poc", X.mor[s], "cell lift in the first span is not preserved", {A0.cell[al]});
    }
  }
  // (pom), (pcc)
  for (int x = 0; x < X.n_obj(); ++x) {
    auto t = detail::ids_except(P, P.b.okey[x], 0);
    int in = P.b.okey[x][n - 1];
    for (int v : An.out(Jn.q.obj[in])) {
      t[n - 1] = lookup(Jn.rho_mor, in, v);
      int m = need(P.b.mor(t), "rho", X.obj[x]);
      if (m >= 0 && phi.mor[m] != lookup(c.K.rho_mor, phi.obj[x], g.mor[v]))
        r.add("pom", X.obj[x], "opcartesian lift in the last span is not preserved", {An.mor[v]});
    }
  }
  for (int s = 0; s < X.n_mor(); ++s) {
    auto t = detail::ids_except(P, P.b.mkey[s], 1);
    int sn = P.b.mkey[s][n - 1];
    for (int be : An.cells_to(Jn.q.mor[sn])) {
      t[n - 1] = lookup(Jn.rho_cell, be, sn);
      int x = need(P.b.cell(t), "rho cell", X.mor[s]);
      if (x >= 0 && phi.cell[x] != lookup(c.K.rho_cell, g.cell[be], phi.mor[s]))
        r.add("pcc", X.mor[s], "cell lift in the last span is not preserved", {An.cell[be]});
    }
  }
  // (iem), (iec) at each junction
  for (int m = 0; m + 1 < n; ++m) {
    const TwoSided &Jm = c.path[m], &Jm1 = c.path[m + 1];
    const Fin2Cat& Am = *Jm.B();
    MultiPullback Pre = path_apex(c.path, 0, m + 1), Suf = path_apex(c.path, m + 1, n);
    for (int a = 0; a < Pre.apex()->n_obj(); ++a)
      for (int b = 0; b < Suf.apex()->n_obj(); ++b) {
        auto ka = Pre.b.okey[a], kb = Suf.b.okey[b];
        int im = ka.back(), im1 = kb.front();
        for (int u : Am.hom(Jm.q.obj[im], Jm1.p.obj[im1])) {
          std::vector<int> t;
          for (std::size_t k = 0; k < ka.size(); ++k) t.push_back(c.path[k].apex()->idm[ka[k]]);
          for (std::size_t k = 0; k < kb.size(); ++k) t.push_back(c.path[m + 1 + k].apex()->idm[kb[k]]);
          t[m] = lookup(Jm.rho_mor, im, u);
          t[m + 1] = lookup(Jm1.lam_mor, im1, u);
          int mm = need(P.b.mor(t), "rho/lam", Am.mor[u]);
          if (mm >= 0 && !Kx.is_id_mor(phi.mor[mm]))
            r.add("iem", X.mor[mm], "interior lift pair is not sent to an identity", {Am.mor[u]});
        }
      }
    for (int a = 0; a < Pre.apex()->n_mor(); ++a)
      for (int b = 0; b < Suf.apex()->n_mor(); ++b) {
        auto ka = Pre.b.mkey[a], kb = Suf.b.mkey[b];
        int sm = ka.back(), sm1 = kb.front();
        for (int al : Am.cells_between(Jm1.p.mor[sm1], Jm.q.mor[sm])) {
          std::vector<int> t;
          for (std::size_t k = 0; k < ka.size(); ++k) t.push_back(c.path[k].apex()->idc[ka[k]]);
          for (std::size_t k = 0; k < kb.size(); ++k) t.push_back(c.path[m + 1 + k].apex()->idc[kb[k]]);
          t[m] = lookup(Jm.rho_cell, al, sm);
          t[m + 1] = lookup(Jm1.lam_cell, al, sm1);
          int xx = need(P.b.cell(t), "rho/lam cell", Am.cell[al]);
          if (xx >= 0 && !Kx.is_id_cell(phi.cell[xx]))
            r.add("iec", X.cell[xx], "interior cell lift pair is not sent to an identity", {Am.cell[al]});
        }
      }
  }
  if (!r.ok()) {
    bool only2 = !r.has("pcm") && !r.has("iem") && !r.has("pom") && !r.has_prefix("structural") && !r.has_prefix("span");
    if (only2 && is_locally_discrete(c.K).jr)
      r.add("automatic", "phi", "a 2-dimensional condition failed although the target is locally discrete");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Equivariance oracle

struct SpanActions {
  ActionContext right;
  LeftContext left;
  TwoFunctor rho_pb, lam_pb;
};

inline SpanActions span_actions(const TwoSided& t) {
  SpanActions s{make_action_context(t.q), make_left_context(t.p), {}, {}};
  ActionResult ra = cleavage_to_action(s.right, t.right());
  ActionResult la = cleavage_to_action(s.left.co, t.left_coop());
  if (!ra.act || !la.act) throw StructuralError("span has no action form; its cleavage is invalid");
  s.rho_pb = compose(*ra.act, s.right.from_pb);
  s.lam_pb = left_action_pb(s.left, *la.act, t.apex());
  return s;
}

// A span morphism is a cell iff it commutes with the outer actions and
// coequalizes the two interior actions at every junction.
inline Report oracle_unary_cell(const UnaryCell& c) {
  Report r;
  const MultiPullback& P = *c.P;
  const int n = int(c.path.size());
  if (!TwoFunctor::same(c.phi.src, P.apex()) || !TwoFunctor::same(c.phi.tgt, c.K.apex())) {
    r.add("structural.boundary", "phi", "underlying 2-functor does not go from the path apex to the target");
    return r;
  }
  r.merge(validate_2functor(c.phi, "phi"));
  if (!r.ok()) return r;
  if (!(compose(c.K.p, c.phi) == left_boundary(c.path, P, c.f)) ||
      !(compose(c.K.q, c.phi) == right_boundary(c.path, P, c.g))) {
    r.add("span", "phi", "not a span morphism over the vertical boundary");
    return r;
  }
  std::vector<SpanActions> acts;
  for (auto& J : c.path) acts.push_back(span_actions(J));
  SpanActions kact = span_actions(c.K);
  std::vector<Cat> fac;
  for (auto& J : c.path) fac.push_back(J.apex());
  // left equivariance on A0^2 ×_{A0} P
  {
    const LeftContext& L1 = acts.front().left;
    std::vector<Cat> f2{L1.AA.apex()};
    f2.insert(f2.end(), fac.begin(), fac.end());
    std::vector<TwoFunctor> right{L1.AA.tgt()}, left{c.path[0].p};
    for (int k = 0; k + 1 < n; ++k) { right.push_back(c.path[k].q); left.push_back(c.path[k + 1].p); }
    MultiPullback D = multi_pullback(f2, right, left);
    std::vector<TwoFunctor> comps{compose(acts[0].lam_pb, pair_into(L1.AJ, {D.proj[0], D.proj[1]}))};
    for (int k = 1; k < n; ++k) comps.push_back(D.proj[k + 1]);
    TwoFunctor lhs = compose(c.phi, pair_into(P, comps));
    std::vector<TwoFunctor> rest(D.proj.begin() + 1, D.proj.end());
    TwoFunctor phirest = compose(c.phi, pair_into(P, rest));
    TwoFunctor fbar = arrow_map(L1.AA, kact.left.AA, c.f);
    TwoFunctor rhs = compose(kact.lam_pb, pair_into(kact.left.AJ, {compose(fbar, D.proj[0]), phirest}));
    if (!(lhs == rhs)) r.add("equivariance.left", "phi", "phi does not commute with the left actions");
  }
  // right equivariance on P ×_{An} An^2
  {
    const ActionContext& Rn = acts.back().right;
    std::vector<Cat> f2 = fac;
    f2.push_back(Rn.BB.apex());
    std::vector<TwoFunctor> right, left;
    for (int k = 0; k + 1 < n; ++k) { right.push_back(c.path[k].q); left.push_back(c.path[k + 1].p); }
    right.push_back(c.path.back().q);
    left.push_back(Rn.BB.src());
    MultiPullback D = multi_pullback(f2, right, left);
    std::vector<TwoFunctor> comps;
    for (int k = 0; k + 1 < n; ++k) comps.push_back(D.proj[k]);
    comps.push_back(compose(acts.back().rho_pb, pair_into(Rn.JB, {D.proj[n - 1], D.proj[n]})));
    TwoFunctor lhs = compose(c.phi, pair_into(P, comps));
    std::vector<TwoFunctor> rest(D.proj.begin(), D.proj.begin() + n);
    TwoFunctor phirest = compose(c.phi, pair_into(P, rest));
    TwoFunctor gbar = arrow_map(Rn.BB, kact.right.BB, c.g);
    TwoFunctor rhs = compose(kact.rho_pb, pair_into(kact.right.JB, {phirest, compose(gbar, D.proj[n])}));
    if (!(lhs == rhs)) r.add("equivariance.right", "phi", "phi does not commute with the right actions");
  }
  // interior: phi coequalizes rho_{Jm} and lam_{Jm+1}
  for (int m = 0; m + 1 < n; ++m) {
    const ActionContext& Rm = acts[m].right;
    const LeftContext& Lm1 = acts[m + 1].left;
    std::vector<Cat> f2;
    std::vector<TwoFunctor> right, left;
    for (int k = 0; k < n; ++k) {
      f2.push_back(fac[k]);
      if (k == m) {
        f2.push_back(Rm.BB.apex());
        right.push_back(c.path[k].q);
        left.push_back(Rm.BB.src());
        right.push_back(Rm.BB.tgt());
        left.push_back(c.path[k + 1].p);
      } else if (k + 1 < n) {
        right.push_back(c.path[k].q);
        left.push_back(c.path[k + 1].p);
      }
    }
    MultiPullback D = multi_pullback(f2, right, left);
    std::vector<TwoFunctor> L, R;
    for (int k = 0; k < n; ++k) {
      int dk = k <= m ? k : k + 1;
      if (k == m) L.push_back(compose(acts[m].rho_pb, pair_into(Rm.JB, {D.proj[m], D.proj[m + 1]})));
      else L.push_back(D.proj[dk]);
      if (k == m + 1) R.push_back(compose(acts[m + 1].lam_pb, pair_into(Lm1.AJ, {D.proj[m + 1], D.proj[m + 2]})));
      else R.push_back(D.proj[dk]);
    }
    if (!(compose(c.phi, pair_into(P, L)) == compose(c.phi, pair_into(P, R))))
      r.add("equivariance.interior", "phi", "phi does not coequalize the interior actions", {std::to_string(m)});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Marked lax transformations (nullary cells)

inline Report check_marked_lax(const NullaryCell& c) {
  Report r;
  const MultiPullback& P = *c.P;
  const int n = int(c.path.size());
  const LaxTrans& phi = c.phi;
  if (!TwoFunctor::same(phi.F.src, P.apex())) {
    r.add("structural.boundary", "phi", "transformation is not defined on the path apex");
    return r;
  }
  if (!(phi.F == left_boundary(c.path, P, c.f)) || !(phi.G == right_boundary(c.path, P, c.g))) {
    r.add("structural.boundary", "phi", "transformation does not lie over f∘p1∘pi1 and g∘qn∘pin");
    return r;
  }
  r.merge(validate_lax(phi, "phi"));
  if (!r.ok()) return r;
  const Fin2Cat &X = *P.apex(), &C = phi.cod();
  const TwoSided &J1 = c.path.front(), &Jn = c.path.back();
  const Fin2Cat &A0 = *J1.A(), &An = *Jn.B();
  auto need = [&](int x, const std::string& w) {
    if (x < 0) r.add("structural.apex", w, "tuple missing from the path apex");
    return x;
  };
  for (int x = 0; x < X.n_obj(); ++x) {
    auto t = detail::ids_except(P, P.b.okey[x], 0);
    int i1 = P.b.okey[x][0], in = P.b.okey[x][n - 1];
    for (int u : A0.in(J1.p.obj[i1])) {
      t = detail::ids_except(P, P.b.okey[x], 0);
      t[0] = lookup(J1.lam_mor, i1, u);
      int m = need(P.b.mor(t), X.obj[x]);
      if (m < 0) continue;
      int x2 = X.msrc[m];
      if (phi.comp[x2] != C.comp(phi.comp[x], c.f.mor[u]))
        r.add("cm", X.obj[x], "component at the restricted object is not the whiskered component", {A0.mor[u]});
      if (!C.is_id_cell(phi.nat[m])) r.add("cm", X.mor[m], "naturality cell at a cartesian lift is not an identity");
    }
    for (int v : An.out(Jn.q.obj[in])) {
      t = detail::ids_except(P, P.b.okey[x], 0);
      t[n - 1] = lookup(Jn.rho_mor, in, v);
      int m = need(P.b.mor(t), X.obj[x]);
      if (m < 0) continue;
      int x2 = X.mtgt[m];
      if (phi.comp[x2] != C.comp(c.g.mor[v], phi.comp[x]))
        r.add("om", X.obj[x], "component at the extended object is not the whiskered component", {An.mor[v]});
      if (!C.is_id_cell(phi.nat[m])) r.add("om", X.mor[m], "naturality cell at an opcartesian lift is not an identity");
    }
  }
  for (int s = 0; s < X.n_mor(); ++s) {
    int s1 = P.b.mkey[s][0], sn = P.b.mkey[s][n - 1];
    int xi = X.msrc[s], xj = X.mtgt[s];
    for (int al : A0.cells_from(J1.p.mor[s1])) {
      auto t = detail::ids_except(P, P.b.mkey[s], 1);
      t[0] = lookup(J1.lam_cell, al, s1);
      int cc = need(P.b.cell(t), X.mor[s]);
      if (cc < 0) continue;
      int s2 = X.ctgt[cc];
      if (phi.nat[s2] != C.vcomp(phi.nat[s], C.whl(phi.comp[xj], c.f.cell[al])))
        r.add("poc", X.mor[s], "naturality cell at a cell lift is not the pasted cell", {A0.cell[al]});
    }
    for (int be : An.cells_to(Jn.q.mor[sn])) {
      auto t = detail::ids_except(P, P.b.mkey[s], 1);
      t[n - 1] = lookup(Jn.rho_cell, be, sn);
      int cc = need(P.b.cell(t), X.mor[s]);
      if (cc < 0) continue;
      int s2 = X.csrc[cc];
      if (phi.nat[s2] != C.vcomp(C.whr(c.g.cell[be], phi.comp[xi]), phi.nat[s]))
        r.add("pcc", X.mor[s], "naturality cell at a cell lift is not the pasted cell", {An.cell[be]});
    }
  }
  for (int m = 0; m + 1 < n; ++m) {
    const TwoSided &Jm = c.path[m], &Jm1 = c.path[m + 1];
    const Fin2Cat& Am = *Jm.B();
    MultiPullback Pre = path_apex(c.path, 0, m + 1), Suf = path_apex(c.path, m + 1, n);
    for (int a = 0; a < Pre.apex()->n_obj(); ++a)
      for (int b = 0; b < Suf.apex()->n_obj(); ++b) {
        auto ka = Pre.b.okey[a], kb = Suf.b.okey[b];
        int im = ka.back(), im1 = kb.front();
        for (int u : Am.hom(Jm.q.obj[im], Jm1.p.obj[im1])) {
          std::vector<int> t;
          for (std::size_t k = 0; k < ka.size(); ++k) t.push_back(c.path[k].apex()->idm[ka[k]]);
          for (std::size_t k = 0; k < kb.size(); ++k) t.push_back(c.path[m + 1 + k].apex()->idm[kb[k]]);
          t[m] = lookup(Jm.rho_mor, im, u);
          t[m + 1] = lookup(Jm1.lam_mor, im1, u);
          int mm = need(P.b.mor(t), Am.mor[u]);
          if (mm < 0) continue;
          if (phi.comp[X.msrc[mm]] != phi.comp[X.mtgt[mm]])
            r.add("im", X.mor[mm], "components on either side of an interior lift pair differ", {Am.mor[u]});
          if (!C.is_id_cell(phi.nat[mm])) r.add("im", X.mor[mm], "naturality cell at an interior lift pair is not an identity");
        }
      }
    for (int a = 0; a < Pre.apex()->n_mor(); ++a)
      for (int b = 0; b < Suf.apex()->n_mor(); ++b) {
        auto ka = Pre.b.mkey[a], kb = Suf.b.mkey[b];
        int sm = ka.back(), sm1 = kb.front();
        for (int al : Am.cells_between(Jm1.p.mor[sm1], Jm.q.mor[sm])) {
          std::vector<int> t;
          for (std::size_t k = 0; k < ka.size(); ++k) t.push_back(c.path[k].apex()->idc[ka[k]]);
          for (std::size_t k = 0; k < kb.size(); ++k) t.push_back(c.path[m + 1 + k].apex()->idc[kb[k]]);
          t[m] = lookup(Jm.rho_cell, al, sm);
          t[m + 1] = lookup(Jm1.lam_cell, al, sm1);
          int xx = need(P.b.cell(t), Am.cell[al]);
          if (xx < 0) continue;
          if (phi.nat[X.csrc[xx]] != phi.nat[X.ctgt[xx]])
            r.add("iec", X.cell[xx], "naturality cells on either side of an interior cell pair differ", {Am.cell[al]});
        }
      }
  }
  return r;
}

// (0,1)-ary cell A => K over f: A -> C, g: A -> D, given by phi: A -> apex(K).
// For a locally discrete K condition (cc) is automatic; a (cc) failure there
// is reported as cc.automatic.
inline Report check_01_cell(const TwoFunctor& phi, const TwoSided& K, const TwoFunctor& f, const TwoFunctor& g) {
  Report r;
  if (!TwoFunctor::same(phi.tgt, K.apex()) || !TwoFunctor::same(phi.src, f.src) || !TwoFunctor::same(f.src, g.src)) {
    r.add("structural.boundary", "phi", "2-functor does not run from the common source into the apex");
    return r;
  }
  r.merge(validate_2functor(phi, "phi"));
  if (!r.ok()) return r;
  if (!(compose(K.p, phi) == f) || !(compose(K.q, phi) == g)) {
    r.add("structural.boundary", "phi", "2-functor does not lie over f and g");
    return r;
  }
  const Fin2Cat &A = *phi.src, &J = *K.apex();
  for (int u = 0; u < A.n_mor(); ++u) {
    int l = lookup(K.lam_mor, phi.obj[A.mtgt[u]], f.mor[u]);
    int rh = lookup(K.rho_mor, phi.obj[A.msrc[u]], g.mor[u]);
    if (l < 0 || rh < 0) {
      r.add("structural.cleavage", A.mor[u], "missing lift");
      continue;
    }
    if (J.msrc[l] != J.mtgt[rh])
      r.add("cm", A.mor[u], "restriction along fu and extension along gu differ", {J.obj[J.msrc[l]], J.obj[J.mtgt[rh]]});
    else if (J.comp(l, rh) != phi.mor[u])
      r.add("cm", A.mor[u], "image is not the composite of its lifts", {J.mor[phi.mor[u]]});
  }
  const bool ld = is_locally_discrete(K).ld;
  for (int a = 0; a < A.n_cell(); ++a) {
    int l = lookup(K.lam_cell, f.cell[a], phi.mor[A.csrc[a]]);
    int rh = lookup(K.rho_cell, g.cell[a], phi.mor[A.ctgt[a]]);
    if (l < 0 || rh < 0) {
      r.add("structural.cleavage", A.cell[a], "missing cell lift");
      continue;
    }
    const char* code = ld ? "cc.automatic" : "cc";
    if (J.ctgt[l] != J.csrc[rh])
      r.add(code, A.cell[a], "cell lifts do not meet", {J.mor[J.ctgt[l]], J.mor[J.csrc[rh]]});
    else if (J.vcomp(l, rh) != phi.cell[a])
      r.add(code, A.cell[a], "image is not the composite of its cell lifts", {J.cell[phi.cell[a]]});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Units, restriction and conversion

struct Unit {
  LaxArrow arrow;
  TwoSided span;
  NullaryCell cart;  // the cartesian nullary cell delta: (I_C) => C
};

inline Unit unit(const Cat& C) {
  Unit u{lax_arrow(C), {}, {}};
  u.span = unit_twosided(u.arrow);
  TwoFunctor id = identity_functor(C);
  u.cart.path = {u.span};
  u.cart.P = make_apex(u.cart.path);
  u.cart.f = id;
  u.cart.g = id;
  u.cart.phi = u.arrow.delta();
  return u;
}

// nullary (J..) => C over (f, g) to unary (J..) => I_C, and back.
inline UnaryCell nullary_to_unary(const NullaryCell& c) {
  Unit u = unit(c.f.tgt);
  UnaryCell out{c.path, u.span, c.f, c.g, {}, c.P};
  out.phi = map_into(u.arrow.comma, c.phi.F, c.phi.G, c.phi);
  return out;
}

inline NullaryCell unary_to_nullary(const UnaryCell& c) {
  const Cat& C = c.K.A();
  if (!TwoFunctor::same(C, c.K.B())) throw StructuralError("target of the cell is not a unit");
  Unit u = unit(C);
  if (!(u.span == c.K)) throw StructuralError("target of the cell is not the unit of its base");
  NullaryCell out{c.path, c.f, c.g, whisker_right(u.arrow.delta(), c.phi), c.P};
  return out;
}

struct Restriction {
  TwoSided span;    // A <- A ×_C K ×_D B -> B
  MultiPullback apex;
  UnaryCell cart;   // (R) => K over (f, g)
};

inline Restriction restriction(const TwoSided& K, const TwoFunctor& f, const TwoFunctor& g) {
  Restriction R;
  R.apex = multi_pullback({f.src, K.apex(), g.src}, {f, K.q}, {K.p, g});
  const MultiPullback& M = R.apex;
  const Fin2Cat &Kx = *K.apex(), &A = *f.src, &B = *g.src, &X = *M.apex();
  TwoSided& t = R.span;
  t.name = "restriction(" + K.name + ")";
  t.p = M.proj[0];
  t.q = M.proj[2];
  auto need = [](int x) {
    if (x < 0) throw InconsistencyError("restriction: lift leaves the restricted apex");
    return x;
  };
  for (int x = 0; x < X.n_obj(); ++x) {
    auto& k = M.b.okey[x];
    for (int u : A.in(k[0]))
      t.lam_mor[key2(x, u)] = need(M.b.mor({u, lookup(K.lam_mor, k[1], f.mor[u]), B.idm[k[2]]}));
    for (int v : B.out(k[2]))
      t.rho_mor[key2(x, v)] = need(M.b.mor({A.idm[k[0]], lookup(K.rho_mor, k[1], g.mor[v]), v}));
  }
  for (int s = 0; s < X.n_mor(); ++s) {
    auto& k = M.b.mkey[s];
    for (int al : A.cells_from(k[0]))
      t.lam_cell[key2(al, s)] = need(M.b.cell({al, lookup(K.lam_cell, f.cell[al], k[1]), B.idc[k[2]]}));
    for (int be : B.cells_to(k[2]))
      t.rho_cell[key2(be, s)] = need(M.b.cell({A.idc[k[0]], lookup(K.rho_cell, g.cell[be], k[1]), be}));
  }
  (void)Kx;
  R.cart.path = {t};
  R.cart.P = make_apex(R.cart.path);
  R.cart.K = K;
  R.cart.f = f;
  R.cart.g = g;
  R.cart.phi = M.proj[1];
  R.cart.phi.src = R.cart.P->apex();
  return R;
}

// Unary cells (path) => K over (f, g), enumerated as span morphisms.
inline std::vector<UnaryCell> enumerate_unary(const std::vector<TwoSided>& path, const TwoSided& K, const TwoFunctor& f,
                                              const TwoFunctor& g, std::size_t limit, bool only_valid = true) {
  std::vector<UnaryCell> out;
  ApexPtr P = make_apex(path);
  TwoFunctor L = left_boundary(path, *P, f), R = right_boundary(path, *P, g);
  FunctorFilters flt;
  flt.obj = [&](int x, int y) { return K.p.obj[y] == L.obj[x] && K.q.obj[y] == R.obj[x]; };
  flt.mor = [&](int x, int y) { return K.p.mor[y] == L.mor[x] && K.q.mor[y] == R.mor[x]; };
  flt.cell = [&](int x, int y) { return K.p.cell[y] == L.cell[x] && K.q.cell[y] == R.cell[x]; };
  enumerate_functors(P->apex(), K.apex(), flt, [&](const TwoFunctor& F) {
    UnaryCell c{path, K, f, g, F, P};
    if (!only_valid || check_unary_cell(c).ok()) out.push_back(std::move(c));
    return out.size() < limit;
  });
  return out;
}

// Factorizations of probe through cart: cells H => R with cart∘phi' = probe.
// The cell cart must have a path of length one.
inline std::size_t count_cartesian_factorizations(const UnaryCell& cart, const UnaryCell& probe,
                                                  const TwoFunctor& h, const TwoFunctor& k) {
  const TwoSided& R = cart.path.front();
  const MultiPullback& PH = *probe.P;
  TwoFunctor L = left_boundary(probe.path, PH, h), Rb = right_boundary(probe.path, PH, k);
  const TwoFunctor& pi = cart.phi;
  FunctorFilters flt;
  flt.obj = [&](int x, int y) { return R.p.obj[y] == L.obj[x] && R.q.obj[y] == Rb.obj[x] && pi.obj[y] == probe.phi.obj[x]; };
  flt.mor = [&](int x, int y) { return R.p.mor[y] == L.mor[x] && R.q.mor[y] == Rb.mor[x] && pi.mor[y] == probe.phi.mor[x]; };
  flt.cell = [&](int x, int y) { return R.p.cell[y] == L.cell[x] && R.q.cell[y] == Rb.cell[x] && pi.cell[y] == probe.phi.cell[x]; };
  std::size_t n = 0;
  enumerate_functors(PH.apex(), R.apex(), flt, [&](const TwoFunctor& F) {
    UnaryCell c{probe.path, R, h, k, F, probe.P};
    if (check_unary_cell(c).ok()) ++n;
    return n < 2;
  });
  return n;
}

// The restriction of K along (f, g) is cartesian: every probe over
// (f∘id, g∘id) from the given probe paths factors uniquely.
inline Report check_cartesian(const UnaryCell& cart, const std::vector<std::vector<TwoSided>>& probe_paths,
                              std::size_t bound = settings().probe_bound) {
  Report r;
  r.merge(check_unary_cell(cart), "cart.");
  if (!r.ok()) return r;
  if (cart.path.size() != 1) {
    r.add("structural.arity", "cart", "cartesian check expects a path of length one");
    return r;
  }
  TwoFunctor h = identity_functor(cart.path.front().A()), k = identity_functor(cart.path.front().B());
  if (count_cartesian_factorizations(cart, cart, h, k) != 1)
    r.add("cartesian.self", "cart", "the cell does not factor uniquely through itself");
  for (std::size_t i = 0; i < probe_paths.size(); ++i) {
    auto probes = enumerate_unary(probe_paths[i], cart.K, cart.f, cart.g, bound);
    for (std::size_t j = 0; j < probes.size(); ++j) {
      std::size_t n = count_cartesian_factorizations(cart, probes[j], h, k);
      if (n != 1)
        r.add(n == 0 ? "cartesian.exists" : "cartesian.unique", "probe " + std::to_string(i) + "#" + std::to_string(j),
              n == 0 ? "probe does not factor" : "probe factors more than once");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Composition of cells

struct Piece {
  // either a unary cell or a nullary one; the nullary kind occupies a
  // junction of the outer cell's source
  std::optional<UnaryCell> unary;
  std::optional<NullaryCell> nullary;
  const std::vector<TwoSided>& path() const { return unary ? unary->path : nullary->path; }
  const TwoFunctor& f() const { return unary ? unary->f : nullary->f; }
  const TwoFunctor& g() const { return unary ? unary->g : nullary->g; }
  const ApexPtr& P() const { return unary ? unary->P : nullary->P; }
};

namespace detail {

// Remove the factor at position k of a path apex using the action of a
// neighbour: side < 0 uses the right action of the left neighbour, side > 0
// the left action of the right neighbour.
inline TwoFunctor collapse(const std::vector<TwoSided>& path, const MultiPullback& from, const MultiPullback& to, int k,
                           int side) {
  std::vector<TwoFunctor> comps;
  const int n = int(path.size());
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    if (side < 0 && j == k - 1) {
      SpanActions sa = span_actions(path[j]);
      comps.push_back(compose(sa.rho_pb, pair_into(sa.right.JB, {from.proj[j], from.proj[k]})));
    } else if (side > 0 && j == k + 1) {
      SpanActions sa = span_actions(path[j]);
      comps.push_back(compose(sa.lam_pb, pair_into(sa.left.AJ, {from.proj[k], from.proj[j]})));
    } else {
      comps.push_back(from.proj[j]);
    }
  }
  return pair_into(to, comps);
}

}  // namespace detail

// psi ∘ (pieces): the unary pieces fill psi's source path in order and the
// nullary pieces sit at the junctions between them (or at the ends). The
// inserted units are absorbed in two orders and the results compared.
inline UnaryCell compose_cells(const UnaryCell& psi, const std::vector<Piece>& pieces) {
  std::vector<TwoSided> src, inserted;  // concatenated sources, psi's source with units
  std::vector<bool> is_unit;
  std::size_t next = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& pc = pieces[i];
    if (i > 0 && !(pieces[i - 1].g() == pc.f())) throw StructuralError("vertical boundaries of adjacent pieces differ");
    src.insert(src.end(), pc.path().begin(), pc.path().end());
    if (pc.unary) {
      if (next >= psi.path.size() || !(pc.unary->K == psi.path[next]))
        throw StructuralError("target of piece " + std::to_string(i) + " is not the next span of the outer source");
      inserted.push_back(psi.path[next++]);
      is_unit.push_back(false);
    } else {
      inserted.push_back(unit(pc.nullary->f.tgt).span);
      is_unit.push_back(true);
    }
  }
  if (next != psi.path.size()) throw StructuralError("pieces do not cover the outer source");
  if (!(pieces.front().f().tgt == psi.f.src) && !TwoFunctor::same(pieces.front().f().tgt, psi.f.src))
    throw StructuralError("left vertical boundary does not meet the outer cell");
  ApexPtr P = make_apex(src);
  MultiPullback U = path_apex(inserted);
  // P -> U
  std::vector<TwoFunctor> comps;
  std::size_t off = 0;
  for (auto& pc : pieces) {
    std::size_t len = pc.path().size();
    std::vector<TwoFunctor> sub(P->proj.begin() + off, P->proj.begin() + off + len);
    TwoFunctor into = pair_into(*pc.P(), sub);
    TwoFunctor body = pc.unary ? pc.unary->phi : nullary_to_unary(*pc.nullary).phi;
    comps.push_back(compose(body, into));
    off += len;
  }
  TwoFunctor toU = pair_into(U, comps);
  auto absorb = [&](bool leftmost) {
    std::vector<TwoSided> cur = inserted;
    std::vector<bool> unit_here = is_unit;
    MultiPullback M = U;
    TwoFunctor acc = toU;
    while (true) {
      int k = -1;
      for (int j = 0; j < int(cur.size()); ++j)
        if (unit_here[j]) { k = j; if (leftmost) break; }
      if (k < 0) break;
      if (cur.size() == 1) throw StructuralError("cannot absorb a unit into an empty path");
      int side = leftmost ? (k > 0 ? -1 : 1) : (k + 1 < int(cur.size()) ? 1 : -1);
      std::vector<TwoSided> nxt = cur;
      nxt.erase(nxt.begin() + k);
      std::vector<bool> nu = unit_here;
      nu.erase(nu.begin() + k);
      MultiPullback M2 = path_apex(nxt);
      acc = compose(detail::collapse(cur, M, M2, k, side), acc);
      cur = std::move(nxt);
      unit_here = std::move(nu);
      M = std::move(M2);
    }
    TwoFunctor into_psi = acc;
    into_psi.tgt = psi.P->apex();
    return compose(psi.phi, into_psi);
  };
  TwoFunctor a = absorb(true), b = absorb(false);
  if (!(a == b)) throw InconsistencyError("unit insertion depends on the order of absorption");
  UnaryCell out{src, psi.K, compose(psi.f, pieces.front().f()), compose(psi.g, pieces.back().g()), a, P};
  return out;
}

// Nullary outer cells compose through their unary form.
inline NullaryCell compose_cells(const NullaryCell& psi, const std::vector<Piece>& pieces) {
  return unary_to_nullary(compose_cells(nullary_to_unary(psi), pieces));
}

// ---------------------------------------------------------------------------
// Density of a nullary cell

struct KanProbe {
  std::vector<TwoSided> H;  // may be empty
  TwoFunctor k;             // H_end -> M
  LaxTrans phi;             // on apex(J ⧺ H) (or apex(J) when H is empty)
};

// Count phi' with phi = eta ⋄ phi' (stops at 2). For empty H, phi' ranges
// over 2-natural transformations l => k; otherwise over marked lax
// transformations on apex(H).
inline std::size_t count_kan_factorizations(const NullaryCell& eta, const KanProbe& pr, std::vector<LaxTrans>* found = nullptr) {
  const Fin2Cat& M = eta.phi.cod();
  const TwoSided& J = eta.path.back();
  std::vector<TwoSided> full = eta.path;
  full.insert(full.end(), pr.H.begin(), pr.H.end());
  std::size_t n = 0;
  if (pr.H.empty()) {
    // phi'∘q on apex(J)
    const TwoFunctor& l = eta.g;
    TwoFunctor q = compose(J.q, eta.P->proj.back());
    const Fin2Cat& Jx = *eta.P->apex();
    LaxFilters flt;
    flt.nat = [&M](int, int c) { return M.is_id_cell(c); };
    flt.comp = [&](int b, int m) {
      for (int x = 0; x < Jx.n_obj(); ++x)
        if (q.obj[x] == b && M.comp(m, eta.phi.comp[x]) != pr.phi.comp[x]) return false;
      return true;
    };
    enumerate_lax(l, pr.k, flt, [&](const LaxTrans& t) {
      LaxTrans a = eta.phi, b = whisker_right(t, q);
      b.F = a.G;
      if (compose_lax(b, a) == pr.phi) {
        ++n;
        if (found) found->push_back(t);
      }
      return n < 2;
    });
    return n;
  }
  MultiPullback P = path_apex(full);
  ApexPtr PH = make_apex(pr.H);
  std::size_t hstart = eta.path.size();
  std::vector<TwoFunctor> jc(P.proj.begin(), P.proj.begin() + hstart), hc(P.proj.begin() + hstart, P.proj.end());
  TwoFunctor toJ = pair_into(*eta.P, jc), toH = pair_into(*PH, hc);
  LaxTrans a = whisker_right(eta.phi, toJ);
  NullaryCell cand{pr.H, eta.g, pr.k, {}, PH};
  TwoFunctor F = left_boundary(pr.H, *PH, eta.g), G = right_boundary(pr.H, *PH, pr.k);
  const Fin2Cat& X = *P.apex();
  std::vector<std::vector<int>> over(PH->apex()->n_obj());
  for (int x = 0; x < X.n_obj(); ++x) over[toH.obj[x]].push_back(x);
  LaxFilters flt;
  flt.comp = [&](int h, int m) {
    for (int x : over[h])
      if (M.comp(m, a.comp[x]) != pr.phi.comp[x]) return false;
    return true;
  };
  enumerate_lax(F, G, flt, [&](const LaxTrans& t) {
    cand.phi = t;
    if (!check_marked_lax(cand).ok()) return true;
    LaxTrans b = whisker_right(t, toH);
    b.F = a.G;
    if (compose_lax(b, a) == pr.phi) {
      ++n;
      if (found) found->push_back(t);
    }
    return n < 2;
  });
  return n;
}

inline Report check_left_kan(const NullaryCell& eta, const std::vector<KanProbe>& probes) {
  Report r;
  r.merge(check_marked_lax(eta), "eta.");
  if (!r.ok()) return r;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    std::size_t n = count_kan_factorizations(eta, probes[i]);
    if (n != 1)
      r.add(n == 0 ? "kan.exists" : "kan.unique", "probe#" + std::to_string(i),
            n == 0 ? "probe does not factor through the cell" : "probe factors more than once",
            {probes[i].H.empty() ? "empty path" : "path of length " + std::to_string(probes[i].H.size())});
  }
  return r;
}

// Probes over H = () and H = (I_B), for every k: B -> M in ks, enumerated
// up to bound per family.
inline std::vector<KanProbe> kan_probes(const NullaryCell& eta, const std::vector<TwoFunctor>& ks, std::size_t bound,
                                        bool with_unit = true) {
  std::vector<KanProbe> out;
  const TwoSided& J = eta.path.back();
  const Fin2Cat& M = eta.phi.cod();
  (void)M;
  for (const TwoFunctor& k : ks) {
    {
      std::vector<TwoSided> full = eta.path;
      NullaryCell c{full, eta.f, k, {}, eta.P};
      std::size_t here = 0;
      enumerate_lax(left_boundary(full, *eta.P, eta.f), right_boundary(full, *eta.P, k), {}, [&](const LaxTrans& t) {
        c.phi = t;
        if (check_marked_lax(c).ok()) {
          out.push_back({{}, k, t});
          ++here;
        }
        return here < bound;
      });
    }
    if (with_unit) {
      Unit u = unit(J.B());
      std::vector<TwoSided> full = eta.path;
      full.push_back(u.span);
      ApexPtr P = make_apex(full);
      NullaryCell c{full, eta.f, k, {}, P};
      std::size_t here = 0;
      enumerate_lax(left_boundary(full, *P, eta.f), right_boundary(full, *P, k), {}, [&](const LaxTrans& t) {
        c.phi = t;
        if (check_marked_lax(c).ok()) {
          out.push_back({{u.span}, k, t});
          ++here;
        }
        return here < bound;
      });
    }
  }
  return out;
}

}  // namespace twocat
