#pragma once

#include "limits.hpp"

namespace twocat {

// Struct: Cleavage
// Chosen lifts for q: J -> B. mor keyed (i, u) with u: qi -> b;
// cell keyed (beta, s) with beta: u => qs.
struct Cleavage {
  TwoFunctor q;
  PairTable mor, cell;

  int lift(int i, int u) const { return lookup(mor, i, u); }
  int clift(int beta, int s) const { return lookup(cell, beta, s); }
  bool operator==(const Cleavage& o) const { return q == o.q && mor == o.mor && cell == o.cell; }
};

// Struct: TwoSided
// Span A <-p- J -q-> B with a cocleavage for p (lam) and a cleavage for q (rho).
// lam_mor keyed (i, u) for u: a -> pi, value lam(u, i): u*i -> i.
// lam_cell keyed (alpha, s) for alpha: ps => w, value lam(s, alpha): s => alpha_! s.
// rho_mor keyed (i, v) for v: qi -> b, value rho(i, v): i -> v_! i.
// rho_cell keyed (beta, t) for beta: w => qt, value rho(beta, t): beta* t => t.
struct TwoSided {
  std::string name;
  TwoFunctor p, q;
  PairTable lam_mor, lam_cell, rho_mor, rho_cell;

  const Cat& apex() const { return p.src; }
  const Cat& A() const { return p.tgt; }
  const Cat& B() const { return q.tgt; }
  Cleavage right() const { return {q, rho_mor, rho_cell}; }
  // the cocleavage read as a cleavage of p^coop
  Cleavage left_coop() const {
    if (!coop_p_ || !(coop_p_->obj == p.obj && coop_p_->mor == p.mor && coop_p_->cell == p.cell))
      coop_p_ = std::make_shared<TwoFunctor>(dualize(p, Variant::coop));
    return {*coop_p_, lam_mor, lam_cell};
  }
  bool operator==(const TwoSided& o) const {
    return p == o.p && q == o.q && lam_mor == o.lam_mor && lam_cell == o.lam_cell && rho_mor == o.rho_mor &&
           rho_cell == o.rho_cell;
  }

 private:
  mutable std::shared_ptr<TwoFunctor> coop_p_;
};

namespace detail {
inline std::string mname(const Fin2Cat& C, int m) { return C.ok_mor(m) ? C.mor[m] : "<none>"; }
inline std::string cname(const Fin2Cat& C, int c) { return C.ok_cell(c) ? C.cell[c] : "<none>"; }
}  // namespace detail

// Split op-fibration axioms for a cleavage. Uniqueness conditions are
// checked by counting candidates exhaustively.
inline Report check_split_opfib(const Cleavage& c, const std::string& where = "rho") {
  using detail::cname;
  using detail::mname;
  Report r;
  const TwoFunctor& q = c.q;
  r.merge(validate_2functor(q, where + ".functor"));
  if (!r.ok()) return r;
  const Fin2Cat &J = *q.src, &B = *q.tgt;

  // table domain and lift property
  for (int i = 0; i < J.n_obj(); ++i)
    for (int u : B.out(q.obj[i])) {
      int l = c.lift(i, u);
      if (!J.ok_mor(l)) { r.add("structural.table", where, "missing morphism lift", {J.obj[i], B.mor[u]}); continue; }
      if (J.msrc[l] != i || q.mor[l] != u)
        r.add("lift.mor", where, "morphism lift has wrong source or image", {J.obj[i], B.mor[u], J.mor[l]});
    }
  for (int s = 0; s < J.n_mor(); ++s)
    for (int b : B.cells_to(q.mor[s])) {
      int l = c.clift(b, s);
      if (!J.ok_cell(l)) { r.add("structural.table", where, "missing cell lift", {B.cell[b], J.mor[s]}); continue; }
      if (J.ctgt[l] != s || q.cell[l] != b)
        r.add("lift.cell", where, "cell lift has wrong target or image", {B.cell[b], J.mor[s], J.cell[l]});
    }
  if (c.mor.size() != [&] { std::size_t n = 0; for (int i = 0; i < J.n_obj(); ++i) n += B.out(q.obj[i]).size(); return n; }())
    r.add("structural.table", where, "morphism lift table has entries outside its domain");
  if (!r.ok()) return r;
  auto tgt_of = [&](int i, int u) { return J.mtgt[c.lift(i, u)]; };   // u_! i
  auto src_of = [&](int b, int s) { return J.csrc[c.clift(b, s)]; };  // b* s

  // split conditions
  for (int i = 0; i < J.n_obj(); ++i) {
    if (c.lift(i, B.idm[q.obj[i]]) != J.idm[i]) r.add("sm.id", where, "lift of an identity is not an identity", {J.obj[i]});
    for (int u : B.out(q.obj[i])) {
      int ui = tgt_of(i, u);
      for (int v : B.out(B.mtgt[u])) {
        int lhs = c.lift(i, B.comp(v, u)), rhs = J.comp(c.lift(ui, v), c.lift(i, u));
        if (lhs != rhs) r.add("sm.comp", where, "lifts do not compose", {J.obj[i], B.mor[u], B.mor[v], mname(J, lhs), mname(J, rhs)});
      }
    }
  }
  for (int s = 0; s < J.n_mor(); ++s) {
    if (c.clift(B.idc[q.mor[s]], s) != J.idc[s]) r.add("sc.id", where, "lift of an identity cell is not an identity", {J.mor[s]});
    for (int b : B.cells_to(q.mor[s])) {
      int bs = src_of(b, s);
      for (int g : B.cells_to(B.csrc[b])) {
        int lhs = c.clift(B.vcomp(g, b), s), rhs = J.vcomp(c.clift(g, bs), c.clift(b, s));
        if (lhs != rhs) r.add("sc.vcomp", where, "cell lifts do not compose vertically", {B.cell[g], B.cell[b], J.mor[s]});
      }
      for (int t : J.out(J.mtgt[s]))
        for (int d : B.cells_to(q.mor[t])) {
          int lhs = c.clift(B.hcomp(d, b), J.comp(t, s)), rhs = J.hcomp(c.clift(d, t), c.clift(b, s));
          if (lhs != rhs)
            r.add("sc.hcomp", where, "cell lifts do not compose horizontally", {B.cell[d], J.mor[t], B.cell[b], J.mor[s]});
        }
    }
  }

  // (om1) 1-dimensional opcartesian property
  for (int i = 0; i < J.n_obj(); ++i)
    for (int u : B.out(q.obj[i])) {
      int l = c.lift(i, u), ui = J.mtgt[l];
      for (int s : J.out(i)) {
        int j = J.mtgt[s];
        for (int v : B.hom(B.mtgt[u], q.obj[j])) {
          if (B.comp(v, u) != q.mor[s]) continue;
          std::vector<int> hits;
          for (int w : J.hom(ui, j))
            if (q.mor[w] == v && J.comp(w, l) == s) hits.push_back(w);
          if (hits.size() != 1) {
            std::vector<std::string> wit{J.obj[i], B.mor[u], J.mor[s], B.mor[v]};
            for (int h : hits) wit.push_back(J.mor[h]);
            r.add("om1", where, hits.empty() ? "no factorization through the lift" : "factorization through the lift is not unique", wit);
          }
        }
      }
    }
  // (om2) 2-dimensional opcartesian property
  for (int i = 0; i < J.n_obj(); ++i)
    for (int u : B.out(q.obj[i])) {
      int l = c.lift(i, u), ui = J.mtgt[l], b = B.mtgt[u];
      for (int j = 0; j < J.n_obj(); ++j) {
        const auto& cells_ij = J.cells_in_hom(i, j);
        if (cells_ij.empty()) continue;
        const auto& cand = J.cells_in_hom(ui, j);
        for (int sg : cells_ij)
          for (int be : B.cells_in_hom(b, q.obj[j])) {
            if (B.whr(be, u) != q.cell[sg]) continue;
            std::vector<int> hits;
            for (int k : cand)
              if (q.cell[k] == be && J.whr(k, l) == sg) hits.push_back(k);
            if (hits.size() != 1) {
              std::vector<std::string> wit{J.obj[i], B.mor[u], J.cell[sg], B.cell[be]};
              for (int h : hits) wit.push_back(J.cell[h]);
              r.add("om2", where, hits.empty() ? "no 2-dimensional factorization" : "2-dimensional factorization is not unique", wit);
            }
          }
      }
    }
  // (cc) cartesian property of the cell lifts
  for (int sg = 0; sg < J.n_cell(); ++sg) {
    int rr = J.csrc[sg], s = J.ctgt[sg];
    for (int be : B.cells_to(q.mor[s])) {
      int l = c.clift(be, s), bs = J.csrc[l];
      for (int al : B.cells_between(q.mor[rr], B.csrc[be])) {
        if (B.vcomp(al, be) != q.cell[sg]) continue;
        std::vector<int> hits;
        for (int k : J.cells_between(rr, bs))
          if (q.cell[k] == al && J.vcomp(k, l) == sg) hits.push_back(k);
        if (hits.size() != 1) {
          std::vector<std::string> wit{J.cell[sg], B.cell[be], B.cell[al]};
          for (int h : hits) wit.push_back(J.cell[h]);
          r.add("cc", where, hits.empty() ? "cell does not factor through the cartesian lift" : "cell factorization is not unique", wit);
        }
      }
    }
  }
  return r;
}

inline Report check_split_cofib(const TwoSided& t) {
  Report r;
  r.merge(check_split_opfib(t.left_coop(), "lambda"), "co.");
  return r;
}

// Full two-sided condition list: (f), (o), (v), (cl), (cc).
inline Report check_twosided(const TwoSided& t) {
  Report r;
  r.merge(validate_2functor(t.p, "p"));
  r.merge(validate_2functor(t.q, "q"));
  if (!r.ok()) return r;
  if (!TwoFunctor::same(t.p.src, t.q.src)) {
    r.add("structural.span", "span", "legs have different domains");
    return r;
  }
  r.merge(check_split_opfib(t.right(), "rho"));
  r.merge(check_split_cofib(t));
  if (r.has_prefix("structural") || r.has_prefix("co.structural")) return r;
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  const TwoFunctor &p = t.p, &q = t.q;
  auto lam = [&](int u, int i) { return lookup(t.lam_mor, i, u); };
  auto lamc = [&](int s, int a) { return lookup(t.lam_cell, a, s); };
  auto rho = [&](int i, int v) { return lookup(t.rho_mor, i, v); };
  auto rhoc = [&](int b, int s) { return lookup(t.rho_cell, b, s); };
  // (v) verticality
  std::size_t before = r.total;
  for (auto& [k, l] : sorted_entries(t.lam_mor))
    if (J.ok_mor(l) && !B.is_id_mor(q.mor[l])) r.add("v.lam_mor", "lambda", "morphism lift is not q-vertical", {J.mor[l]});
  for (auto& [k, l] : sorted_entries(t.lam_cell))
    if (J.ok_cell(l) && !B.is_id_cell(q.cell[l])) r.add("v.lam_cell", "lambda", "cell lift is not q-vertical", {J.cell[l]});
  for (auto& [k, l] : sorted_entries(t.rho_mor))
    if (J.ok_mor(l) && !A.is_id_mor(p.mor[l])) r.add("v.rho_mor", "rho", "morphism lift is not p-vertical", {J.mor[l]});
  for (auto& [k, l] : sorted_entries(t.rho_cell))
    if (J.ok_cell(l) && !A.is_id_cell(p.cell[l])) r.add("v.rho_cell", "rho", "cell lift is not p-vertical", {J.cell[l]});
  if (r.total != before || !r.ok()) return r;
  // (cl) compatibility of morphism lifts
  for (int i = 0; i < J.n_obj(); ++i)
    for (int u : A.in(p.obj[i]))
      for (int v : B.out(q.obj[i])) {
        int li = lam(u, i), ri = rho(i, v);
        int ui = J.msrc[li], vi = J.mtgt[ri];
        int a = rho(ui, v), b = lam(u, vi);
        if (a < 0 || b < 0) { r.add("cl", "lambda/rho", "missing lift for a compatibility square", {J.obj[i], A.mor[u], B.mor[v]}); continue; }
        if (J.mtgt[a] != J.msrc[b]) r.add("cl", "lambda/rho", "v_!(u*i) differs from u*(v_!i)", {J.obj[i], A.mor[u], B.mor[v]});
        else if (J.comp(ri, li) != J.comp(b, a)) r.add("cl", "lambda/rho", "lift square does not commute", {J.obj[i], A.mor[u], B.mor[v]});
      }
  // (cc) compatibility of cell lifts
  for (int s = 0; s < J.n_mor(); ++s)
    for (int al : A.cells_from(p.mor[s]))
      for (int be : B.cells_to(q.mor[s])) {
        int ls = lamc(s, al), rs = rhoc(be, s);
        int as = J.ctgt[ls], bs = J.csrc[rs];
        int x = lamc(bs, al), y = rhoc(be, as);
        if (x < 0 || y < 0) { r.add("cc2", "lambda/rho", "missing lift for a cell compatibility square", {J.mor[s], A.cell[al], B.cell[be]}); continue; }
        if (J.ctgt[x] != J.csrc[y]) r.add("cc2", "lambda/rho", "alpha_!(beta*s) differs from beta*(alpha_!s)", {J.mor[s], A.cell[al], B.cell[be]});
        else if (J.vcomp(rs, ls) != J.vcomp(x, y)) r.add("cc2", "lambda/rho", "cell lift square does not commute", {J.mor[s], A.cell[al], B.cell[be]});
      }
  return r;
}

// ---------------------------------------------------------------------------
// Canonical cleavages of a lax comma

inline TwoSided comma_twosided(const LaxComma& L, const std::string& name = "") {
  TwoSided t;
  t.name = name;
  t.p = L.pA;
  t.q = L.pB;
  const Fin2Cat &J = *L.apex(), &A = *L.f.src, &B = *L.g.src, &C = *L.f.tgt;
  const TwoFunctor &f = L.f, &g = L.g;
  auto need = [](int x, const char* what) {
    if (x < 0) throw InconsistencyError(std::string("comma cleavage: missing ") + what);
    return x;
  };
  for (int x = 0; x < J.n_obj(); ++x) {
    int a = L.b.okey[x][0], i = L.b.okey[x][1], b = L.b.okey[x][2];
    for (int v : B.out(b)) {
      int gvi = C.comp(g.mor[v], i);
      t.rho_mor[key2(x, v)] = need(L.mor_of(A.idm[a], C.idc[gvi], v, i, gvi), "rho(i,v)");
    }
    for (int u : A.in(a)) {
      int ifu = C.comp(i, f.mor[u]);
      t.lam_mor[key2(x, u)] = need(L.mor_of(u, C.idc[ifu], B.idm[b], ifu, i), "lam(u,i)");
    }
  }
  for (int m = 0; m < J.n_mor(); ++m) {
    auto& k = L.b.mkey[m];
    int s = k[0], z = k[1], tt = k[2], u0 = k[3], u1 = k[4];
    for (int be : B.cells_to(tt)) {
      int z2 = C.vcomp(C.whr(g.cell[be], u0), z);
      t.rho_cell[key2(be, m)] = need(L.cell_of(A.idc[s], be, z2, z, u0, u1), "rho(beta,s)");
    }
    for (int al : A.cells_from(s)) {
      int z2 = C.vcomp(z, C.whl(u1, f.cell[al]));
      t.lam_cell[key2(al, m)] = need(L.cell_of(al, B.idc[tt], z, z2, u0, u1), "lam(s,alpha)");
    }
  }
  return t;
}

// Unit fibration C <- C^2 -> C.
inline TwoSided unit_twosided(const LaxArrow& AA, const std::string& name = "") {
  return comma_twosided(AA.comma, name.empty() ? "unit(" + AA.apex()->name + ")" : name);
}

// ---------------------------------------------------------------------------
// Local discreteness

struct LocalDiscreteness {
  bool jr = false, ld = false;
  Report jr_report, ld_report;
};

inline LocalDiscreteness is_locally_discrete(const TwoSided& t) {
  LocalDiscreteness out;
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  for (int c = 0; c < J.n_cell(); ++c)
    if (A.is_id_cell(t.p.cell[c]) && B.is_id_cell(t.q.cell[c]) && !J.is_id_cell(c))
      out.jr_report.add("jr", "apex", "non-identity cell over an identity pair", {J.cell[c]});
  out.jr = out.jr_report.ok();
  // hom-span criterion
  Report& r = out.ld_report;
  auto lift_l = [&](int s, int al) {  // unique q-vertical cell from s over alpha
    std::vector<int> hits;
    for (int k : J.cells_from(s))
      if (t.p.cell[k] == al && B.is_id_cell(t.q.cell[k])) hits.push_back(k);
    return hits;
  };
  auto lift_r = [&](int be, int s) {
    std::vector<int> hits;
    for (int k : J.cells_to(s))
      if (t.q.cell[k] == be && A.is_id_cell(t.p.cell[k])) hits.push_back(k);
    return hits;
  };
  for (int s = 0; s < J.n_mor(); ++s) {
    for (int al : A.cells_from(t.p.mor[s]))
      if (lift_l(s, al).size() != 1) r.add("ld.left", "hom-span", "no unique q-vertical lift", {J.mor[s], A.cell[al]});
    for (int be : B.cells_to(t.q.mor[s]))
      if (lift_r(be, s).size() != 1) r.add("ld.right", "hom-span", "no unique p-vertical lift", {B.cell[be], J.mor[s]});
  }
  if (r.ok())
    for (int c = 0; c < J.n_cell(); ++c) {
      int s = J.csrc[c], tt = J.ctgt[c];
      int l = lift_l(s, t.p.cell[c])[0], rr = lift_r(t.q.cell[c], tt)[0];
      if (J.vcomp(l, rr) != c) r.add("ld.factor", "hom-span", "cell is not the composite of its vertical lifts", {J.cell[c]});
    }
  out.ld = r.ok();
  return out;
}

// Cleavage of a locally discrete span, recovered from uniqueness of lifts.
// Morphism lifts are the vertical lifts that are 1-dimensionally
// (op)cartesian; cell lifts are the unique vertical lifts. The result is
// re-verified with check_twosided.
struct Derived {
  std::optional<TwoSided> t;
  Report report;
};

inline Derived derive_cleavage_discrete(const TwoFunctor& p, const TwoFunctor& q, const std::string& name = "") {
  Derived d;
  Report& r = d.report;
  const Fin2Cat &J = *p.src, &A = *p.tgt, &B = *q.tgt;
  TwoSided t;
  t.name = name;
  t.p = p;
  t.q = q;
  // opcartesian for q: every s: i -> j with qs = w∘v factors uniquely
  auto opcart = [&](int m) {
    int i = J.msrc[m], ui = J.mtgt[m], v = q.mor[m];
    for (int s : J.out(i)) {
      int j = J.mtgt[s];
      for (int w : B.hom(B.mtgt[v], q.obj[j])) {
        if (B.comp(w, v) != q.mor[s]) continue;
        int n = 0;
        for (int x : J.hom(ui, j))
          if (q.mor[x] == w && J.comp(x, m) == s) ++n;
        if (n != 1) return false;
      }
    }
    return true;
  };
  auto cart = [&](int m) {  // cartesian for p, the dual condition
    int i = J.mtgt[m], ui = J.msrc[m], u = p.mor[m];
    for (int s : J.in(i)) {
      int j = J.msrc[s];
      for (int w : A.hom(p.obj[j], A.msrc[u])) {
        if (A.comp(u, w) != p.mor[s]) continue;
        int n = 0;
        for (int x : J.hom(j, ui))
          if (p.mor[x] == w && J.comp(m, x) == s) ++n;
        if (n != 1) return false;
      }
    }
    return true;
  };
  for (int i = 0; i < J.n_obj(); ++i) {
    for (int v : B.out(q.obj[i])) {
      std::vector<int> hits;
      for (int m : J.out(i))
        if (q.mor[m] == v && A.is_id_mor(p.mor[m]) && opcart(m)) hits.push_back(m);
      if (hits.size() != 1) r.add("derive.rho_mor", "rho", hits.empty() ? "no opcartesian vertical lift" : "opcartesian vertical lift is not unique", {J.obj[i], B.mor[v]});
      else t.rho_mor[key2(i, v)] = hits[0];
    }
    for (int u : A.in(p.obj[i])) {
      std::vector<int> hits;
      for (int m : J.in(i))
        if (p.mor[m] == u && B.is_id_mor(q.mor[m]) && cart(m)) hits.push_back(m);
      if (hits.size() != 1) r.add("derive.lam_mor", "lambda", hits.empty() ? "no cartesian vertical lift" : "cartesian vertical lift is not unique", {A.mor[u], J.obj[i]});
      else t.lam_mor[key2(i, u)] = hits[0];
    }
  }
  for (int s = 0; s < J.n_mor(); ++s) {
    for (int al : A.cells_from(p.mor[s])) {
      std::vector<int> hits;
      for (int k : J.cells_from(s))
        if (p.cell[k] == al && B.is_id_cell(q.cell[k])) hits.push_back(k);
      if (hits.size() != 1) r.add("derive.lam_cell", "lambda", "no unique vertical cell lift", {J.mor[s], A.cell[al]});
      else t.lam_cell[key2(al, s)] = hits[0];
    }
    for (int be : B.cells_to(q.mor[s])) {
      std::vector<int> hits;
      for (int k : J.cells_to(s))
        if (q.cell[k] == be && A.is_id_cell(p.cell[k])) hits.push_back(k);
      if (hits.size() != 1) r.add("derive.rho_cell", "rho", "no unique vertical cell lift", {B.cell[be], J.mor[s]});
      else t.rho_cell[key2(be, s)] = hits[0];
    }
  }
  if (!r.ok()) return d;
  r.merge(check_twosided(t));
  if (r.ok()) d.t = std::move(t);
  return d;
}

// ---------------------------------------------------------------------------
// Fibres and morphisms of op-fibrations

// Sub-2-category of objects over (a, b), doubly vertical morphisms and cells.
inline Fin2Cat fibre(const TwoSided& t, int a, int b) {
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  Fin2Cat F;
  F.name = "fibre(" + A.obj[a] + "," + B.obj[b] + ")";
  std::vector<int> on(J.n_obj(), -1), mn(J.n_mor(), -1), cn(J.n_cell(), -1);
  for (int i = 0; i < J.n_obj(); ++i)
    if (t.p.obj[i] == a && t.q.obj[i] == b) { on[i] = F.n_obj(); F.obj.push_back(J.obj[i]); }
  for (int m = 0; m < J.n_mor(); ++m)
    if (on[J.msrc[m]] >= 0 && on[J.mtgt[m]] >= 0 && A.is_id_mor(t.p.mor[m]) && B.is_id_mor(t.q.mor[m])) {
      mn[m] = F.n_mor();
      F.mor.push_back(J.mor[m]);
      F.msrc.push_back(on[J.msrc[m]]);
      F.mtgt.push_back(on[J.mtgt[m]]);
    }
  for (int c = 0; c < J.n_cell(); ++c)
    if (mn[J.csrc[c]] >= 0 && mn[J.ctgt[c]] >= 0 && A.is_id_cell(t.p.cell[c]) && B.is_id_cell(t.q.cell[c])) {
      cn[c] = F.n_cell();
      F.cell.push_back(J.cell[c]);
      F.csrc.push_back(mn[J.csrc[c]]);
      F.ctgt.push_back(mn[J.ctgt[c]]);
    }
  for (int i = 0; i < J.n_obj(); ++i) if (on[i] >= 0) F.idm.push_back(mn[J.idm[i]]);
  for (int m = 0; m < J.n_mor(); ++m) if (mn[m] >= 0) F.idc.push_back(cn[J.idc[m]]);
  for (auto& [k, v] : J.hm) if (mn[key_hi(k)] >= 0 && mn[key_lo(k)] >= 0) F.hm[key2(mn[key_hi(k)], mn[key_lo(k)])] = mn[v];
  for (auto& [k, v] : J.vc) if (cn[key_hi(k)] >= 0 && cn[key_lo(k)] >= 0) F.vc[key2(cn[key_hi(k)], cn[key_lo(k)])] = cn[v];
  for (auto& [k, v] : J.hc) if (cn[key_hi(k)] >= 0 && cn[key_lo(k)] >= 0) F.hc[key2(cn[key_hi(k)], cn[key_lo(k)])] = cn[v];
  F.reindex();
  return F;
}

// phi: J -> K over g: B -> D preserves chosen lifts.
inline Report check_opfib_morphism(const Cleavage& cq, const Cleavage& cr, const TwoFunctor& phi, const TwoFunctor& g) {
  Report r;
  if (!(compose(cr.q, phi) == compose(g, cq.q))) {
    r.add("morphism.square", "phi", "r∘phi differs from g∘q");
    return r;
  }
  const Fin2Cat &J = *cq.q.src, &B = *cq.q.tgt;
  for (auto& [k, l] : sorted_entries(cq.mor)) {
    int i = key_hi(k), u = key_lo(k);
    if (cr.lift(phi.obj[i], g.mor[u]) != phi.mor[l]) r.add("morphism.lift", "phi", "morphism lift not preserved", {J.obj[i], B.mor[u]});
  }
  for (auto& [k, l] : sorted_entries(cq.cell)) {
    int be = key_hi(k), s = key_lo(k);
    if (cr.clift(g.cell[be], phi.mor[s]) != phi.cell[l]) r.add("morphism.cell_lift", "phi", "cell lift not preserved", {B.cell[be], J.mor[s]});
  }
  return r;
}

}  // namespace twocat
