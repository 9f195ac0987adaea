#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "report.hpp"
#include "util.hpp"

namespace twocat {

// Class: Fin2Cat
// A finite strict 2-category given by explicit tables. Indices are dense and
// follow the bytewise order of the ids (canonical order), so two values built
// from the same data compare equal index for index.
//
// Conventions: comp(g, f) = g∘f; vcomp(a, b) = a⋄b is diagrammatic (a first);
// hcomp(psi, phi) = psi∘phi with phi: f⇒g in C(x,y), psi: h⇒k in C(y,z).
class Fin2Cat {
 public:
  std::string name;
  std::vector<std::string> obj, mor, cell;
  std::vector<int> msrc, mtgt;  // per morphism
  std::vector<int> csrc, ctgt;  // per cell, morphism indices
  std::vector<int> idm;         // per object
  std::vector<int> idc;         // per morphism
  PairTable hm, vc, hc;

  int n_obj() const { return int(obj.size()); }
  int n_mor() const { return int(mor.size()); }
  int n_cell() const { return int(cell.size()); }

  int comp(int g, int f) const { return lookup(hm, g, f); }
  int vcomp(int a, int b) const { return lookup(vc, a, b); }
  int hcomp(int psi, int phi) const { return lookup(hc, psi, phi); }
  // h∘phi
  int whl(int h, int phi) const { return (h < 0 || phi < 0) ? -1 : hcomp(idc[h], phi); }
  // psi∘f
  int whr(int psi, int f) const { return (psi < 0 || f < 0) ? -1 : hcomp(psi, idc[f]); }
  bool is_id_mor(int m) const { return m >= 0 && idm[msrc[m]] == m; }
  bool is_id_cell(int c) const { return c >= 0 && idc[csrc[c]] == c; }
  int csrc_obj(int c) const { return msrc[csrc[c]]; }
  int ctgt_obj(int c) const { return mtgt[csrc[c]]; }

  const std::vector<int>& hom(int a, int b) const { return get(hom_, key2(a, b)); }
  const std::vector<int>& out(int a) const { return out_[a]; }
  const std::vector<int>& in(int a) const { return in_[a]; }
  const std::vector<int>& cells_between(int f, int g) const { return get(between_, key2(f, g)); }
  const std::vector<int>& cells_in_hom(int a, int b) const { return get(cells_hom_, key2(a, b)); }
  const std::vector<int>& cells_from(int f) const { return cfrom_[f]; }
  const std::vector<int>& cells_to(int f) const { return cto_[f]; }

  int find_obj(const std::string& s) const { return find(obj_ix_, s); }
  int find_mor(const std::string& s) const { return find(mor_ix_, s); }
  int find_cell(const std::string& s) const { return find(cell_ix_, s); }

  // Rebuild derived indexes. Call after any change to the tables.
  void reindex() {
    hom_.clear();
    between_.clear();
    cells_hom_.clear();
    out_.assign(obj.size(), {});
    in_.assign(obj.size(), {});
    cfrom_.assign(mor.size(), {});
    cto_.assign(mor.size(), {});
    obj_ix_.clear();
    mor_ix_.clear();
    cell_ix_.clear();
    bool in_range = true;
    for (int m = 0; m < n_mor(); ++m) {
      if (!ok_obj(msrc[m]) || !ok_obj(mtgt[m])) { in_range = false; continue; }
      hom_[key2(msrc[m], mtgt[m])].push_back(m);
      out_[msrc[m]].push_back(m);
      in_[mtgt[m]].push_back(m);
    }
    for (int c = 0; c < n_cell(); ++c) {
      if (!ok_mor(csrc[c]) || !ok_mor(ctgt[c])) { in_range = false; continue; }
      between_[key2(csrc[c], ctgt[c])].push_back(c);
      cells_hom_[key2(msrc[csrc[c]], mtgt[csrc[c]])].push_back(c);
      cfrom_[csrc[c]].push_back(c);
      cto_[ctgt[c]].push_back(c);
    }
    (void)in_range;
    for (int i = 0; i < n_obj(); ++i) obj_ix_.emplace(obj[i], i);
    for (int i = 0; i < n_mor(); ++i) mor_ix_.emplace(mor[i], i);
    for (int i = 0; i < n_cell(); ++i) cell_ix_.emplace(cell[i], i);
  }

  bool ok_obj(int i) const { return i >= 0 && i < n_obj(); }
  bool ok_mor(int i) const { return i >= 0 && i < n_mor(); }
  bool ok_cell(int i) const { return i >= 0 && i < n_cell(); }

  bool same_tables(const Fin2Cat& o) const {
    return obj == o.obj && mor == o.mor && cell == o.cell && msrc == o.msrc && mtgt == o.mtgt &&
           csrc == o.csrc && ctgt == o.ctgt && idm == o.idm && idc == o.idc && hm == o.hm &&
           vc == o.vc && hc == o.hc;
  }

 private:
  static const std::vector<int>& get(const std::unordered_map<std::uint64_t, std::vector<int>>& m,
                                     std::uint64_t k) {
    static const std::vector<int> empty;
    auto it = m.find(k);
    return it == m.end() ? empty : it->second;
  }
  static int find(const std::unordered_map<std::string, int>& m, const std::string& s) {
    auto it = m.find(s);
    return it == m.end() ? -1 : it->second;
  }
  std::unordered_map<std::uint64_t, std::vector<int>> hom_, between_, cells_hom_;
  std::vector<std::vector<int>> out_, in_, cfrom_, cto_;
  std::unordered_map<std::string, int> obj_ix_, mor_ix_, cell_ix_;
};

using Cat = std::shared_ptr<const Fin2Cat>;

// Index permutations produced by canonicalization. perm[new] = old, inv[old] = new.
struct Perms {
  std::vector<int> obj, mor, cell;
  std::vector<int> obj_inv, mor_inv, cell_inv;
};

template <class T>
std::vector<T> permute(const std::vector<T>& v, const std::vector<int>& perm) {
  std::vector<T> out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = v[perm[i]];
  return out;
}

inline int remap(const std::vector<int>& inv, int x) {
  return (x >= 0 && x < int(inv.size())) ? inv[x] : -1;
}

inline PairTable remap_table(const PairTable& t, const std::vector<int>& inv_a,
                             const std::vector<int>& inv_b, const std::vector<int>& inv_v) {
  PairTable out;
  out.reserve(t.size());
  for (auto& [k, v] : t) out.emplace(key2(remap(inv_a, key_hi(k)), remap(inv_b, key_lo(k))), remap(inv_v, v));
  return out;
}

// Sort every kind by id and remap all tables. Input indices are arbitrary.
inline Fin2Cat canonicalize(const Fin2Cat& raw, Perms* perms_out = nullptr) {
  Perms p;
  p.obj = sort_perm(raw.obj);
  p.mor = sort_perm(raw.mor);
  p.cell = sort_perm(raw.cell);
  p.obj_inv = invert_perm(p.obj);
  p.mor_inv = invert_perm(p.mor);
  p.cell_inv = invert_perm(p.cell);
  Fin2Cat c;
  c.name = raw.name;
  c.obj = permute(raw.obj, p.obj);
  c.mor = permute(raw.mor, p.mor);
  c.cell = permute(raw.cell, p.cell);
  c.msrc.resize(c.mor.size());
  c.mtgt.resize(c.mor.size());
  c.idc.resize(c.mor.size());
  for (int i = 0; i < c.n_mor(); ++i) {
    int o = p.mor[i];
    c.msrc[i] = remap(p.obj_inv, raw.msrc[o]);
    c.mtgt[i] = remap(p.obj_inv, raw.mtgt[o]);
    c.idc[i] = o < int(raw.idc.size()) ? remap(p.cell_inv, raw.idc[o]) : -1;
  }
  c.csrc.resize(c.cell.size());
  c.ctgt.resize(c.cell.size());
  for (int i = 0; i < c.n_cell(); ++i) {
    int o = p.cell[i];
    c.csrc[i] = remap(p.mor_inv, raw.csrc[o]);
    c.ctgt[i] = remap(p.mor_inv, raw.ctgt[o]);
  }
  c.idm.resize(c.obj.size());
  for (int i = 0; i < c.n_obj(); ++i) {
    int o = p.obj[i];
    c.idm[i] = o < int(raw.idm.size()) ? remap(p.mor_inv, raw.idm[o]) : -1;
  }
  c.hm = remap_table(raw.hm, p.mor_inv, p.mor_inv, p.mor_inv);
  c.vc = remap_table(raw.vc, p.cell_inv, p.cell_inv, p.cell_inv);
  c.hc = remap_table(raw.hc, p.cell_inv, p.cell_inv, p.cell_inv);
  c.reindex();
  if (perms_out) *perms_out = std::move(p);
  return c;
}

// Class: Fin2CatBuilder
// Id-based builder for hand-written 2-categories.
class Fin2CatBuilder {
 public:
  explicit Fin2CatBuilder(std::string name = "") { raw_.name = std::move(name); }

  Fin2CatBuilder& object(const std::string& id) {
    if (objs_.count(id)) throw StructuralError("duplicate object id '" + id + "'");
    objs_[id] = raw_.n_obj();
    raw_.obj.push_back(id);
    raw_.idm.push_back(-1);
    return *this;
  }
  Fin2CatBuilder& morphism(const std::string& id, const std::string& src, const std::string& tgt) {
    if (mors_.count(id)) throw StructuralError("duplicate morphism id '" + id + "'");
    mors_[id] = raw_.n_mor();
    raw_.mor.push_back(id);
    raw_.msrc.push_back(need(objs_, src, "object"));
    raw_.mtgt.push_back(need(objs_, tgt, "object"));
    raw_.idc.push_back(-1);
    return *this;
  }
  Fin2CatBuilder& cell(const std::string& id, const std::string& src, const std::string& tgt) {
    if (cells_.count(id)) throw StructuralError("duplicate cell id '" + id + "'");
    cells_[id] = raw_.n_cell();
    raw_.cell.push_back(id);
    raw_.csrc.push_back(need(mors_, src, "morphism"));
    raw_.ctgt.push_back(need(mors_, tgt, "morphism"));
    return *this;
  }
  Fin2CatBuilder& id_mor(const std::string& o, const std::string& m) {
    raw_.idm[need(objs_, o, "object")] = need(mors_, m, "morphism");
    return *this;
  }
  Fin2CatBuilder& id_cell(const std::string& m, const std::string& c) {
    raw_.idc[need(mors_, m, "morphism")] = need(cells_, c, "cell");
    return *this;
  }
  Fin2CatBuilder& comp(const std::string& g, const std::string& f, const std::string& r) {
    raw_.hm[key2(need(mors_, g, "morphism"), need(mors_, f, "morphism"))] = need(mors_, r, "morphism");
    return *this;
  }
  Fin2CatBuilder& vcomp(const std::string& a, const std::string& b, const std::string& r) {
    raw_.vc[key2(need(cells_, a, "cell"), need(cells_, b, "cell"))] = need(cells_, r, "cell");
    return *this;
  }
  Fin2CatBuilder& hcomp(const std::string& psi, const std::string& phi, const std::string& r) {
    raw_.hc[key2(need(cells_, psi, "cell"), need(cells_, phi, "cell"))] = need(cells_, r, "cell");
    return *this;
  }
  bool has_mor(const std::string& id) const { return mors_.count(id) > 0; }
  bool has_cell(const std::string& id) const { return cells_.count(id) > 0; }

  Fin2Cat build() const { return canonicalize(raw_); }

 private:
  static int need(const std::map<std::string, int>& m, const std::string& id, const char* kind) {
    auto it = m.find(id);
    if (it == m.end()) throw StructuralError(std::string("dangling ") + kind + " id '" + id + "'");
    return it->second;
  }
  Fin2Cat raw_;
  std::map<std::string, int> objs_, mors_, cells_;
};

// Fill the three composition tables from component-wise rules.
// comp_mor(g,f), comp_v(a,b), comp_h(psi,phi) return the raw index or -1.
template <class FM, class FV, class FH>
void fill_tables(Fin2Cat& c, FM comp_mor, FV comp_v, FH comp_h) {
  for (int f = 0; f < c.n_mor(); ++f)
    for (int g : c.out(c.mtgt[f])) {
      int r = comp_mor(g, f);
      if (r < 0) throw InconsistencyError("composite " + c.mor[g] + "∘" + c.mor[f] + " not found");
      c.hm[key2(g, f)] = r;
    }
  for (int a = 0; a < c.n_cell(); ++a)
    for (int b : c.cells_from(c.ctgt[a])) {
      int r = comp_v(a, b);
      if (r < 0) throw InconsistencyError("composite " + c.cell[a] + "⋄" + c.cell[b] + " not found");
      c.vc[key2(a, b)] = r;
    }
  for (int phi = 0; phi < c.n_cell(); ++phi) {
    int y = c.ctgt_obj(phi);
    for (int k : c.out(y))
      for (int psi : c.cells_from(k)) {
        int r = comp_h(psi, phi);
        if (r < 0) throw InconsistencyError("composite " + c.cell[psi] + "∘" + c.cell[phi] + " not found");
        c.hc[key2(psi, phi)] = r;
      }
  }
}

// ---------------------------------------------------------------------------
// Validation

// Pass 1 checks every reference is in range. Pass 2 checks bookkeeping and
// table domains. Pass 3 checks the axioms: both hom-category laws, the
// 1-category laws, identity compatibility, whisker functoriality and
// associativity, and the interchange decomposition
//   psi∘phi = (h∘phi)⋄(psi∘g) = (psi∘f)⋄(k∘phi).
inline Report validate_2cat(const Fin2Cat& C) {
  Report r;
  const std::string loc = C.name.empty() ? "2-category" : C.name;
  auto nm = [&](int m) { return C.ok_mor(m) ? C.mor[m] : "#" + std::to_string(m); };
  auto nc = [&](int c) { return C.ok_cell(c) ? C.cell[c] : "#" + std::to_string(c); };

  // pass 1
  if (C.msrc.size() != C.mor.size() || C.mtgt.size() != C.mor.size() || C.csrc.size() != C.cell.size() ||
      C.ctgt.size() != C.cell.size() || C.idm.size() != C.obj.size() || C.idc.size() != C.mor.size()) {
    r.add("structural.shape", loc, "table lengths disagree with element counts");
    return r;
  }
  for (int m = 0; m < C.n_mor(); ++m)
    if (!C.ok_obj(C.msrc[m]) || !C.ok_obj(C.mtgt[m]))
      r.add("structural.dangling", loc, "morphism boundary out of range", {C.mor[m]});
  for (int c = 0; c < C.n_cell(); ++c)
    if (!C.ok_mor(C.csrc[c]) || !C.ok_mor(C.ctgt[c]))
      r.add("structural.dangling", loc, "cell boundary out of range", {C.cell[c]});
  for (int o = 0; o < C.n_obj(); ++o)
    if (!C.ok_mor(C.idm[o])) r.add("structural.dangling", loc, "identity morphism missing", {C.obj[o]});
  for (int m = 0; m < C.n_mor(); ++m)
    if (!C.ok_cell(C.idc[m])) r.add("structural.dangling", loc, "identity cell missing", {C.mor[m]});
  auto range = [&](const PairTable& t, bool cells, const char* what) {
    for (auto& [k, v] : sorted_entries(t)) {
      bool ok = cells ? (C.ok_cell(key_hi(k)) && C.ok_cell(key_lo(k)) && C.ok_cell(v))
                      : (C.ok_mor(key_hi(k)) && C.ok_mor(key_lo(k)) && C.ok_mor(v));
      if (!ok) r.add("structural.dangling", loc, std::string(what) + " entry out of range");
    }
  };
  range(C.hm, false, "hcomp_mor");
  range(C.vc, true, "vcomp");
  range(C.hc, true, "hcomp_cell");
  if (!r.ok()) return r;

  // pass 2
  for (int o = 0; o < C.n_obj(); ++o) {
    int i = C.idm[o];
    if (C.msrc[i] != o || C.mtgt[i] != o) r.add("bookkeeping.id_mor", loc, "identity has wrong boundary", {C.obj[o], C.mor[i]});
  }
  for (int m = 0; m < C.n_mor(); ++m) {
    int i = C.idc[m];
    if (C.csrc[i] != m || C.ctgt[i] != m) r.add("bookkeeping.id_cell", loc, "identity cell has wrong boundary", {C.mor[m], C.cell[i]});
  }
  for (int c = 0; c < C.n_cell(); ++c) {
    int f = C.csrc[c], g = C.ctgt[c];
    if (C.msrc[f] != C.msrc[g] || C.mtgt[f] != C.mtgt[g])
      r.add("bookkeeping.cell", loc, "cell between non-parallel morphisms", {C.cell[c], C.mor[f], C.mor[g]});
  }
  for (auto& [k, v] : sorted_entries(C.hm)) {
    int g = key_hi(k), f = key_lo(k);
    if (C.mtgt[f] != C.msrc[g]) r.add("table.extraneous", loc, "hcomp_mor defined on a non-composable pair", {C.mor[g], C.mor[f]});
    else if (C.msrc[v] != C.msrc[f] || C.mtgt[v] != C.mtgt[g])
      r.add("bookkeeping.hcomp_mor", loc, "composite has wrong boundary", {C.mor[g], C.mor[f], C.mor[v]});
  }
  for (auto& [k, v] : sorted_entries(C.vc)) {
    int a = key_hi(k), b = key_lo(k);
    if (C.ctgt[a] != C.csrc[b]) r.add("table.extraneous", loc, "vcomp defined on a non-composable pair", {C.cell[a], C.cell[b]});
    else if (C.csrc[v] != C.csrc[a] || C.ctgt[v] != C.ctgt[b])
      r.add("bookkeeping.vcomp", loc, "vertical composite has wrong boundary", {C.cell[a], C.cell[b], C.cell[v]});
  }
  for (auto& [k, v] : sorted_entries(C.hc)) {
    int psi = key_hi(k), phi = key_lo(k);
    if (C.mtgt[C.csrc[phi]] != C.msrc[C.csrc[psi]]) {
      r.add("table.extraneous", loc, "hcomp_cell defined on a non-composable pair", {C.cell[psi], C.cell[phi]});
      continue;
    }
    int s = C.comp(C.csrc[psi], C.csrc[phi]), t = C.comp(C.ctgt[psi], C.ctgt[phi]);
    if (s < 0 || t < 0 || C.csrc[v] != s || C.ctgt[v] != t)
      r.add("bookkeeping.hcomp_cell", loc, "horizontal composite has wrong boundary", {C.cell[psi], C.cell[phi], C.cell[v]});
  }
  for (int f = 0; f < C.n_mor(); ++f)
    for (int g : C.out(C.mtgt[f]))
      if (C.comp(g, f) < 0) r.add("table.missing", loc, "hcomp_mor undefined on a composable pair", {C.mor[g], C.mor[f]});
  for (int a = 0; a < C.n_cell(); ++a)
    for (int b : C.cells_from(C.ctgt[a]))
      if (C.vcomp(a, b) < 0) r.add("table.missing", loc, "vcomp undefined on a composable pair", {C.cell[a], C.cell[b]});
  for (int phi = 0; phi < C.n_cell(); ++phi)
    for (int k : C.out(C.ctgt_obj(phi)))
      for (int psi : C.cells_from(k))
        if (C.hcomp(psi, phi) < 0)
          r.add("table.missing", loc, "hcomp_cell undefined on a composable pair", {C.cell[psi], C.cell[phi]});
  // pass 3 indexes through composites, so only missing entries stop here;
  // boundary findings are reported together with the axioms they break
  if (r.has("table.missing")) return r;

  // pass 3: hom-categories
  for (int a = 0; a < C.n_cell(); ++a) {
    if (C.vcomp(C.idc[C.csrc[a]], a) != a || C.vcomp(a, C.idc[C.ctgt[a]]) != a)
      r.add("vcomp.unit", loc, "identity cell is not a unit for vcomp", {C.cell[a]});
    for (int b : C.cells_from(C.ctgt[a])) {
      int ab = C.vcomp(a, b);
      for (int c : C.cells_from(C.ctgt[b]))
        if (C.vcomp(ab, c) != C.vcomp(a, C.vcomp(b, c)))
          r.add("vcomp.assoc", loc, "vcomp is not associative", {C.cell[a], C.cell[b], C.cell[c]});
    }
  }
  // underlying 1-category
  for (int f = 0; f < C.n_mor(); ++f) {
    if (C.comp(C.idm[C.mtgt[f]], f) != f || C.comp(f, C.idm[C.msrc[f]]) != f)
      r.add("hcomp_mor.unit", loc, "identity morphism is not a unit", {C.mor[f]});
    for (int g : C.out(C.mtgt[f])) {
      int gf = C.comp(g, f);
      for (int h : C.out(C.mtgt[g]))
        if (C.comp(h, gf) != C.comp(C.comp(h, g), f))
          r.add("hcomp_mor.assoc", loc, "hcomp_mor is not associative", {C.mor[h], C.mor[g], C.mor[f]});
    }
  }
  // identities
  for (int f = 0; f < C.n_mor(); ++f)
    for (int g : C.out(C.mtgt[f]))
      if (C.hcomp(C.idc[g], C.idc[f]) != C.idc[C.comp(g, f)])
        r.add("hcomp_cell.id", loc, "horizontal composite of identity cells is not an identity", {C.mor[g], C.mor[f]});
  // whisker functoriality and associativity
  for (int phi = 0; phi < C.n_cell(); ++phi) {
    int x = C.csrc_obj(phi), y = C.ctgt_obj(phi);
    if (C.whl(C.idm[y], phi) != phi || C.whr(phi, C.idm[x]) != phi)
      r.add("whisker.unit", loc, "whiskering by an identity morphism is not trivial", {C.cell[phi]});
    for (int phi2 : C.cells_from(C.ctgt[phi])) {
      int v = C.vcomp(phi, phi2);
      for (int h : C.out(y))
        if (C.whl(h, v) != C.vcomp(C.whl(h, phi), C.whl(h, phi2)))
          r.add("whisker.left_functor", loc, "left whiskering does not preserve vcomp", {C.mor[h], C.cell[phi], C.cell[phi2]});
      for (int e : C.in(x))
        if (C.whr(v, e) != C.vcomp(C.whr(phi, e), C.whr(phi2, e)))
          r.add("whisker.right_functor", loc, "right whiskering does not preserve vcomp", {C.cell[phi], C.cell[phi2], C.mor[e]});
    }
    for (int h : C.out(y)) {
      for (int k : C.out(C.mtgt[h]))
        if (C.whl(C.comp(k, h), phi) != C.whl(k, C.whl(h, phi)))
          r.add("whisker.left_assoc", loc, "left whiskering is not associative", {C.mor[k], C.mor[h], C.cell[phi]});
      for (int e : C.in(x))
        if (C.whr(C.whl(h, phi), e) != C.whl(h, C.whr(phi, e)))
          r.add("whisker.middle_assoc", loc, "whiskering on both sides does not commute", {C.mor[h], C.cell[phi], C.mor[e]});
    }
    for (int e : C.in(x))
      for (int d : C.in(C.msrc[e]))
        if (C.whr(C.whr(phi, e), d) != C.whr(phi, C.comp(e, d)))
          r.add("whisker.right_assoc", loc, "right whiskering is not associative", {C.cell[phi], C.mor[e], C.mor[d]});
  }
  // interchange
  for (int phi = 0; phi < C.n_cell(); ++phi)
    for (int h : C.out(C.ctgt_obj(phi)))
      for (int psi : C.cells_from(h)) {
        int f = C.csrc[phi], g = C.ctgt[phi], k = C.ctgt[psi];
        int hc = C.hcomp(psi, phi);
        int a = C.vcomp(C.whl(h, phi), C.whr(psi, g));
        int b = C.vcomp(C.whr(psi, f), C.whl(k, phi));
        if (hc != a || hc != b)
          r.add("interchange", loc, "horizontal composite disagrees with its whisker decompositions",
                {nc(psi), nc(phi), nm(h), nm(k)});
      }
  return r;
}

// ---------------------------------------------------------------------------
// Duals

enum class Variant { op, co, coop };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::op: return "op";
    case Variant::co: return "co";
    default: return "coop";
  }
}

inline std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "op") return Variant::op;
  if (s == "co") return Variant::co;
  if (s == "coop") return Variant::coop;
  return std::nullopt;
}

// Same ids and indices; op reverses 1-cells, co reverses 2-cells.
inline Fin2Cat dualize(const Fin2Cat& C, Variant v) {
  bool rev1 = v != Variant::co, rev2 = v != Variant::op;
  Fin2Cat D = C;
  D.name = C.name.empty() ? "" : C.name + "^" + variant_name(v);
  if (rev1) {
    std::swap(D.msrc, D.mtgt);
    D.hm.clear();
    for (auto& [k, r] : C.hm) D.hm[key2(key_lo(k), key_hi(k))] = r;
    D.hc.clear();
    for (auto& [k, r] : C.hc) D.hc[key2(key_lo(k), key_hi(k))] = r;
  }
  if (rev2) {
    std::swap(D.csrc, D.ctgt);
    D.vc.clear();
    for (auto& [k, r] : C.vc) D.vc[key2(key_lo(k), key_hi(k))] = r;
  }
  D.reindex();
  if (D.same_tables(C)) D.name = C.name;  // self-dual: output equals input
  return D;
}

inline Cat make_cat(Fin2Cat c) { return std::make_shared<const Fin2Cat>(std::move(c)); }

// ---------------------------------------------------------------------------
// 2-functors and lax transformations

struct TwoFunctor {
  Cat src, tgt;
  std::vector<int> obj, mor, cell;

  bool operator==(const TwoFunctor& o) const {
    return same(src, o.src) && same(tgt, o.tgt) && obj == o.obj && mor == o.mor && cell == o.cell;
  }
  static bool same(const Cat& a, const Cat& b) { return a == b || (a && b && a->same_tables(*b)); }
};

inline TwoFunctor identity_functor(const Cat& C) {
  TwoFunctor F{C, C, {}, {}, {}};
  F.obj.resize(C->n_obj());
  F.mor.resize(C->n_mor());
  F.cell.resize(C->n_cell());
  std::iota(F.obj.begin(), F.obj.end(), 0);
  std::iota(F.mor.begin(), F.mor.end(), 0);
  std::iota(F.cell.begin(), F.cell.end(), 0);
  return F;
}

// G∘F
inline TwoFunctor compose(const TwoFunctor& G, const TwoFunctor& F) {
  if (!TwoFunctor::same(F.tgt, G.src)) throw StructuralError("compose: codomain/domain mismatch");
  TwoFunctor H{F.src, G.tgt, {}, {}, {}};
  auto ap = [](const std::vector<int>& g, int x) { return x < 0 || x >= int(g.size()) ? -1 : g[x]; };
  for (int x : F.obj) H.obj.push_back(ap(G.obj, x));
  for (int x : F.mor) H.mor.push_back(ap(G.mor, x));
  for (int x : F.cell) H.cell.push_back(ap(G.cell, x));
  return H;
}

inline TwoFunctor dualize(const TwoFunctor& F, Variant v) {
  TwoFunctor D = F;
  D.src = make_cat(dualize(*F.src, v));
  D.tgt = make_cat(dualize(*F.tgt, v));
  return D;
}

inline Report validate_2functor(const TwoFunctor& F, const std::string& loc = "2-functor") {
  Report r;
  const Fin2Cat &X = *F.src, &Y = *F.tgt;
  if (int(F.obj.size()) != X.n_obj() || int(F.mor.size()) != X.n_mor() || int(F.cell.size()) != X.n_cell()) {
    r.add("structural.shape", loc, "map lengths disagree with the source");
    return r;
  }
  for (int x = 0; x < X.n_obj(); ++x)
    if (!Y.ok_obj(F.obj[x])) r.add("structural.dangling", loc, "object image out of range", {X.obj[x]});
  for (int x = 0; x < X.n_mor(); ++x)
    if (!Y.ok_mor(F.mor[x])) r.add("structural.dangling", loc, "morphism image out of range", {X.mor[x]});
  for (int x = 0; x < X.n_cell(); ++x)
    if (!Y.ok_cell(F.cell[x])) r.add("structural.dangling", loc, "cell image out of range", {X.cell[x]});
  if (!r.ok()) return r;
  for (int m = 0; m < X.n_mor(); ++m)
    if (Y.msrc[F.mor[m]] != F.obj[X.msrc[m]] || Y.mtgt[F.mor[m]] != F.obj[X.mtgt[m]])
      r.add("functor.boundary", loc, "morphism image has wrong boundary", {X.mor[m], Y.mor[F.mor[m]]});
  for (int c = 0; c < X.n_cell(); ++c)
    if (Y.csrc[F.cell[c]] != F.mor[X.csrc[c]] || Y.ctgt[F.cell[c]] != F.mor[X.ctgt[c]])
      r.add("functor.boundary", loc, "cell image has wrong boundary", {X.cell[c], Y.cell[F.cell[c]]});
  for (int o = 0; o < X.n_obj(); ++o)
    if (F.mor[X.idm[o]] != Y.idm[F.obj[o]]) r.add("functor.id_mor", loc, "identity morphism not preserved", {X.obj[o]});
  for (int m = 0; m < X.n_mor(); ++m)
    if (F.cell[X.idc[m]] != Y.idc[F.mor[m]]) r.add("functor.id_cell", loc, "identity cell not preserved", {X.mor[m]});
  for (auto& [k, v] : sorted_entries(X.hm))
    if (F.mor[v] != Y.comp(F.mor[key_hi(k)], F.mor[key_lo(k)]))
      r.add("functor.hcomp_mor", loc, "composition not preserved", {X.mor[key_hi(k)], X.mor[key_lo(k)]});
  for (auto& [k, v] : sorted_entries(X.vc))
    if (F.cell[v] != Y.vcomp(F.cell[key_hi(k)], F.cell[key_lo(k)]))
      r.add("functor.vcomp", loc, "vertical composition not preserved", {X.cell[key_hi(k)], X.cell[key_lo(k)]});
  for (auto& [k, v] : sorted_entries(X.hc))
    if (F.cell[v] != Y.hcomp(F.cell[key_hi(k)], F.cell[key_lo(k)]))
      r.add("functor.hcomp_cell", loc, "horizontal composition not preserved", {X.cell[key_hi(k)], X.cell[key_lo(k)]});
  return r;
}

inline bool is_iso(const TwoFunctor& F) {
  auto bij = [](const std::vector<int>& v, int n) {
    if (int(v.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int x : v) {
      if (x < 0 || x >= n || seen[x]) return false;
      seen[x] = 1;
    }
    return true;
  };
  return bij(F.obj, F.tgt->n_obj()) && bij(F.mor, F.tgt->n_mor()) && bij(F.cell, F.tgt->n_cell());
}

inline TwoFunctor inverse(const TwoFunctor& F) {
  if (!is_iso(F)) throw InconsistencyError("inverse of a non-bijective 2-functor");
  TwoFunctor G{F.tgt, F.src, invert_perm(F.obj), invert_perm(F.mor), invert_perm(F.cell)};
  return G;
}

// Struct: LaxTrans
// phi: F => G with components comp[x]: Fx -> Gx and naturality cells
// nat[s]: Gs∘phi_x => phi_y∘Fs for s: x -> y.
struct LaxTrans {
  TwoFunctor F, G;
  std::vector<int> comp, nat;

  const Fin2Cat& dom() const { return *F.src; }
  const Fin2Cat& cod() const { return *F.tgt; }
  bool operator==(const LaxTrans& o) const { return F == o.F && G == o.G && comp == o.comp && nat == o.nat; }
};

inline Report validate_lax(const LaxTrans& t, const std::string& loc = "lax transformation") {
  Report r;
  if (!TwoFunctor::same(t.F.src, t.G.src) || !TwoFunctor::same(t.F.tgt, t.G.tgt)) {
    r.add("structural.boundary", loc, "boundary 2-functors are not parallel");
    return r;
  }
  const Fin2Cat &A = *t.F.src, &C = *t.F.tgt;
  if (int(t.comp.size()) != A.n_obj() || int(t.nat.size()) != A.n_mor()) {
    r.add("structural.shape", loc, "component lengths disagree with the source");
    return r;
  }
  for (int x = 0; x < A.n_obj(); ++x)
    if (!C.ok_mor(t.comp[x])) r.add("structural.dangling", loc, "component out of range", {A.obj[x]});
  for (int s = 0; s < A.n_mor(); ++s)
    if (!C.ok_cell(t.nat[s])) r.add("structural.dangling", loc, "naturality cell out of range", {A.mor[s]});
  if (!r.ok()) return r;
  for (int x = 0; x < A.n_obj(); ++x) {
    int m = t.comp[x];
    if (C.msrc[m] != t.F.obj[x] || C.mtgt[m] != t.G.obj[x])
      r.add("lax.component", loc, "component has wrong boundary", {A.obj[x], C.mor[m]});
  }
  if (!r.ok()) return r;
  for (int s = 0; s < A.n_mor(); ++s) {
    int x = A.msrc[s], y = A.mtgt[s];
    int want_src = C.comp(t.G.mor[s], t.comp[x]), want_tgt = C.comp(t.comp[y], t.F.mor[s]);
    if (C.csrc[t.nat[s]] != want_src || C.ctgt[t.nat[s]] != want_tgt)
      r.add("lax.nat_boundary", loc, "naturality cell has wrong boundary", {A.mor[s], C.cell[t.nat[s]]});
  }
  if (!r.ok()) return r;
  for (int x = 0; x < A.n_obj(); ++x)
    if (t.nat[A.idm[x]] != C.idc[t.comp[x]]) r.add("lax.unit", loc, "naturality cell at an identity is not an identity", {A.obj[x]});
  for (auto& [k, ts] : sorted_entries(A.hm)) {
    int tt = key_hi(k), s = key_lo(k);
    int want = C.vcomp(C.whl(t.G.mor[tt], t.nat[s]), C.whr(t.nat[tt], t.F.mor[s]));
    if (t.nat[ts] != want) r.add("lax.composition", loc, "naturality cells do not compose", {A.mor[tt], A.mor[s]});
  }
  for (int sg = 0; sg < A.n_cell(); ++sg) {
    int s = A.csrc[sg], s2 = A.ctgt[sg], x = A.msrc[s], y = A.mtgt[s];
    int lhs = C.vcomp(C.whr(t.G.cell[sg], t.comp[x]), t.nat[s2]);
    int rhs = C.vcomp(t.nat[s], C.whl(t.comp[y], t.F.cell[sg]));
    if (lhs != rhs) r.add("lax.cell_naturality", loc, "naturality fails at a 2-cell", {A.cell[sg]});
  }
  return r;
}

inline LaxTrans identity_lax(const TwoFunctor& F) {
  LaxTrans t{F, F, {}, {}};
  const Fin2Cat& C = *F.tgt;
  for (int x = 0; x < F.src->n_obj(); ++x) t.comp.push_back(C.idm[F.obj[x]]);
  for (int s = 0; s < F.src->n_mor(); ++s) t.nat.push_back(C.idc[F.mor[s]]);
  return t;
}

// psi ⋄ phi as a vertical composite: first phi: F => G, then psi: G => H.
inline LaxTrans compose_lax(const LaxTrans& psi, const LaxTrans& phi) {
  if (!(phi.G == psi.F)) throw StructuralError("compose_lax: boundaries do not match");
  const Fin2Cat &A = phi.dom(), &C = phi.cod();
  LaxTrans t{phi.F, psi.G, {}, {}};
  for (int x = 0; x < A.n_obj(); ++x) t.comp.push_back(C.comp(psi.comp[x], phi.comp[x]));
  for (int s = 0; s < A.n_mor(); ++s) {
    int x = A.msrc[s], y = A.mtgt[s];
    t.nat.push_back(C.vcomp(C.whr(psi.nat[s], phi.comp[x]), C.whl(psi.comp[y], phi.nat[s])));
  }
  return t;
}

// h∘phi for a 2-functor h out of the codomain.
inline LaxTrans whisker_left(const TwoFunctor& h, const LaxTrans& phi) {
  LaxTrans t{compose(h, phi.F), compose(h, phi.G), {}, {}};
  for (int m : phi.comp) t.comp.push_back(h.mor[m]);
  for (int c : phi.nat) t.nat.push_back(h.cell[c]);
  return t;
}

// phi∘e for a 2-functor e into the domain.
inline LaxTrans whisker_right(const LaxTrans& phi, const TwoFunctor& e) {
  LaxTrans t{compose(phi.F, e), compose(phi.G, e), {}, {}};
  for (int x : e.obj) t.comp.push_back(phi.comp[x]);
  for (int s : e.mor) t.nat.push_back(phi.nat[s]);
  return t;
}

inline bool is_strict(const LaxTrans& t) {
  for (int c : t.nat)
    if (!t.cod().is_id_cell(c)) return false;
  return true;
}

inline bool is_costrict(const LaxTrans& t) {
  for (int m : t.comp)
    if (!t.cod().is_id_mor(m)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration

struct FunctorFilters {
  std::function<bool(int, int)> obj, mor, cell;  // (source element, candidate image)
};

namespace detail {

// Build a step order where every morphism follows its endpoints and every
// cell follows its boundary morphisms, and attach each table constraint to
// the step where its last participant is assigned.
struct Agenda {
  struct Step {
    int kind, idx;
  };
  std::vector<Step> steps;
  std::vector<int> pos_obj, pos_mor, pos_cell;
};

inline Agenda make_agenda(const Fin2Cat& X) {
  Agenda a;
  a.pos_obj.assign(X.n_obj(), -1);
  a.pos_mor.assign(X.n_mor(), -1);
  a.pos_cell.assign(X.n_cell(), -1);
  std::vector<int> mor_wait(X.n_mor(), 0), cell_wait(X.n_cell(), 0);
  for (int m = 0; m < X.n_mor(); ++m) mor_wait[m] = (X.msrc[m] == X.mtgt[m]) ? 1 : 2;
  for (int c = 0; c < X.n_cell(); ++c) cell_wait[c] = (X.csrc[c] == X.ctgt[c]) ? 1 : 2;
  std::vector<std::vector<int>> cells_touching(X.n_mor());
  for (int c = 0; c < X.n_cell(); ++c) {
    cells_touching[X.csrc[c]].push_back(c);
    if (X.ctgt[c] != X.csrc[c]) cells_touching[X.ctgt[c]].push_back(c);
  }
  auto push_mor = [&](int m) {
    a.pos_mor[m] = int(a.steps.size());
    a.steps.push_back({1, m});
    for (int c : cells_touching[m])
      if (--cell_wait[c] == 0) {
        a.pos_cell[c] = int(a.steps.size());
        a.steps.push_back({2, c});
      }
  };
  std::vector<std::vector<int>> mors_touching(X.n_obj());
  for (int m = 0; m < X.n_mor(); ++m) {
    mors_touching[X.msrc[m]].push_back(m);
    if (X.mtgt[m] != X.msrc[m]) mors_touching[X.mtgt[m]].push_back(m);
  }
  // Objects in breadth-first order over the underlying graph, so that
  // morphisms become assignable early.
  std::vector<char> seen(X.n_obj(), 0);
  std::vector<int> order;
  for (int s = 0; s < X.n_obj(); ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    std::size_t head = order.size();
    order.push_back(s);
    while (head < order.size()) {
      int o = order[head++];
      for (int m : mors_touching[o]) {
        int other = X.msrc[m] == o ? X.mtgt[m] : X.msrc[m];
        if (!seen[other]) {
          seen[other] = 1;
          order.push_back(other);
        }
      }
    }
  }
  for (int o : order) {
    a.pos_obj[o] = int(a.steps.size());
    a.steps.push_back({0, o});
    for (int m : mors_touching[o])
      if (--mor_wait[m] == 0) push_mor(m);
  }
  return a;
}

}  // namespace detail

// Enumerate 2-functors X -> Y passing the filters; calls visit for each and
// stops when visit returns false or limit results were produced. Returns the
// number of results. Throws CapError if the search budget is exhausted.
inline std::size_t enumerate_functors(const Cat& X, const Cat& Y, const FunctorFilters& flt,
                                      const std::function<bool(const TwoFunctor&)>& visit,
                                      std::size_t limit = SIZE_MAX) {
  const Fin2Cat &A = *X, &B = *Y;
  detail::Agenda ag = detail::make_agenda(A);
  const int n = int(ag.steps.size());
  // constraints keyed by step position
  struct Con {
    int kind, a, b, r;  // 0: hm, 1: vc, 2: hc
  };
  std::vector<std::vector<Con>> cons(n + 1);
  auto pos_of_mor = [&](int m) { return ag.pos_mor[m]; };
  auto pos_of_cell = [&](int c) { return ag.pos_cell[c]; };
  for (auto& [k, v] : A.hm) {
    int p = std::max({pos_of_mor(key_hi(k)), pos_of_mor(key_lo(k)), pos_of_mor(v)});
    cons[p].push_back({0, key_hi(k), key_lo(k), v});
  }
  for (auto& [k, v] : A.vc) {
    int p = std::max({pos_of_cell(key_hi(k)), pos_of_cell(key_lo(k)), pos_of_cell(v)});
    cons[p].push_back({1, key_hi(k), key_lo(k), v});
  }
  for (auto& [k, v] : A.hc) {
    int p = std::max({pos_of_cell(key_hi(k)), pos_of_cell(key_lo(k)), pos_of_cell(v)});
    cons[p].push_back({2, key_hi(k), key_lo(k), v});
  }
  for (auto& c : cons) std::sort(c.begin(), c.end(), [](const Con& x, const Con& y) {
      return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b); });
  TwoFunctor F{X, Y, std::vector<int>(A.n_obj(), -1), std::vector<int>(A.n_mor(), -1),
               std::vector<int>(A.n_cell(), -1)};
  std::size_t found = 0, steps = 0;
  bool stop = false;
  std::vector<int> allobj(B.n_obj());
  std::iota(allobj.begin(), allobj.end(), 0);
  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    if (++steps > settings().search_cap) throw CapError("functor enumeration exceeded the search budget");
    if (i == n) {
      ++found;
      if (!visit(F) || found >= limit) stop = true;
      return;
    }
    auto [kind, idx] = ag.steps[i];
    auto check = [&]() {
      for (auto& c : cons[i]) {
        if (c.kind == 0 && F.mor[c.r] != B.comp(F.mor[c.a], F.mor[c.b])) return false;
        if (c.kind == 1 && F.cell[c.r] != B.vcomp(F.cell[c.a], F.cell[c.b])) return false;
        if (c.kind == 2 && F.cell[c.r] != B.hcomp(F.cell[c.a], F.cell[c.b])) return false;
      }
      return true;
    };
    if (kind == 0) {
      for (int y : allobj) {
        if (flt.obj && !flt.obj(idx, y)) continue;
        F.obj[idx] = y;
        if (check()) rec(i + 1);
        if (stop) break;
      }
      F.obj[idx] = -1;
    } else if (kind == 1) {
      int s = F.obj[A.msrc[idx]], t = F.obj[A.mtgt[idx]];
      if (A.is_id_mor(idx)) {
        int y = B.idm[s];
        if (!flt.mor || flt.mor(idx, y)) {
          F.mor[idx] = y;
          if (check()) rec(i + 1);
        }
      } else {
        for (int y : B.hom(s, t)) {
          if (flt.mor && !flt.mor(idx, y)) continue;
          F.mor[idx] = y;
          if (check()) rec(i + 1);
          if (stop) break;
        }
      }
      F.mor[idx] = -1;
    } else {
      int s = F.mor[A.csrc[idx]], t = F.mor[A.ctgt[idx]];
      if (A.is_id_cell(idx)) {
        int y = B.idc[s];
        if (!flt.cell || flt.cell(idx, y)) {
          F.cell[idx] = y;
          if (check()) rec(i + 1);
        }
      } else {
        for (int y : B.cells_between(s, t)) {
          if (flt.cell && !flt.cell(idx, y)) continue;
          F.cell[idx] = y;
          if (check()) rec(i + 1);
          if (stop) break;
        }
      }
      F.cell[idx] = -1;
    }
  };
  rec(0);
  return found;
}

inline std::vector<TwoFunctor> all_functors(const Cat& X, const Cat& Y, const FunctorFilters& flt = {},
                                            std::size_t limit = SIZE_MAX) {
  std::vector<TwoFunctor> out;
  enumerate_functors(X, Y, flt, [&](const TwoFunctor& F) { out.push_back(F); return true; }, limit);
  return out;
}

struct LaxFilters {
  std::function<bool(int, int)> comp, nat;  // (object, morphism) and (morphism, cell)
};

// Enumerate lax transformations F => G.
inline std::size_t enumerate_lax(const TwoFunctor& F, const TwoFunctor& G, const LaxFilters& flt,
                                 const std::function<bool(const LaxTrans&)>& visit,
                                 std::size_t limit = SIZE_MAX) {
  const Fin2Cat &A = *F.src, &C = *F.tgt;
  detail::Agenda ag = detail::make_agenda(A);
  // Only object and morphism steps are used.
  std::vector<detail::Agenda::Step> steps;
  std::vector<int> pos_mor(A.n_mor(), -1);
  for (auto st : ag.steps)
    if (st.kind != 2) {
      if (st.kind == 1) pos_mor[st.idx] = int(steps.size());
      steps.push_back(st);
    }
  const int n = int(steps.size());
  struct Con {
    int kind, a, b, r;  // 0: composition (t, s, t∘s), 1: cell naturality (sigma)
  };
  std::vector<std::vector<Con>> cons(n + 1);
  for (auto& [k, v] : A.hm) {
    int p = std::max({pos_mor[key_hi(k)], pos_mor[key_lo(k)], pos_mor[v]});
    cons[p].push_back({0, key_hi(k), key_lo(k), v});
  }
  for (int sg = 0; sg < A.n_cell(); ++sg) {
    int p = std::max(pos_mor[A.csrc[sg]], pos_mor[A.ctgt[sg]]);
    cons[p].push_back({1, sg, 0, 0});
  }
  for (auto& c : cons) std::sort(c.begin(), c.end(), [](const Con& x, const Con& y) {
      return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b); });
  LaxTrans t{F, G, std::vector<int>(A.n_obj(), -1), std::vector<int>(A.n_mor(), -1)};
  std::size_t found = 0, nsteps = 0;
  bool stop = false;
  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    if (++nsteps > settings().search_cap) throw CapError("lax transformation enumeration exceeded the search budget");
    if (i == n) {
      ++found;
      if (!visit(t) || found >= limit) stop = true;
      return;
    }
    auto check = [&]() {
      for (auto& c : cons[i]) {
        if (c.kind == 0) {
          int want = C.vcomp(C.whl(G.mor[c.a], t.nat[c.b]), C.whr(t.nat[c.a], F.mor[c.b]));
          if (t.nat[c.r] != want) return false;
        } else {
          int sg = c.a, s = A.csrc[sg], s2 = A.ctgt[sg], x = A.msrc[s], y = A.mtgt[s];
          int lhs = C.vcomp(C.whr(G.cell[sg], t.comp[x]), t.nat[s2]);
          int rhs = C.vcomp(t.nat[s], C.whl(t.comp[y], F.cell[sg]));
          if (lhs != rhs) return false;
        }
      }
      return true;
    };
    auto [kind, idx] = steps[i];
    if (kind == 0) {
      for (int m : C.hom(F.obj[idx], G.obj[idx])) {
        if (flt.comp && !flt.comp(idx, m)) continue;
        t.comp[idx] = m;
        if (check()) rec(i + 1);
        if (stop) break;
      }
      t.comp[idx] = -1;
    } else {
      int x = A.msrc[idx], y = A.mtgt[idx];
      int a = C.comp(G.mor[idx], t.comp[x]), b = C.comp(t.comp[y], F.mor[idx]);
      if (A.is_id_mor(idx)) {
        int c = C.idc[t.comp[x]];
        if (!flt.nat || flt.nat(idx, c)) {
          t.nat[idx] = c;
          if (check()) rec(i + 1);
        }
      } else {
        for (int c : C.cells_between(a, b)) {
          if (flt.nat && !flt.nat(idx, c)) continue;
          t.nat[idx] = c;
          if (check()) rec(i + 1);
          if (stop) break;
        }
      }
      t.nat[idx] = -1;
    }
  };
  rec(0);
  return found;
}

inline std::vector<LaxTrans> all_lax(const TwoFunctor& F, const TwoFunctor& G, const LaxFilters& flt = {},
                                     std::size_t limit = SIZE_MAX) {
  std::vector<LaxTrans> out;
  enumerate_lax(F, G, flt, [&](const LaxTrans& t) { out.push_back(t); return true; }, limit);
  return out;
}

// 2-natural transformations: naturality cells are identities.
inline LaxFilters strict_filter(const Fin2Cat& C) {
  LaxFilters f;
  f.nat = [&C](int, int c) { return C.is_id_cell(c); };
  return f;
}

}  // namespace twocat
