#pragma once

#include "core2.hpp"

namespace twocat {

// Struct: Built
// A constructed 2-category together with the structural key of every
// element. Keys only reference the input data, never the result itself.
struct Built {
  Cat cat;
  std::vector<std::vector<int>> okey, mkey, ckey;
  TupleIndex oix, mix, cix;

  int obj(const std::vector<int>& k) const { return lookup(oix, k); }
  int mor(const std::vector<int>& k) const { return lookup(mix, k); }
  int cell(const std::vector<int>& k) const { return lookup(cix, k); }
};

// Accumulates elements in arbitrary order. finish() sorts them by id.
class RawBuild {
 public:
  Fin2Cat c;
  std::vector<std::vector<int>> okey, mkey, ckey;
  TupleIndex oix, mix, cix;

  int add_obj(std::string id, std::vector<int> key) {
    int i = c.n_obj();
    if (!oix.emplace(key, i).second) throw InconsistencyError("duplicate object key for " + id);
    c.obj.push_back(std::move(id));
    c.idm.push_back(-1);
    okey.push_back(std::move(key));
    check_cap(c.obj.size(), "object");
    return i;
  }
  int add_mor(std::string id, std::vector<int> key, int src, int tgt) {
    int i = c.n_mor();
    if (!mix.emplace(key, i).second) throw InconsistencyError("duplicate morphism key for " + id);
    c.mor.push_back(std::move(id));
    c.msrc.push_back(src);
    c.mtgt.push_back(tgt);
    c.idc.push_back(-1);
    mkey.push_back(std::move(key));
    check_cap(c.mor.size(), "morphism");
    return i;
  }
  int add_cell(std::string id, std::vector<int> key, int src, int tgt) {
    int i = c.n_cell();
    if (!cix.emplace(key, i).second) throw InconsistencyError("duplicate cell key for " + id);
    c.cell.push_back(std::move(id));
    c.csrc.push_back(src);
    c.ctgt.push_back(tgt);
    ckey.push_back(std::move(key));
    check_cap(c.cell.size(), "cell");
    return i;
  }
  int obj(const std::vector<int>& k) const { return lookup(oix, k); }
  int mor(const std::vector<int>& k) const { return lookup(mix, k); }
  int cell(const std::vector<int>& k) const { return lookup(cix, k); }

  Built finish() {
    Perms p;
    for (int o = 0; o < c.n_obj(); ++o)
      if (c.idm[o] < 0) throw InconsistencyError("construction left identity of " + c.obj[o] + " unset");
    for (int m = 0; m < c.n_mor(); ++m)
      if (c.idc[m] < 0) throw InconsistencyError("construction left identity cell of " + c.mor[m] + " unset");
    Fin2Cat canon = canonicalize(c, &p);
    Built b;
    b.cat = make_cat(std::move(canon));
    b.okey = permute(okey, p.obj);
    b.mkey = permute(mkey, p.mor);
    b.ckey = permute(ckey, p.cell);
    for (std::size_t i = 0; i < b.okey.size(); ++i) b.oix.emplace(b.okey[i], int(i));
    for (std::size_t i = 0; i < b.mkey.size(); ++i) b.mix.emplace(b.mkey[i], int(i));
    for (std::size_t i = 0; i < b.ckey.size(); ++i) b.cix.emplace(b.ckey[i], int(i));
    return b;
  }
};

}  // namespace twocat
