#pragma once

#include <map>
#include <set>

#include "core2.hpp"

namespace twocat {

// Struct: PosetalSpec
// A locally posetal 2-category presented by an acyclic graph (morphisms are
// its paths) and generating inequalities between parallel paths. Paths are
// written as generator lists in application order.
struct PosetalSpec {
  std::string name;
  std::vector<std::string> objects;
  struct Gen {
    std::string id, src, tgt;
  };
  std::vector<Gen> gens;
  struct Ineq {
    std::vector<std::string> lo, hi;
    std::string name;  // optional id for the generating cell
  };
  std::vector<Ineq> cells;
};

inline Fin2Cat posetal_2cat(const PosetalSpec& spec) {
  std::map<std::string, int> oix;
  for (std::size_t i = 0; i < spec.objects.size(); ++i) oix[spec.objects[i]] = int(i);
  std::map<std::string, int> gix;
  for (std::size_t i = 0; i < spec.gens.size(); ++i) gix[spec.gens[i].id] = int(i);
  auto gsrc = [&](int g) { return oix.at(spec.gens[g].src); };
  auto gtgt = [&](int g) { return oix.at(spec.gens[g].tgt); };

  // all paths, by breadth-first extension; the graph must be acyclic
  struct Path {
    int src, tgt;
    std::vector<int> gens;
  };
  std::vector<Path> paths;
  std::map<std::pair<int, std::vector<int>>, int> pix;
  for (int o = 0; o < int(spec.objects.size()); ++o) {
    pix[{o, {}}] = int(paths.size());
    paths.push_back({o, o, {}});
  }
  for (std::size_t head = 0; head < paths.size(); ++head) {
    if (paths[head].gens.size() > spec.gens.size()) throw StructuralError("posetal presentation has a cycle");
    for (int g = 0; g < int(spec.gens.size()); ++g) {
      if (gsrc(g) != paths[head].tgt) continue;
      Path p = paths[head];
      p.gens.push_back(g);
      p.tgt = gtgt(g);
      if (pix.emplace(std::make_pair(p.src, p.gens), int(paths.size())).second) paths.push_back(p);
    }
  }
  auto pid = [&](const Path& p) {
    if (p.gens.empty()) return "id_" + spec.objects[p.src];
    std::string s;
    for (auto it = p.gens.rbegin(); it != p.gens.rend(); ++it) {
      if (!s.empty()) s += ".";
      s += spec.gens[*it].id;
    }
    return s;
  };
  auto find_path = [&](int src, const std::vector<std::string>& gs) {
    std::vector<int> v;
    for (auto& g : gs) v.push_back(gix.at(g));
    auto it = pix.find({src, v});
    if (it == pix.end()) throw StructuralError("unknown path in posetal presentation");
    return it->second;
  };
  auto path_src_of = [&](const std::vector<std::string>& gs, const std::string& fallback) {
    return gs.empty() ? oix.at(fallback) : gsrc(gix.at(gs.front()));
  };
  auto comp = [&](int q, int p) {  // q∘p
    std::vector<int> v = paths[p].gens;
    v.insert(v.end(), paths[q].gens.begin(), paths[q].gens.end());
    return pix.at({paths[p].src, v});
  };
  const int np = int(paths.size());
  std::set<std::pair<int, int>> le;
  for (int p = 0; p < np; ++p) le.insert({p, p});
  std::map<std::pair<int, int>, std::string> names;
  for (auto& c : spec.cells) {
    std::string anchor = spec.objects.front();
    int s = path_src_of(!c.lo.empty() ? c.lo : c.hi, anchor);
    int lo = find_path(s, c.lo), hi = find_path(s, c.hi);
    if (paths[lo].tgt != paths[hi].tgt) throw StructuralError("inequality between non-parallel paths");
    le.insert({lo, hi});
    if (!c.name.empty()) names[{lo, hi}] = c.name;
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::pair<int, int>> cur(le.begin(), le.end());
    for (auto [a, b] : cur) {
      for (int h = 0; h < np; ++h) {
        if (paths[h].src == paths[a].tgt) changed |= le.insert({comp(h, a), comp(h, b)}).second;
        if (paths[h].tgt == paths[a].src) changed |= le.insert({comp(a, h), comp(b, h)}).second;
      }
      for (auto [c, d] : cur)
        if (c == b) changed |= le.insert({a, d}).second;
    }
  }
  for (auto [a, b] : le)
    if (a != b && le.count({b, a})) throw StructuralError("posetal presentation creates an invertible cell");

  Fin2CatBuilder B(spec.name);
  for (auto& o : spec.objects) B.object(o);
  for (auto& p : paths) B.morphism(pid(p), spec.objects[p.src], spec.objects[p.tgt]);
  for (int o = 0; o < int(spec.objects.size()); ++o) B.id_mor(spec.objects[o], pid(paths[pix.at({o, {}})]));
  auto cid = [&](int a, int b) {
    if (a == b) return "id_" + pid(paths[a]);
    auto it = names.find({a, b});
    return it != names.end() ? it->second : pid(paths[a]) + "=>" + pid(paths[b]);
  };
  for (auto [a, b] : le) B.cell(cid(a, b), pid(paths[a]), pid(paths[b]));
  for (int p = 0; p < np; ++p) B.id_cell(pid(paths[p]), cid(p, p));
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < np; ++q)
      if (paths[q].src == paths[p].tgt) B.comp(pid(paths[q]), pid(paths[p]), pid(paths[comp(q, p)]));
  for (auto [a, b] : le)
    for (auto [c, d] : le) {
      if (b == c) B.vcomp(cid(a, b), cid(c, d), cid(a, d));
      if (paths[c].src == paths[a].tgt)  // (c<=d)∘(a<=b)
        B.hcomp(cid(c, d), cid(a, b), cid(comp(c, a), comp(d, b)));
    }
  return B.build();
}

inline Fin2Cat terminal_cat() {
  return posetal_2cat({"terminal", {"*"}, {}, {}});
}

// walking arrow 0 -> 1
inline Fin2Cat arrow_cat() {
  return posetal_2cat({"arrow", {"0", "1"}, {{"a", "0", "1"}}, {}});
}

// walking 2-cell u => v : 0 -> 1
inline Fin2Cat cell_cat() {
  return posetal_2cat({"C2", {"0", "1"}, {{"u", "0", "1"}, {"v", "0", "1"}}, {{{"u"}, {"v"}, "g"}}});
}

}  // namespace twocat
