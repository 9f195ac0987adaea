#pragma once

#include <random>

#include "limits.hpp"
#include "fib.hpp"

namespace twocat {

// Single-entry table mutations. Each mutant differs from its source in
// exactly one entry; the description names the table and entry.
struct Mutation {
  std::string where;
};

namespace detail {

// A mutable slot: either a vector entry or a PairTable value, with the size
// of the range its values live in.
struct Slot {
  std::string name;
  std::vector<int>* vec = nullptr;
  PairTable* tab = nullptr;
  int range = 0;
  std::size_t size() const { return vec ? vec->size() : tab->size(); }
};

inline Mutation mutate_slots(std::vector<Slot> slots, std::mt19937_64& rng) {
  std::vector<Slot> live;
  for (auto& s : slots)
    if (s.size() > 0 && s.range > 1) live.push_back(s);
  if (live.empty()) throw StructuralError("nothing to mutate");
  std::size_t total = 0;
  for (auto& s : live) total += s.size();
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
  for (auto& s : live) {
    if (pick >= s.size()) {
      pick -= s.size();
      continue;
    }
    int* cell;
    std::string at;
    if (s.vec) {
      cell = &(*s.vec)[pick];
      at = std::to_string(pick);
    } else {
      auto entries = sorted_entries(*s.tab);
      auto k = entries[pick].first;
      cell = &s.tab->at(k);
      at = std::to_string(key_hi(k)) + "," + std::to_string(key_lo(k));
    }
    int old = *cell;
    int v = std::uniform_int_distribution<int>(0, s.range - 2)(rng);
    if (v >= old) ++v;
    *cell = v;
    return {s.name + "[" + at + "]: " + std::to_string(old) + " -> " + std::to_string(v)};
  }
  throw StructuralError("mutation index out of range");
}

inline void functor_slots(std::vector<Slot>& out, TwoFunctor& F, const std::string& name) {
  out.push_back({name + ".obj", &F.obj, nullptr, F.tgt->n_obj()});
  out.push_back({name + ".mor", &F.mor, nullptr, F.tgt->n_mor()});
  out.push_back({name + ".cell", &F.cell, nullptr, F.tgt->n_cell()});
}

}  // namespace detail

// Mutates the cleavage tables only, or also the legs when with_legs is set.
inline Mutation mutate_twosided(TwoSided& t, std::mt19937_64& rng, bool with_legs) {
  const Fin2Cat& J = *t.apex();
  std::vector<detail::Slot> s{{"lambda", nullptr, &t.lam_mor, J.n_mor()},
                              {"lambda_cells", nullptr, &t.lam_cell, J.n_cell()},
                              {"rho", nullptr, &t.rho_mor, J.n_mor()},
                              {"rho_cells", nullptr, &t.rho_cell, J.n_cell()}};
  if (with_legs) {
    detail::functor_slots(s, t.p, "p");
    detail::functor_slots(s, t.q, "q");
  }
  return detail::mutate_slots(s, rng);
}

inline Mutation mutate_comma(CommaCell& c, std::mt19937_64& rng) {
  std::vector<detail::Slot> s;
  detail::functor_slots(s, c.pA, "pA");
  detail::functor_slots(s, c.pB, "pB");
  const Fin2Cat& C = *c.f.tgt;
  s.push_back({"pi.comp", &c.pi.comp, nullptr, C.n_mor()});
  s.push_back({"pi.nat", &c.pi.nat, nullptr, C.n_cell()});
  Mutation m = detail::mutate_slots(s, rng);
  // keep the transformation boundary in step with the mutated legs
  c.pi.F = compose(c.f, c.pA);
  c.pi.G = compose(c.g, c.pB);
  return m;
}

inline Mutation mutate_cat(Fin2Cat& C, std::mt19937_64& rng) {
  std::vector<detail::Slot> s{{"msrc", &C.msrc, nullptr, C.n_obj()}, {"mtgt", &C.mtgt, nullptr, C.n_obj()},
                              {"csrc", &C.csrc, nullptr, C.n_mor()}, {"ctgt", &C.ctgt, nullptr, C.n_mor()},
                              {"idm", &C.idm, nullptr, C.n_mor()},   {"idc", &C.idc, nullptr, C.n_cell()},
                              {"comp", nullptr, &C.hm, C.n_mor()},   {"vcomp", nullptr, &C.vc, C.n_cell()},
                              {"hcomp", nullptr, &C.hc, C.n_cell()}};
  Mutation m = detail::mutate_slots(s, rng);
  C.reindex();
  return m;
}

}  // namespace twocat
