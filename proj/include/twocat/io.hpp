#pragma once

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "corpus.hpp"
#include "json.hpp"

namespace twocat {

using json = nlohmann::json;

// Schema or syntax problem in an instance file; path is a JSON pointer-like
// location such as $.morphisms[3][1].
struct ParseError : StructuralError {
  std::string path;
  ParseError(std::string p, const std::string& msg) : StructuralError(p + ": " + msg), path(std::move(p)) {}
};

namespace io {

// ---------------------------------------------------------------------------
// Serialization

inline json cat_json(const Fin2Cat& C) {
  json j;
  j["kind"] = "two_cat";
  j["name"] = C.name;
  j["objects"] = C.obj;
  json m = json::array(), c = json::array(), im = json::array(), ic = json::array();
  for (int x = 0; x < C.n_mor(); ++x) m.push_back({C.mor[x], C.obj[C.msrc[x]], C.obj[C.mtgt[x]]});
  for (int x = 0; x < C.n_cell(); ++x) c.push_back({C.cell[x], C.mor[C.csrc[x]], C.mor[C.ctgt[x]]});
  for (int x = 0; x < C.n_obj(); ++x) im.push_back({C.obj[x], C.mor[C.idm[x]]});
  for (int x = 0; x < C.n_mor(); ++x) ic.push_back({C.mor[x], C.cell[C.idc[x]]});
  j["morphisms"] = m;
  j["cells"] = c;
  j["identities"] = im;
  j["identity_cells"] = ic;
  auto table = [](const PairTable& t, const std::vector<std::string>& a, const std::vector<std::string>& r) {
    json out = json::array();
    for (auto& [k, v] : sorted_entries(t)) out.push_back({a[key_hi(k)], a[key_lo(k)], r[v]});
    return out;
  };
  j["comp"] = table(C.hm, C.mor, C.mor);
  j["vcomp"] = table(C.vc, C.cell, C.cell);
  j["hcomp"] = table(C.hc, C.cell, C.cell);
  return j;
}

inline json maps_json(const TwoFunctor& F) {
  const Fin2Cat &X = *F.src, &Y = *F.tgt;
  json j;
  auto pairs = [](const std::vector<int>& m, const std::vector<std::string>& a, const std::vector<std::string>& b) {
    json out = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) out.push_back({a[i], m[i] >= 0 ? b[m[i]] : std::string("?")});
    return out;
  };
  j["objects"] = pairs(F.obj, X.obj, Y.obj);
  j["morphisms"] = pairs(F.mor, X.mor, Y.mor);
  j["cells"] = pairs(F.cell, X.cell, Y.cell);
  return j;
}

inline json functor_json(const TwoFunctor& F) {
  json j = maps_json(F);
  j["kind"] = "two_functor";
  j["source"] = cat_json(*F.src);
  j["target"] = cat_json(*F.tgt);
  return j;
}

inline json lax_json(const LaxTrans& t) {
  const Fin2Cat &X = t.dom(), &Y = t.cod();
  json j;
  j["kind"] = "lax_trans";
  j["F"] = functor_json(t.F);
  j["G"] = functor_json(t.G);
  json c = json::array(), n = json::array();
  for (int x = 0; x < X.n_obj(); ++x) c.push_back({X.obj[x], Y.mor[t.comp[x]]});
  for (int s = 0; s < X.n_mor(); ++s) n.push_back({X.mor[s], Y.cell[t.nat[s]]});
  j["components"] = c;
  j["naturality"] = n;
  return j;
}

inline json lift_table(const PairTable& t, const std::vector<std::string>& a, const std::vector<std::string>& b,
                       const std::vector<std::string>& r) {
  json out = json::array();
  for (auto& [k, v] : sorted_entries(t)) out.push_back({a[key_hi(k)], b[key_lo(k)], r[v]});
  return out;
}

inline json twosided_json(const TwoSided& t, bool with_cleavage = true) {
  const Fin2Cat &J = *t.apex(), &A = *t.A(), &B = *t.B();
  json j;
  j["kind"] = with_cleavage ? "two_sided" : "span";
  j["name"] = t.name;
  j["apex"] = cat_json(J);
  j["A"] = cat_json(A);
  j["B"] = cat_json(B);
  j["p"] = maps_json(t.p);
  j["q"] = maps_json(t.q);
  if (with_cleavage) {
    j["lambda"] = lift_table(t.lam_mor, J.obj, A.mor, J.mor);
    j["lambda_cells"] = lift_table(t.lam_cell, A.cell, J.mor, J.cell);
    j["rho"] = lift_table(t.rho_mor, J.obj, B.mor, J.mor);
    j["rho_cells"] = lift_table(t.rho_cell, B.cell, J.mor, J.cell);
  }
  return j;
}

inline json cleavage_json(const Cleavage& c) {
  const Fin2Cat &J = *c.q.src, &B = *c.q.tgt;
  json j;
  j["kind"] = "cleavage";
  j["q"] = functor_json(c.q);
  j["lifts"] = lift_table(c.mor, J.obj, B.mor, J.mor);
  j["cell_lifts"] = lift_table(c.cell, B.cell, J.mor, J.cell);
  return j;
}

inline json fn1_json(const Fin2Cat& X, const Fin2Cat& Y, const Fn1& f) {
  json j, o = json::array(), m = json::array();
  for (int i = 0; i < X.n_obj(); ++i) o.push_back({X.obj[i], Y.obj[f.obj[i]]});
  for (int s = 0; s < X.n_mor(); ++s) m.push_back({X.mor[s], Y.mor[f.mor[s]]});
  j["objects"] = o;
  j["morphisms"] = m;
  return j;
}

inline json comps_json(const Fin2Cat& X, const Fin2Cat& Y, const std::vector<int>& t) {
  json o = json::array();
  for (int i = 0; i < X.n_obj(); ++i) o.push_back({X.obj[i], Y.mor[t[i]]});
  return o;
}

inline json indexed_json(const IndexedCat& F) {
  const Fin2Cat &A = *F.A, &B = *F.B;
  json j;
  j["kind"] = "indexed_cat";
  j["name"] = F.name;
  j["A"] = cat_json(A);
  j["B"] = cat_json(B);
  json fib = json::array(), us = json::array(), vs = json::array(), as = json::array(), bs = json::array();
  for (int a = 0; a < A.n_obj(); ++a)
    for (int b = 0; b < B.n_obj(); ++b) fib.push_back({{"a", A.obj[a]}, {"b", B.obj[b]}, {"cat", cat_json(F.at(a, b))}});
  for (int u = 0; u < A.n_mor(); ++u)
    for (int b = 0; b < B.n_obj(); ++b) {
      json e = fn1_json(F.at(A.mtgt[u], b), F.at(A.msrc[u], b), F.ustar[u][b]);
      e["u"] = A.mor[u];
      e["b"] = B.obj[b];
      us.push_back(e);
    }
  for (int v = 0; v < B.n_mor(); ++v)
    for (int a = 0; a < A.n_obj(); ++a) {
      json e = fn1_json(F.at(a, B.msrc[v]), F.at(a, B.mtgt[v]), F.vshriek[v][a]);
      e["v"] = B.mor[v];
      e["a"] = A.obj[a];
      vs.push_back(e);
    }
  for (int c = 0; c < A.n_cell(); ++c)
    for (int b = 0; b < B.n_obj(); ++b)
      as.push_back({{"cell", A.cell[c]}, {"b", B.obj[b]},
                    {"components", comps_json(F.at(A.ctgt_obj(c), b), F.at(A.csrc_obj(c), b), F.astar[c][b])}});
  for (int c = 0; c < B.n_cell(); ++c)
    for (int a = 0; a < A.n_obj(); ++a)
      bs.push_back({{"cell", B.cell[c]}, {"a", A.obj[a]},
                    {"components", comps_json(F.at(a, B.csrc_obj(c)), F.at(a, B.ctgt_obj(c)), F.bshriek[c][a])}});
  j["fibres"] = fib;
  j["ustar"] = us;
  j["vshriek"] = vs;
  j["astar"] = as;
  j["bshriek"] = bs;
  return j;
}

inline json path_json(const std::vector<TwoSided>& path) {
  json p = json::array();
  for (auto& t : path) p.push_back(twosided_json(t));
  return p;
}

inline json unary_json(const UnaryCell& c) {
  json j;
  j["kind"] = "cell";
  j["arity"] = "unary";
  j["path"] = path_json(c.path);
  j["target"] = twosided_json(c.K);
  j["f"] = functor_json(c.f);
  j["g"] = functor_json(c.g);
  j["map"] = maps_json(c.phi);
  return j;
}

inline json nullary_json(const NullaryCell& c) {
  json j;
  j["kind"] = "cell";
  j["arity"] = "nullary";
  j["path"] = path_json(c.path);
  j["f"] = functor_json(c.f);
  j["g"] = functor_json(c.g);
  const Fin2Cat &X = c.phi.dom(), &Y = c.phi.cod();
  json comp = json::array(), nat = json::array();
  for (int x = 0; x < X.n_obj(); ++x) comp.push_back({X.obj[x], Y.mor[c.phi.comp[x]]});
  for (int s = 0; s < X.n_mor(); ++s) nat.push_back({X.mor[s], Y.cell[c.phi.nat[s]]});
  j["components"] = comp;
  j["naturality"] = nat;
  return j;
}

inline json to_json(const Value& v) {
  switch (v.kind) {
    case Kind::two_cat: return cat_json(*v.cat);
    case Kind::two_functor: return functor_json(v.fun);
    case Kind::lax_trans: return lax_json(v.lax);
    case Kind::span: return twosided_json(v.ts, false);
    case Kind::two_sided: return twosided_json(v.ts);
    case Kind::cleavage: return cleavage_json(v.clv);
    case Kind::indexed_cat: return indexed_json(v.ic);
    case Kind::cell: return v.unary ? unary_json(*v.unary) : nullary_json(*v.nullary);
  }
  return {};
}

// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }
inline std::string serialize(const Value& v) { return dump(to_json(v)); }

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  Value value(const json& j, const std::string& path = "$") {
    if (j.is_string()) return resolve(j.get<std::string>(), path);
    Kind k = kind(j, path);
    switch (k) {
      case Kind::two_cat: return of_cat(cat(j, path));
      case Kind::two_functor: return of_fun(functor(j, path));
      case Kind::lax_trans: return of_lax(lax(j, path));
      case Kind::span: return of_ts(twosided(j, path, false), Kind::span);
      case Kind::two_sided: return of_ts(twosided(j, path, true));
      case Kind::cleavage: return of_clv(cleavage(j, path));
      case Kind::indexed_cat: return of_ic(indexed(j, path));
      case Kind::cell: return cell(j, path);
    }
    throw ParseError(path, "unknown kind");
  }

  Cat cat(const json& j, const std::string& path) {
    if (j.is_string()) return expect(resolve(j.get<std::string>(), path), Kind::two_cat, path).cat;
    object(j, path);
    Fin2CatBuilder b(str(field(j, "name", path, false), path + ".name", ""));
    std::set<std::string> ob, mb, cb;
    const json& objs = arr(field(j, "objects", path), path + ".objects");
    for (std::size_t i = 0; i < objs.size(); ++i) {
      std::string id = str(objs[i], at(path + ".objects", i));
      if (!ob.insert(id).second) throw ParseError(at(path + ".objects", i), "duplicate object id '" + id + "'");
      b.object(id);
    }
    auto triples = [&](const char* name, std::size_t n, const std::function<void(const std::string&, const json&)>& f) {
      const json& a = arr(field(j, name, path), path + "." + name);
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::string p = at(path + "." + name, i);
        const json& e = arr(a[i], p);
        if (e.size() != n) throw ParseError(p, "expected an array of " + std::to_string(n) + " ids");
        f(p, e);
      }
    };
    triples("morphisms", 3, [&](const std::string& p, const json& e) {
      std::string id = str(e[0], p + "[0]");
      if (!mb.insert(id).second) throw ParseError(p + "[0]", "duplicate morphism id '" + id + "'");
      known(ob, e[1], p + "[1]", "object");
      known(ob, e[2], p + "[2]", "object");
      b.morphism(id, e[1], e[2]);
    });
    triples("cells", 3, [&](const std::string& p, const json& e) {
      std::string id = str(e[0], p + "[0]");
      if (!cb.insert(id).second) throw ParseError(p + "[0]", "duplicate cell id '" + id + "'");
      known(mb, e[1], p + "[1]", "morphism");
      known(mb, e[2], p + "[2]", "morphism");
      b.cell(id, e[1], e[2]);
    });
    triples("identities", 2, [&](const std::string& p, const json& e) {
      known(ob, e[0], p + "[0]", "object");
      known(mb, e[1], p + "[1]", "morphism");
      b.id_mor(e[0], e[1]);
    });
    triples("identity_cells", 2, [&](const std::string& p, const json& e) {
      known(mb, e[0], p + "[0]", "morphism");
      known(cb, e[1], p + "[1]", "cell");
      b.id_cell(e[0], e[1]);
    });
    triples("comp", 3, [&](const std::string& p, const json& e) {
      for (int k = 0; k < 3; ++k) known(mb, e[k], p + "[" + std::to_string(k) + "]", "morphism");
      b.comp(e[0], e[1], e[2]);
    });
    triples("vcomp", 3, [&](const std::string& p, const json& e) {
      for (int k = 0; k < 3; ++k) known(cb, e[k], p + "[" + std::to_string(k) + "]", "cell");
      b.vcomp(e[0], e[1], e[2]);
    });
    triples("hcomp", 3, [&](const std::string& p, const json& e) {
      for (int k = 0; k < 3; ++k) known(cb, e[k], p + "[" + std::to_string(k) + "]", "cell");
      b.hcomp(e[0], e[1], e[2]);
    });
    try {
      return make_cat(b.build());
    } catch (const StructuralError& e) {
      throw ParseError(path, e.what());
    }
  }

  TwoFunctor maps(const json& j, const Cat& X, const Cat& Y, const std::string& path) {
    object(j, path);
    TwoFunctor F{X, Y, {}, {}, {}};
    F.obj = pairs(j, "objects", X->obj, Y->obj, [&](const std::string& s) { return X->find_obj(s); },
                  [&](const std::string& s) { return Y->find_obj(s); }, path);
    F.mor = pairs(j, "morphisms", X->mor, Y->mor, [&](const std::string& s) { return X->find_mor(s); },
                  [&](const std::string& s) { return Y->find_mor(s); }, path);
    F.cell = pairs(j, "cells", X->cell, Y->cell, [&](const std::string& s) { return X->find_cell(s); },
                   [&](const std::string& s) { return Y->find_cell(s); }, path);
    return F;
  }

  TwoFunctor functor(const json& j, const std::string& path) {
    if (j.is_string()) return expect(resolve(j.get<std::string>(), path), Kind::two_functor, path).fun;
    object(j, path);
    Cat X = cat(field(j, "source", path), path + ".source"), Y = cat(field(j, "target", path), path + ".target");
    return maps(j, X, Y, path);
  }

  LaxTrans lax(const json& j, const std::string& path) {
    if (j.is_string()) return expect(resolve(j.get<std::string>(), path), Kind::lax_trans, path).lax;
    object(j, path);
    LaxTrans t{functor(field(j, "F", path), path + ".F"), functor(field(j, "G", path), path + ".G"), {}, {}};
    if (!TwoFunctor::same(t.F.src, t.G.src) || !TwoFunctor::same(t.F.tgt, t.G.tgt))
      throw ParseError(path, "F and G are not parallel");
    t.G.src = t.F.src;
    t.G.tgt = t.F.tgt;
    lax_tables(j, t, path);
    return t;
  }

  TwoSided twosided(const json& j, const std::string& path, bool with_cleavage) {
    if (j.is_string()) {
      Value v = resolve(j.get<std::string>(), path);
      if (v.kind != Kind::two_sided && v.kind != Kind::span) throw ParseError(path, "reference is not a span");
      return v.ts;
    }
    object(j, path);
    TwoSided t;
    t.name = str(field(j, "name", path, false), path + ".name", "");
    Cat J = cat(field(j, "apex", path), path + ".apex"), A = cat(field(j, "A", path), path + ".A"),
        B = cat(field(j, "B", path), path + ".B");
    t.p = maps(field(j, "p", path), J, A, path + ".p");
    t.q = maps(field(j, "q", path), J, B, path + ".q");
    if (with_cleavage) {
      t.lam_mor = lifts(j, "lambda", path, [&](const auto& s) { return J->find_obj(s); }, [&](const auto& s) { return A->find_mor(s); },
                        [&](const auto& s) { return J->find_mor(s); });
      t.lam_cell = lifts(j, "lambda_cells", path, [&](const auto& s) { return A->find_cell(s); },
                         [&](const auto& s) { return J->find_mor(s); }, [&](const auto& s) { return J->find_cell(s); });
      t.rho_mor = lifts(j, "rho", path, [&](const auto& s) { return J->find_obj(s); }, [&](const auto& s) { return B->find_mor(s); },
                        [&](const auto& s) { return J->find_mor(s); });
      t.rho_cell = lifts(j, "rho_cells", path, [&](const auto& s) { return B->find_cell(s); },
                         [&](const auto& s) { return J->find_mor(s); }, [&](const auto& s) { return J->find_cell(s); });
    }
    return t;
  }

  Cleavage cleavage(const json& j, const std::string& path) {
    object(j, path);
    Cleavage c;
    c.q = functor(field(j, "q", path), path + ".q");
    const Cat &J = c.q.src, &B = c.q.tgt;
    c.mor = lifts(j, "lifts", path, [&](const auto& s) { return J->find_obj(s); }, [&](const auto& s) { return B->find_mor(s); },
                  [&](const auto& s) { return J->find_mor(s); });
    c.cell = lifts(j, "cell_lifts", path, [&](const auto& s) { return B->find_cell(s); }, [&](const auto& s) { return J->find_mor(s); },
                   [&](const auto& s) { return J->find_cell(s); });
    return c;
  }

  IndexedCat indexed(const json& j, const std::string& path) {
    if (j.is_string()) return expect(resolve(j.get<std::string>(), path), Kind::indexed_cat, path).ic;
    object(j, path);
    IndexedCat F;
    F.name = str(field(j, "name", path, false), path + ".name", "");
    F.A = cat(field(j, "A", path), path + ".A");
    F.B = cat(field(j, "B", path), path + ".B");
    const Fin2Cat &A = *F.A, &B = *F.B;
    F.fib.assign(A.n_obj(), std::vector<Cat>(B.n_obj()));
    F.ustar.assign(A.n_mor(), std::vector<Fn1>(B.n_obj()));
    F.vshriek.assign(B.n_mor(), std::vector<Fn1>(A.n_obj()));
    F.astar.assign(A.n_cell(), std::vector<std::vector<int>>(B.n_obj()));
    F.bshriek.assign(B.n_cell(), std::vector<std::vector<int>>(A.n_obj()));
    std::vector<std::vector<bool>> seen(A.n_obj(), std::vector<bool>(B.n_obj(), false));
    each(j, "fibres", path, [&](const json& e, const std::string& p) {
      int a = ref(e, "a", p, [&](const auto& s) { return A.find_obj(s); }), b = ref(e, "b", p, [&](const auto& s) { return B.find_obj(s); });
      if (seen[a][b]) throw ParseError(p, "duplicate fibre");
      seen[a][b] = true;
      F.fib[a][b] = cat(field(e, "cat", p), p + ".cat");
    });
    for (int a = 0; a < A.n_obj(); ++a)
      for (int b = 0; b < B.n_obj(); ++b)
        if (!seen[a][b]) throw ParseError(path + ".fibres", "missing fibre (" + A.obj[a] + "," + B.obj[b] + ")");
    grid(j, "ustar", path, A.n_mor(), B.n_obj(), [&](const json& e, const std::string& p, std::vector<std::vector<bool>>& g) {
      int u = ref(e, "u", p, [&](const auto& s) { return A.find_mor(s); }), b = ref(e, "b", p, [&](const auto& s) { return B.find_obj(s); });
      mark(g, u, b, p);
      F.ustar[u][b] = fn1(e, F.at(A.mtgt[u], b), F.at(A.msrc[u], b), p);
    });
    grid(j, "vshriek", path, B.n_mor(), A.n_obj(), [&](const json& e, const std::string& p, std::vector<std::vector<bool>>& g) {
      int v = ref(e, "v", p, [&](const auto& s) { return B.find_mor(s); }), a = ref(e, "a", p, [&](const auto& s) { return A.find_obj(s); });
      mark(g, v, a, p);
      F.vshriek[v][a] = fn1(e, F.at(a, B.msrc[v]), F.at(a, B.mtgt[v]), p);
    });
    grid(j, "astar", path, A.n_cell(), B.n_obj(), [&](const json& e, const std::string& p, std::vector<std::vector<bool>>& g) {
      int c = ref(e, "cell", p, [&](const auto& s) { return A.find_cell(s); }), b = ref(e, "b", p, [&](const auto& s) { return B.find_obj(s); });
      mark(g, c, b, p);
      F.astar[c][b] = comps(e, F.at(A.ctgt_obj(c), b), F.at(A.csrc_obj(c), b), p);
    });
    grid(j, "bshriek", path, B.n_cell(), A.n_obj(), [&](const json& e, const std::string& p, std::vector<std::vector<bool>>& g) {
      int c = ref(e, "cell", p, [&](const auto& s) { return B.find_cell(s); }), a = ref(e, "a", p, [&](const auto& s) { return A.find_obj(s); });
      mark(g, c, a, p);
      F.bshriek[c][a] = comps(e, F.at(a, B.csrc_obj(c)), F.at(a, B.ctgt_obj(c)), p);
    });
    return F;
  }

  Value cell(const json& j, const std::string& path) {
    object(j, path);
    std::string arity = str(field(j, "arity", path), path + ".arity");
    std::vector<TwoSided> cpath;
    const json& pj = arr(field(j, "path", path), path + ".path");
    if (pj.empty()) throw ParseError(path + ".path", "cells need a nonempty path");
    for (std::size_t i = 0; i < pj.size(); ++i) cpath.push_back(twosided(pj[i], at(path + ".path", i), true));
    ApexPtr P;
    try {
      P = make_apex(cpath);
    } catch (const StructuralError& e) {
      throw ParseError(path + ".path", e.what());
    }
    TwoFunctor f = functor(field(j, "f", path), path + ".f"), g = functor(field(j, "g", path), path + ".g");
    if (!TwoFunctor::same(f.src, cpath.front().A())) throw ParseError(path + ".f", "source differs from the start of the path");
    if (!TwoFunctor::same(g.src, cpath.back().B())) throw ParseError(path + ".g", "source differs from the end of the path");
    f.src = cpath.front().A();
    g.src = cpath.back().B();
    if (arity == "unary") {
      TwoSided K = twosided(field(j, "target", path), path + ".target", true);
      UnaryCell c{cpath, K, f, g, maps(field(j, "map", path), P->apex(), K.apex(), path + ".map"), P};
      return of_cell(c);
    }
    if (arity == "nullary") {
      if (!TwoFunctor::same(f.tgt, g.tgt)) throw ParseError(path, "f and g have different targets");
      g.tgt = f.tgt;
      NullaryCell c{cpath, f, g, {}, P};
      c.phi.F = left_boundary(cpath, *P, f);
      c.phi.G = right_boundary(cpath, *P, g);
      lax_tables(j, c.phi, path);
      return of_cell(c);
    }
    throw ParseError(path + ".arity", "expected \"unary\" or \"nullary\"");
  }

 private:
  static std::string at(const std::string& p, std::size_t i) { return p + "[" + std::to_string(i) + "]"; }

  static Value expect(Value v, Kind k, const std::string& path) {
    if (v.kind != k) throw ParseError(path, "reference has kind " + kind_name(v.kind) + ", expected " + kind_name(k));
    return v;
  }

  static Value resolve(const std::string& s, const std::string& path) {
    const std::string pre = "corpus:";
    if (s.rfind(pre, 0) != 0) throw ParseError(path, "string values must be corpus references, got '" + s + "'");
    auto v = corpus::lookup(s.substr(pre.size()));
    if (!v) throw ParseError(path, "unknown corpus instance '" + s.substr(pre.size()) + "'");
    return *v;
  }

  static Kind kind(const json& j, const std::string& path) {
    object(j, path);
    std::string k = str(field(j, "kind", path), path + ".kind");
    for (auto& [x, n] : kind_names())
      if (n == k) return x;
    throw ParseError(path + ".kind", "unknown kind '" + k + "'");
  }

  static void object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
  }
  static const json& arr(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    return j;
  }
  static std::string str(const json& j, const std::string& path, std::optional<std::string> dflt = std::nullopt) {
    if (j.is_null() && dflt) return *dflt;
    if (!j.is_string()) throw ParseError(path, "expected a string");
    return j.get<std::string>();
  }
  static const json& field(const json& j, const char* name, const std::string& path, bool required = true) {
    static const json null;
    auto it = j.find(name);
    if (it == j.end()) {
      if (required) throw ParseError(path, std::string("missing field '") + name + "'");
      return null;
    }
    return *it;
  }
  static void known(const std::set<std::string>& s, const json& e, const std::string& p, const char* what) {
    std::string id = str(e, p);
    if (!s.count(id)) throw ParseError(p, std::string("undeclared ") + what + " id '" + id + "'");
  }
  template <class Find>
  static int ref(const json& e, const char* name, const std::string& p, Find find) {
    std::string id = str(field(e, name, p), p + "." + name);
    int x = find(id);
    if (x < 0) throw ParseError(p + "." + name, "undeclared id '" + id + "'");
    return x;
  }
  static void each(const json& j, const char* name, const std::string& path,
                   const std::function<void(const json&, const std::string&)>& f) {
    const json& a = arr(field(j, name, path), path + "." + name);
    for (std::size_t i = 0; i < a.size(); ++i) {
      object(a[i], at(path + "." + name, i));
      f(a[i], at(path + "." + name, i));
    }
  }
  static void grid(const json& j, const char* name, const std::string& path, int n, int m,
                   const std::function<void(const json&, const std::string&, std::vector<std::vector<bool>>&)>& f) {
    std::vector<std::vector<bool>> g(n, std::vector<bool>(m, false));
    each(j, name, path, [&](const json& e, const std::string& p) { f(e, p, g); });
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < m; ++y)
        if (!g[x][y]) throw ParseError(path + "." + name, "missing entry " + std::to_string(x) + "," + std::to_string(y));
  }
  static void mark(std::vector<std::vector<bool>>& g, int x, int y, const std::string& p) {
    if (g[x][y]) throw ParseError(p, "duplicate entry");
    g[x][y] = true;
  }

  template <class FS, class FT>
  static std::vector<int> pairs(const json& j, const char* name, const std::vector<std::string>& src,
                                const std::vector<std::string>&, FS fs, FT ft, const std::string& path) {
    std::vector<int> out(src.size(), -1);
    const json& a = arr(field(j, name, path), path + "." + name);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string p = at(path + "." + name, i);
      const json& e = arr(a[i], p);
      if (e.size() != 2) throw ParseError(p, "expected a pair of ids");
      std::string s = str(e[0], p + "[0]"), t = str(e[1], p + "[1]");
      int x = fs(s), y = ft(t);
      if (x < 0) throw ParseError(p + "[0]", "undeclared source id '" + s + "'");
      if (y < 0) throw ParseError(p + "[1]", "undeclared target id '" + t + "'");
      if (out[x] >= 0) throw ParseError(p + "[0]", "id '" + s + "' mapped twice");
      out[x] = y;
    }
    for (std::size_t x = 0; x < out.size(); ++x)
      if (out[x] < 0) throw ParseError(path + "." + name, "id '" + src[x] + "' is not mapped");
    return out;
  }

  template <class F1, class F2, class F3>
  static PairTable lifts(const json& j, const char* name, const std::string& path, F1 f1, F2 f2, F3 f3) {
    PairTable t;
    const json& a = arr(field(j, name, path), path + "." + name);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string p = at(path + "." + name, i);
      const json& e = arr(a[i], p);
      if (e.size() != 3) throw ParseError(p, "expected an array of 3 ids");
      int x = f1(str(e[0], p + "[0]")), y = f2(str(e[1], p + "[1]")), z = f3(str(e[2], p + "[2]"));
      if (x < 0) throw ParseError(p + "[0]", "undeclared id '" + e[0].get<std::string>() + "'");
      if (y < 0) throw ParseError(p + "[1]", "undeclared id '" + e[1].get<std::string>() + "'");
      if (z < 0) throw ParseError(p + "[2]", "undeclared id '" + e[2].get<std::string>() + "'");
      if (!t.emplace(key2(x, y), z).second) throw ParseError(p, "duplicate lift entry");
    }
    return t;
  }

  static Fn1 fn1(const json& e, const Fin2Cat& X, const Fin2Cat& Y, const std::string& p) {
    Fn1 f;
    f.obj = pairs(e, "objects", X.obj, Y.obj, [&](const auto& s) { return X.find_obj(s); }, [&](const auto& s) { return Y.find_obj(s); }, p);
    f.mor = pairs(e, "morphisms", X.mor, Y.mor, [&](const auto& s) { return X.find_mor(s); }, [&](const auto& s) { return Y.find_mor(s); }, p);
    return f;
  }
  static std::vector<int> comps(const json& e, const Fin2Cat& X, const Fin2Cat& Y, const std::string& p) {
    return pairs(e, "components", X.obj, Y.mor, [&](const auto& s) { return X.find_obj(s); }, [&](const auto& s) { return Y.find_mor(s); }, p);
  }
  static void lax_tables(const json& j, LaxTrans& t, const std::string& path) {
    const Fin2Cat &X = t.dom(), &Y = t.cod();
    t.comp = pairs(j, "components", X.obj, Y.mor, [&](const auto& s) { return X.find_obj(s); }, [&](const auto& s) { return Y.find_mor(s); }, path);
    t.nat = pairs(j, "naturality", X.mor, Y.cell, [&](const auto& s) { return X.find_mor(s); }, [&](const auto& s) { return Y.find_cell(s); }, path);
  }
};

// Parses text; syntax errors carry line and column.
inline json parse_text(const std::string& text, const std::string& source = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else ++col;
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "invalid JSON");
  }
}

inline Value parse(const std::string& text, const std::string& source = "<input>") {
  return Parser().value(parse_text(text, source));
}

// A file path, "-" for stdin, or corpus:NAME.
inline Value load(const std::string& arg) {
  if (arg.rfind("corpus:", 0) == 0) return Parser().value(json(arg));
  std::stringstream ss;
  if (arg == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw StructuralError("cannot open '" + arg + "'");
    ss << in.rdbuf();
  }
  return parse(ss.str(), arg);
}

// ---------------------------------------------------------------------------
// Reports

inline json report_json(const Report& r) {
  json f = json::array();
  for (auto& x : r.findings)
    f.push_back({{"code", x.code}, {"location", x.location}, {"message", x.message}, {"witnesses", x.witnesses}});
  return {{"verdict", r.ok() ? "pass" : "fail"}, {"total", r.total}, {"findings", f}};
}

inline std::string report_text(const json& rj) {
  std::ostringstream o;
  o << (rj["verdict"] == "pass" ? "PASS" : "FAIL");
  if (rj.contains("summary")) o << ": " << rj["summary"].get<std::string>();
  o << "\n";
  for (auto& f : rj["findings"]) {
    o << "  " << f["code"].get<std::string>() << " @ " << f["location"].get<std::string>() << ": "
      << f["message"].get<std::string>();
    if (!f["witnesses"].empty()) {
      o << " [";
      bool first = true;
      for (auto& w : f["witnesses"]) {
        o << (first ? "" : ", ") << w.get<std::string>();
        first = false;
      }
      o << "]";
    }
    o << "\n";
  }
  std::size_t shown = rj["findings"].size(), total = rj["total"].get<std::size_t>();
  if (total > shown) o << "  ... " << (total - shown) << " more\n";
  return o.str();
}

}  // namespace io
}  // namespace twocat
