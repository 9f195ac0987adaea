// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "twocat/io.hpp"
#include "twocat/mutate.hpp"

using namespace twocat;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail.clear();
    if (!detail.empty()) detail += "; ";
    detail += why;
    pass = false;
  }
};

std::vector<std::pair<std::string, TwoSided>> corpus_twosided() {
  std::vector<std::pair<std::string, TwoSided>> out;
  for (auto& e : corpus::entries()) {
    Value v = e.make();
    if (v.kind == Kind::two_sided) out.push_back({e.name, v.ts});
  }
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. cleavage -> action -> cleavage and action -> cleavage -> action
Outcome ac1() {
  Outcome o;
  std::vector<std::pair<std::string, Cleavage>> clvs;
  for (auto& e : corpus::entries()) {
    Value v = e.make();
    if (v.kind == Kind::cleavage) clvs.push_back({e.name, v.clv});
    if (v.kind == Kind::two_sided && check_twosided(v.ts).ok()) {
      clvs.push_back({e.name + ".right", v.ts.right()});
      clvs.push_back({e.name + ".left", v.ts.left_coop()});
    }
  }
  std::size_t n = 0, commas = 0;
  for (auto& [name, c] : clvs) {
    if (!check_split_opfib(c).ok()) {
      o.fail(name + " is not a split op-2-fibration");
      continue;
    }
    ActionContext cx = make_action_context(c.q);
    ActionResult a = cleavage_to_action(cx, c);
    if (!a.act || !a.report.ok()) {
      o.fail(name + ": no action");
      continue;
    }
    Cleavage back = action_to_cleavage(cx, *a.act);
    ActionResult a2 = cleavage_to_action(cx, back);
    if (!(back == c)) o.fail(name + ": cleavage round trip differs");
    if (!a2.act || !(*a2.act == *a.act)) o.fail(name + ": action round trip differs");
    ++n;
    commas += name.rfind("comma_", 0) == 0 && name.size() > 6 && name.substr(name.size() - 6) == ".right";
  }
  if (n < 4) o.fail("fewer than 4 instances");
  if (commas < corpus::commas().size()) o.fail("a comma projection is missing");
  if (o.pass) o.detail = std::to_string(n) + " cleavages, " + std::to_string(commas) + " comma projections, both directions exact";
  return o;
}

// 2. direct two-sided check against the action oracle, corpus and mutants
Outcome ac2() {
  Outcome o;
  std::mt19937_64 rng(20261014);
  std::size_t instances = 0, mutants = 0, agree = 0, detected = 0;
  for (auto& [name, t] : corpus_twosided()) {
    bool a = check_twosided(t).ok(), b = check_twosided_oracle(t).ok();
    ++instances;
    if (a != b) o.fail(name + ": verdicts differ");
    if (!a || t.apex()->n_mor() > 60) continue;
    for (int i = 0; i < 40; ++i) {
      TwoSided m = t;
      Mutation mu;
      try {
        mu = mutate_twosided(m, rng, true);
      } catch (const StructuralError&) {
        break;  // nothing to change, e.g. the terminal unit
      }
      bool x = check_twosided(m).ok(), y = check_twosided_oracle(m).ok();
      ++mutants;
      agree += x == y;
      detected += !x;
      if (x != y) o.fail(name + " mutant " + mu.where + ": verdicts differ");
      if (x) o.fail(name + " mutant " + mu.where + " undetected");
    }
  }
  if (mutants < 200) o.fail("only " + std::to_string(mutants) + " mutants");
  if (o.pass)
    o.detail = std::to_string(instances) + " instances agree; " + std::to_string(mutants) + " mutants, " +
               std::to_string(agree) + " agree, " + std::to_string(detected) + " detected";
  return o;
}

// 3. unary cells on unit paths of length 1 and 2: direct check vs oracle
Outcome ac3() {
  Outcome o;
  std::size_t total = 0, valid = 0;
  for (const Cat& X : {corpus::arrow(), corpus::C2()}) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (int len = 1; len <= 2; ++len) {
      std::vector<TwoSided> path(len, U.span);
      for (auto& f : fs)
        for (auto& g : fs) {
          for (auto& c : enumerate_unary(path, U.span, f, g, len == 1 ? 1000 : 100, false)) {
            bool a = check_unary_cell(c).ok(), b = oracle_unary_cell(c).ok();
            ++total;
            valid += a;
            if (a != b) o.fail(X->name + " len " + std::to_string(len) + ": verdicts differ");
          }
        }
    }
  }
  if (total < 50) o.fail("only " + std::to_string(total) + " cells");
  if (valid == 0 || valid == total) o.fail("family does not mix valid and invalid cells");
  if (o.pass) o.detail = std::to_string(total) + " cells, " + std::to_string(valid) + " valid, verdicts identical";
  return o;
}

// 4. J -> elements(inverse J) -> J on every locally discrete corpus instance
Outcome ac4() {
  Outcome o;
  std::size_t n = 0;
  for (auto& [name, t] : corpus_twosided()) {
    if (!check_twosided(t).ok() || !is_locally_discrete(t).ld) continue;
    RoundTrip rt = roundtrip_iso(t);
    ++n;
    if (!rt.report.ok()) o.fail(name + ": " + rt.report.findings.front().code);
  }
  if (n < 4) o.fail("fewer than 4 locally discrete instances");
  if (o.pass) o.detail = std::to_string(n) + " instances, composites are identities";
  return o;
}

// 5. F -> elements -> inverse -> F on every corpus indexed category
Outcome ac5() {
  Outcome o;
  auto fs = corpus::indexed();
  for (auto& F : fs) {
    Report r = check_elements_roundtrip(F);
    if (!r.ok()) o.fail(F.name + ": " + r.findings.front().code);
  }
  if (o.pass) o.detail = std::to_string(fs.size()) + " indexed categories, fibrewise isomorphism commutes with all transitions";
  return o;
}

// 6. ev and star mutually inverse; star exhausts the enumerated 2-naturals
Outcome ac6() {
  Outcome o;
  std::size_t instances = 0, pairs = 0;
  for (auto& F : corpus::indexed()) {
    PshContext cx;
    try {
      cx = make_psh_context(F.A, {F});
    } catch (const CapError&) {
      continue;
    }
    ++instances;
    for (int a = 0; a < F.A->n_obj(); ++a)
      for (int X = 0; X < cx.psh.cat().n_obj(); ++X) {
        Report r = check_yoneda(cx, a, X);
        ++pairs;
        if (!r.ok()) o.fail(F.name + ": " + r.findings.front().code);
      }
  }
  if (instances < 3) o.fail("enumeration completed on fewer than 3 instances");
  if (o.pass) o.detail = std::to_string(instances) + " instances, " + std::to_string(pairs) + " (a, X) pairs";
  return o;
}

// 7. chi is a left Kan cell; the formula factor matches exhaustive search
Outcome ac7() {
  Outcome o;
  std::size_t instances = 0, probes = 0;
  for (auto& F : {corpus::const_terminal(), corpus::two_elt(), corpus::dens()}) {
    Elements E = elements(F);
    PshContext cx = make_psh_context(F.A, {F});
    NullaryCell chi = elements_chi(E, cx, 0);
    std::vector<TwoFunctor> ks;
    enumerate_functors(
        F.B, cx.psh.b.cat, {}, [&](const TwoFunctor& k) {
          ks.push_back(k);
          return ks.size() < 8;
        },
        8);
    auto prs = kan_probes(chi, ks, 20);
    Report lk = check_left_kan(chi, prs);
    if (!lk.ok()) o.fail(F.name + ": " + lk.findings.front().code);
    for (auto& pr : prs) {
      std::vector<LaxTrans> found;
      count_kan_factorizations(chi, pr, &found);
      KanResult kr = kan_factorize(pr.phi, E, cx, 0, pr.H, pr.k);
      if (!kr.report.ok() || found.size() != 1 || !(found[0] == kr.phi)) o.fail(F.name + ": factor mismatch");
      ++probes;
    }
    ++instances;
  }
  if (o.pass) o.detail = std::to_string(instances) + " instances, " + std::to_string(probes) + " probes, unique factor matches";
  return o;
}

// 8. comma cells are 1-universal; every apex mutation is caught
Outcome ac8() {
  Outcome o;
  std::vector<std::pair<std::string, CommaCell>> cells;
  for (auto& [n, mk] : corpus::commas()) cells.push_back({n, as_cell(mk())});
  for (auto& [n, c] : corpus::base_cats()) cells.push_back({"arrow_" + n, as_cell(lax_arrow(c).comma)});
  std::mt19937_64 rng(7);
  std::size_t mutants = 0;
  for (auto& [name, cc] : cells) {
    Report r = check_comma_1univ(cc, nullptr, SIZE_MAX);  // every probe on every shape
    if (!r.ok()) o.fail(name + ": " + r.findings.front().code);
    for (int i = 0; i < 10; ++i) {
      CommaCell m = cc;
      Mutation mu;
      try {
        mu = mutate_comma(m, rng);
      } catch (const StructuralError&) {
        break;
      }
      ++mutants;
      bool ok = false;
      try {
        ok = check_comma_1univ(m).ok();
      } catch (const StructuralError&) {
      }
      if (ok) o.fail(name + " mutant " + mu.where + " undetected");
    }
  }
  if (o.pass) o.detail = std::to_string(cells.size()) + " comma cells, " + std::to_string(mutants) + " mutants detected";
  return o;
}

// 9. nullary/unary conversion and the Yoneda cell bijection
Outcome ac9() {
  Outcome o;
  std::size_t conv = 0, cells = 0, marked = 0;
  for (const Cat& X : {corpus::arrow(), corpus::C2()}) {
    Unit U = unit(X);
    auto fs = all_functors(X, X);
    for (auto& f : fs)
      for (auto& g : fs)
        for (auto& c : enumerate_unary({U.span}, U.span, f, g, 1000, true)) {
          NullaryCell n = unary_to_nullary(c);
          UnaryCell back = nullary_to_unary(n);
          if (!check_marked_lax(n).ok()) o.fail(X->name + ": converted cell not marked");
          if (!(back.phi == c.phi)) o.fail(X->name + ": unary round trip differs");
          if (!(unary_to_nullary(back).phi == n.phi)) o.fail(X->name + ": nullary round trip differs");
          ++conv;
        }
  }
  IndexedCat two = corpus::two_elt(), dens = corpus::dens();
  for (auto [FJ, FK] : std::vector<std::pair<IndexedCat, IndexedCat>>{{dens, two}, {two, dens}, {two, two}}) {
    CellBijection cb = make_cell_bijection(FJ, FK);
    const Fin2Cat& M = cb.cx.psh.cat();
    for (int len = 0; len <= 1; ++len) {
      std::vector<TwoSided> H;
      if (len) H.push_back(unit(FJ.B).span);
      std::vector<TwoSided> full{cb.EJ.span};
      full.insert(full.end(), H.begin(), H.end());
      std::size_t nc = 0, nm = 0;
      for (auto& s : all_functors(FJ.B, FK.B)) {
        for (auto& c : enumerate_unary(full, cb.EK.span, identity_functor(FJ.A), s, 1000, true)) {
          KanResult kr = cell_to_marked(cb, c, H, s);
          if (!kr.report.ok() || !(marked_to_cell(cb, kr.phi, H, s).phi == c.phi)) o.fail("cell side round trip");
          ++nc;
        }
        TwoFunctor gk = compose(cb.cx.g[1], s);
        auto visit = [&](const LaxTrans& t) {
          UnaryCell c = marked_to_cell(cb, t, H, s);
          KanResult kr = cell_to_marked(cb, c, H, s);
          if (!check_unary_cell(c).ok() || !kr.report.ok() || !(kr.phi == t)) o.fail("marked side round trip");
          ++nm;
        };
        if (!len) {
          LaxFilters flt;
          flt.nat = [&](int, int c) { return M.is_id_cell(c); };
          enumerate_lax(cb.cx.g[0], gk, flt, [&](const LaxTrans& t) {
            visit(t);
            return true;
          });
        } else {
          ApexPtr PH = make_apex(H);
          NullaryCell cand{H, cb.cx.g[0], gk, {}, PH};
          enumerate_lax(left_boundary(H, *PH, cb.cx.g[0]), right_boundary(H, *PH, gk), {}, [&](const LaxTrans& t) {
            cand.phi = t;
            if (check_marked_lax(cand).ok()) visit(t);
            return true;
          });
        }
      }
      if (nc != nm) o.fail(FJ.name + "->" + FK.name + ": cell and marked counts differ");
      cells += nc;
      marked += nm;
    }
  }
  if (o.pass)
    o.detail = std::to_string(conv) + " converted cells; bijection on " + std::to_string(cells) + " cells / " +
               std::to_string(marked) + " marked transformations";
  return o;
}

// 10. canonical serialization and construction outputs against golden files
Outcome ac10() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = GOLDEN_DIR;
  std::size_t n = 0;
  auto same = [&](const std::string& what, const std::string& got, const fs::path& file) {
    ++n;
    if (!fs::exists(file)) return o.fail(what + ": golden missing");
    if (got != read_file(file)) o.fail(what + ": differs from golden");
  };
  for (auto& e : corpus::entries()) {
    fs::path f = dir / "canon" / (e.name + ".json");
    same(e.name, io::serialize(e.make()), f);
    if (fs::exists(f)) same(e.name + " reparsed", io::serialize(io::parse(read_file(f), f.string())), f);
  }
  for (auto& F : corpus::indexed()) {
    Elements E = elements(F);
    E.span.name = "elements_" + F.name;
    same("elements " + F.name, io::serialize(of_ts(E.span)), dir / "elements" / (F.name + ".json"));
    same("invgroth elements_" + F.name, io::serialize(of_ic(inverse_grothendieck(E.span).F)),
         dir / "invgroth" / ("elements_" + F.name + ".json"));
  }
  for (const char* u : {"unit_terminal", "unit_arrow", "unit_C2"})
    same(std::string("invgroth ") + u, io::serialize(of_ic(inverse_grothendieck(corpus::lookup(u)->ts).F)),
         dir / "invgroth" / (std::string(u) + ".json"));
  if (o.pass) o.detail = std::to_string(n) + " outputs byte-equal";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 cleavage/action bijection", ac1},   {"AC2 two-sided differential", ac2},
      {"AC3 multicell differential", ac3},      {"AC4 round trip, fibration side", ac4},
      {"AC5 round trip, indexed side", ac5},    {"AC6 Yoneda lemma", ac6},
      {"AC7 density", ac7},                     {"AC8 comma universal property", ac8},
      {"AC9 cell bijections", ac9},             {"AC10 golden determinism", ac10},
  };
  int failed = 0;
  for (auto& [name, run] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 60) o.fail("took longer than 60 s");
    std::printf("%s %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
