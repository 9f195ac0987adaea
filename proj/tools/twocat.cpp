// Command-line front end: parses instance files (or corpus:NAME references),
// runs a construction or check, and prints a canonical JSON value or a report.
//
// Exit codes: 0 verdict pass, 1 verdict fail, 2 structural or usage error.

#include <filesystem>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "twocat/io.hpp"
#include "twocat/mutate.hpp"

using namespace twocat;

namespace {

struct Options {
  std::string format = "text";
  std::size_t probe_bound = 0, size_cap = 0;
  std::uint64_t seed = 1;
};

Options opt;

int emit_value(const Value& v) {
  std::cout << io::serialize(v);
  return 0;
}

int emit_report(const std::string& command, const Report& r, const std::string& summary = "", json extra = {}) {
  json j = io::report_json(r);
  j["command"] = command;
  if (!summary.empty()) j["summary"] = summary;
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (opt.format == "json")
    std::cout << io::dump(j);
  else
    std::cout << io::report_text(j);
  return r.ok() ? 0 : 1;
}

Value need(const std::string& arg, std::initializer_list<Kind> kinds) {
  Value v = io::load(arg);
  for (Kind k : kinds)
    if (v.kind == k) return v;
  std::string want;
  for (Kind k : kinds) want += (want.empty() ? "" : " or ") + kind_name(k);
  throw StructuralError(arg + ": expected " + want + ", got " + kind_name(v.kind));
}

int cmd_validate(const std::string& file) {
  Value v = io::load(file);
  Report r;
  switch (v.kind) {
    case Kind::two_cat: r = validate_2cat(*v.cat); break;
    case Kind::two_functor: r = validate_2functor(v.fun); break;
    case Kind::lax_trans: r = validate_lax(v.lax); break;
    case Kind::span:
      r.merge(validate_2functor(v.ts.p, "p"));
      r.merge(validate_2functor(v.ts.q, "q"));
      break;
    case Kind::cleavage: r = check_split_opfib(v.clv); break;
    case Kind::two_sided: r = check_twosided(v.ts); break;
    case Kind::indexed_cat: r = validate_indexed(v.ic); break;
    case Kind::cell: r = v.unary ? check_unary_cell(*v.unary) : check_marked_lax(*v.nullary); break;
  }
  return emit_report("validate", r, kind_name(v.kind));
}

int cmd_check_twosided(const std::string& file, std::size_t mutants) {
  TwoSided t = need(file, {Kind::two_sided}).ts;
  Report r = check_twosided(t);
  Report o = check_twosided_oracle(t);
  json extra{{"oracle_verdict", o.ok() ? "pass" : "fail"}};
  std::string summary;
  if (r.ok() != o.ok()) r.add("oracle.disagree", "verdict", "direct check and action oracle disagree");
  if (mutants) {
    std::mt19937_64 rng(opt.seed);
    std::size_t agree = 0, detected = 0;
    for (std::size_t i = 0; i < mutants; ++i) {
      TwoSided m = t;
      Mutation mu = mutate_twosided(m, rng, true);
      bool a = check_twosided(m).ok(), b = check_twosided_oracle(m).ok();
      agree += a == b;
      detected += !a;
      if (a != b) r.add("mutant.disagree", mu.where, "direct check and oracle disagree on a mutant");
    }
    extra["mutants"] = {{"count", mutants}, {"agree", agree}, {"detected", detected}};
    summary = std::to_string(mutants) + " mutants, " + std::to_string(agree) + " agree, " + std::to_string(detected) + " detected";
  }
  return emit_report("check-twosided", r, summary, extra);
}

int cmd_roundtrip(const std::string& file) {
  Value v = need(file, {Kind::two_sided, Kind::indexed_cat});
  if (v.kind == Kind::two_sided) {
    RoundTrip rt = roundtrip_iso(v.ts);
    return emit_report("roundtrip", rt.report, rt.report.ok() ? "iso verified" : "iso failed");
  }
  Report r = validate_indexed(v.ic);
  if (r.ok()) r = check_elements_roundtrip(v.ic);
  return emit_report("roundtrip", r, r.ok() ? "iso verified" : "iso failed");
}

int cmd_check_cell(const std::string& file) {
  Value v = need(file, {Kind::cell});
  if (v.nullary) return emit_report("check-cell", check_marked_lax(*v.nullary), "nullary");
  Report r = check_unary_cell(*v.unary);
  Report o = oracle_unary_cell(*v.unary);
  if (r.ok() != o.ok()) r.add("oracle.disagree", "verdict", "direct check and equivariance oracle disagree");
  return emit_report("check-cell", r, "unary", {{"oracle_verdict", o.ok() ? "pass" : "fail"}});
}

int cmd_compose(const std::string& outer, const std::vector<std::string>& inner) {
  Value psi = need(outer, {Kind::cell});
  std::vector<Piece> pieces;
  for (auto& f : inner) {
    Value c = need(f, {Kind::cell});
    pieces.push_back(c.unary ? Piece{c.unary, {}} : Piece{{}, c.nullary});
  }
  if (psi.unary) return emit_value(of_cell(compose_cells(*psi.unary, pieces)));
  return emit_value(of_cell(compose_cells(*psi.nullary, pieces)));
}

int cmd_convert(const std::string& file, const std::string& dir) {
  Value v = need(file, {Kind::cell});
  if (dir == "to-unary") {
    if (!v.nullary) throw StructuralError("convert-cell --dir to-unary needs a nullary cell");
    return emit_value(of_cell(nullary_to_unary(*v.nullary)));
  }
  if (!v.unary) throw StructuralError("convert-cell --dir to-nullary needs a unary cell");
  return emit_value(of_cell(unary_to_nullary(*v.unary)));
}

int cmd_kan(const std::string& phi_file, const std::string& chi_file) {
  NullaryCell phi = *need(phi_file, {Kind::cell}).nullary;
  IndexedCat F = need(chi_file, {Kind::indexed_cat}).ic;
  Report pre = validate_indexed(F);
  if (!pre.ok()) return emit_report("kan-factorize", pre, "indexed data is invalid");
  Elements E = elements(F);
  PshContext cx = make_psh_context(F.A, {F});
  if (!(phi.path.front() == E.span)) throw StructuralError("path does not begin with the elements span of the indexed data");
  if (!TwoFunctor::same(phi.g.tgt, cx.psh.b.cat)) throw StructuralError("cell does not land in the presheaf 2-category");
  Report m = check_marked_lax(phi);
  if (!m.ok()) return emit_report("kan-factorize", m, "input is not a marked lax transformation");
  std::vector<TwoSided> H(phi.path.begin() + 1, phi.path.end());
  TwoFunctor k = phi.g;
  k.tgt = cx.psh.b.cat;
  LaxTrans in = phi.phi;
  in.F.tgt = in.G.tgt = cx.psh.b.cat;
  KanResult kr = kan_factorize(in, E, cx, 0, H, k);
  if (!kr.report.ok()) return emit_report("kan-factorize", kr.report, "factorization failed");
  if (H.empty()) return emit_value(of_lax(kr.phi));
  return emit_value(of_cell(NullaryCell{H, cx.g[0], k, kr.phi, make_apex(H)}));
}

int cmd_corpus(const std::string& dir) {
  if (dir.empty()) {
    for (auto& e : corpus::entries()) std::cout << e.name << "\n";
    return 0;
  }
  std::filesystem::create_directories(dir);
  for (auto& e : corpus::entries()) {
    std::ofstream out(std::filesystem::path(dir) / (e.name + ".json"), std::ios::binary);
    out << io::serialize(e.make());
    if (!out) throw StructuralError("cannot write " + e.name + ".json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite 2-categories, two-sided fibrations and their Grothendieck correspondence"};
  app.require_subcommand(1);
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--probe-bound", opt.probe_bound, "max probes per probe family");
  app.add_option("--size-cap", opt.size_cap, "max derived elements per construction");
  app.add_option("--seed", opt.seed, "seed for randomized mutation suites");

  std::function<int()> run;
  std::string a1, a2, a3, variant = "op", dir = "to-unary", emit;
  std::vector<std::string> rest;
  std::size_t mutants = 0;

  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto* s = sub("validate", "check the axioms of any instance");
  s->add_option("file", a1)->required();
  s->callback([&] { run = [&] { return cmd_validate(a1); }; });

  s = sub("canon", "print the canonical serialization");
  s->add_option("file", a1)->required();
  s->callback([&] { run = [&] { return emit_value(io::load(a1)); }; });

  s = sub("dualize", "op, co or coop dual of a 2-category");
  s->add_option("file", a1)->required();
  s->add_option("--variant", variant)->check(CLI::IsMember({"op", "co", "coop"}));
  s->callback([&] {
    run = [&] { return emit_value(of_cat(make_cat(dualize(*need(a1, {Kind::two_cat}).cat, *parse_variant(variant))))); };
  });

  s = sub("comma", "lax comma f/g as a two-sided fibration");
  s->add_option("f", a1)->required();
  s->add_option("g", a2)->required();
  s->callback([&] {
    run = [&] {
      return emit_value(of_ts(comma_twosided(lax_comma(need(a1, {Kind::two_functor}).fun, need(a2, {Kind::two_functor}).fun))));
    };
  });

  s = sub("arrow", "lax arrow 2-category as the unit span");
  s->add_option("A", a1)->required();
  s->callback([&] { run = [&] { return emit_value(of_ts(unit_twosided(lax_arrow(need(a1, {Kind::two_cat}).cat)))); }; });

  s = sub("pullback", "conical pullback of a cospan");
  s->add_option("f", a1)->required();
  s->add_option("g", a2)->required();
  s->callback([&] {
    run = [&] {
      MultiPullback P = pullback(need(a1, {Kind::two_functor}).fun, need(a2, {Kind::two_functor}).fun);
      TwoSided t;
      t.name = "pullback";
      t.p = P.proj[0];
      t.q = P.proj[1];
      return emit_value(of_ts(t, Kind::span));
    };
  });

  s = sub("check-opfib", "split op-2-fibration axioms for a cleavage");
  s->add_option("q", a1)->required();
  s->add_option("cleavage", a2);
  s->callback([&] {
    run = [&] {
      Cleavage c;
      if (a2.empty()) {
        c = need(a1, {Kind::cleavage}).clv;
      } else {
        TwoFunctor q = need(a1, {Kind::two_functor}).fun;
        c = need(a2, {Kind::cleavage}).clv;
        if (!(q == c.q)) throw StructuralError("cleavage is over a different 2-functor");
      }
      Report r = check_split_opfib(c);
      Report o = oracle_opfib(make_action_context(c.q), c);
      if (r.ok() != o.ok()) r.add("oracle.disagree", "verdict", "direct check and action oracle disagree");
      return emit_report("check-opfib", r, "", {{"oracle_verdict", o.ok() ? "pass" : "fail"}});
    };
  });

  s = sub("check-twosided", "split two-sided 2-fibration axioms");
  s->add_option("t", a1)->required();
  s->add_option("--mutants", mutants, "also run this many seeded single-entry mutants");
  s->callback([&] { run = [&] { return cmd_check_twosided(a1, mutants); }; });

  s = sub("check-discrete", "local discreteness of a span");
  s->add_option("t", a1)->required();
  s->callback([&] {
    run = [&] {
      LocalDiscreteness d = is_locally_discrete(need(a1, {Kind::two_sided, Kind::span}).ts);
      Report r = d.jr_report;
      r.merge(d.ld_report);
      return emit_report("check-discrete", r, d.ld ? "locally discrete" : "not locally discrete");
    };
  });

  s = sub("fibre", "fibre over a pair of objects");
  s->add_option("t", a1)->required();
  s->add_option("a", a2)->required();
  s->add_option("b", a3)->required();
  s->callback([&] {
    run = [&] {
      TwoSided t = need(a1, {Kind::two_sided, Kind::span}).ts;
      int a = t.A()->find_obj(a2), b = t.B()->find_obj(a3);
      if (a < 0 || b < 0) throw StructuralError("unknown base object");
      return emit_value(of_cat(make_cat(fibre(t, a, b))));
    };
  });

  s = sub("elements", "2-category of elements of indexed data");
  s->add_option("F", a1)->required();
  s->callback([&] {
    run = [&] {
      IndexedCat F = need(a1, {Kind::indexed_cat}).ic;
      Report r = validate_indexed(F);
      if (!r.ok()) return emit_report("elements", r, "indexed data is invalid");
      Elements E = elements(F);
      E.span.name = "elements_" + F.name;
      return emit_value(of_ts(E.span));
    };
  });

  s = sub("invgroth", "indexed data of a locally discrete two-sided fibration");
  s->add_option("t", a1)->required();
  s->callback([&] { run = [&] { return emit_value(of_ic(inverse_grothendieck(need(a1, {Kind::two_sided}).ts).F)); }; });

  s = sub("roundtrip", "verify the Grothendieck round trip");
  s->add_option("input", a1)->required();
  s->callback([&] { run = [&] { return cmd_roundtrip(a1); }; });

  s = sub("check-cell", "unary or nullary cell conditions");
  s->add_option("cell", a1)->required();
  s->callback([&] { run = [&] { return cmd_check_cell(a1); }; });

  s = sub("compose-cells", "compose a cell with cells along its source");
  s->add_option("psi", a1)->required();
  s->add_option("phi", rest)->required();
  s->callback([&] { run = [&] { return cmd_compose(a1, rest); }; });

  s = sub("convert-cell", "nullary/unary conversion through the unit");
  s->add_option("cell", a1)->required();
  s->add_option("--dir", dir)->check(CLI::IsMember({"to-unary", "to-nullary"}));
  s->callback([&] { run = [&] { return cmd_convert(a1, dir); }; });

  s = sub("kan-factorize", "factor a marked transformation through chi of indexed data");
  s->add_option("phi", a1)->required();
  s->add_option("chi", a2, "indexed data whose elements carry chi")->required();
  s->callback([&] { run = [&] { return cmd_kan(a1, a2); }; });

  s = sub("corpus", "list or write the builtin instances");
  s->add_option("--emit", emit, "directory to write NAME.json files into");
  s->callback([&] { run = [&] { return cmd_corpus(emit); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (opt.probe_bound) settings().probe_bound = opt.probe_bound;
  if (opt.size_cap) settings().size_cap = opt.size_cap;
  settings().seed = opt.seed;
  try {
    return run();
  } catch (const InconsistencyError& e) {
    Report r;
    r.add("inconsistency", "input", e.what());
    return emit_report(app.get_subcommands().front()->get_name(), r);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
