#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "twocat/io.hpp"

using namespace twocat;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parse_error_of(const std::string& text) {
  try {
    io::parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("serialization is a fixed point of parse") {
  for (auto& e : corpus::entries()) {
    INFO(e.name);
    std::string s = io::serialize(e.make());
    Value v = io::parse(s, e.name);
    CHECK(v.kind == e.make().kind);
    CHECK(io::serialize(v) == s);
  }
}

TEST_CASE("parsed 2-categories have the same tables") {
  for (auto& [n, C] : corpus::base_cats()) {
    INFO(n);
    Value v = io::parse(io::serialize(of_cat(C)));
    REQUIRE(v.kind == Kind::two_cat);
    CHECK(v.cat->same_tables(*C));
  }
}

TEST_CASE("serialization matches the golden files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(GOLDEN_DIR) / "canon";
  for (auto& e : corpus::entries()) {
    INFO(e.name);
    fs::path f = dir / (e.name + ".json");
    REQUIRE(fs::exists(f));
    CHECK(io::serialize(e.make()) == read_file(f));
  }
}

TEST_CASE("corpus references load by name") {
  Value v = io::load("corpus:unit_C2");
  CHECK(v.kind == Kind::two_sided);
  CHECK(io::serialize(v) == io::serialize(*corpus::lookup("unit_C2")));
  CHECK_THROWS_AS(io::load("corpus:no_such_instance"), StructuralError);
  CHECK_THROWS_AS(io::load("/nonexistent/file.json"), StructuralError);
}

TEST_CASE("parse errors") {
  // syntax: location is line:column
  std::string m = parse_error_of("{\n  \"kind\": \"two_cat\",\n  \"name\": \n");
  CHECK(m.rfind("<input>:4:1: invalid JSON", 0) == 0);
  CHECK(parse_error_of("[1, 2,, 3]").rfind("<input>:1:", 0) == 0);

  // schema: location is a path into the document
  json j = io::to_json(of_cat(corpus::arrow()));
  j["morphisms"][0][2] = "nowhere";
  CHECK(parse_error_of(j.dump()).rfind("$.morphisms[0][2]", 0) == 0);

  json k = io::to_json(of_cat(corpus::arrow()));
  k["kind"] = "no_such_kind";
  CHECK_FALSE(parse_error_of(k.dump()).empty());

  json l = io::to_json(of_cat(corpus::arrow()));
  l.erase("objects");
  CHECK_FALSE(parse_error_of(l.dump()).empty());

  CHECK_FALSE(parse_error_of("42").empty());
}

TEST_CASE("reports") {
  Report ok;
  json a = io::report_json(ok);
  CHECK(a["verdict"] == "pass");
  CHECK(a["total"] == 0);
  CHECK(io::report_text(a) == "PASS\n");

  Report r;
  r.max_kept = 2;
  r.add("om1", "rho", "no factorization through the lift", {"x", "u"});
  r.add("sm.id", "rho", "lift of an identity is not an identity");
  r.add("sm.id", "rho", "lift of an identity is not an identity");
  json b = io::report_json(r);
  CHECK(b["verdict"] == "fail");
  CHECK(b["total"] == 3);
  CHECK(b["findings"].size() == 2);
  b["summary"] = "two shown";
  CHECK(io::report_text(b) ==
        "FAIL: two shown\n"
        "  om1 @ rho: no factorization through the lift [x, u]\n"
        "  sm.id @ rho: lift of an identity is not an identity\n"
        "  ... 1 more\n");

  Report m;
  m.merge(r, "co.");
  CHECK(m.total == 3);
  CHECK(m.has("co.om1"));
  CHECK(m.has_prefix("co.sm"));
  CHECK_FALSE(m.has("om1"));
}
