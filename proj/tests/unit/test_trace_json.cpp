#include "doctest.h"

#include "json.hpp"
#include "vnfp/dsl.hpp"
#include "vnfp/trace_json.hpp"

using namespace vnfp;
using nlohmann::json;

namespace {

constexpr const char* kDecl = "atom A {abelian, diffuse, nonseparable}; atom B {abelian, diffuse, nonseparable}; ";

AtomTable atoms() { return parse(std::string(kDecl)).atoms; }

Expr expr(const std::string& text) { return parse_validated(kDecl + text); }

/// Every number in a TraceDocument is an exact string; integers appear only
/// as indices and paths.
void check_exact(const json& j) {
  CHECK_FALSE(j.is_number_float());
  if (j.is_structured()) {
    for (const auto& v : j) check_exact(v);
  }
}

}  // namespace

TEST_CASE("normalize document") {
  const std::string text = "(fpow(A, 2))^(1/3)";
  const NormalizeResult r = normalize(expr(text), atoms());
  const json doc = json::parse(normalize_document(text, r, true));
  check_exact(doc);
  CHECK(doc["command"] == "normalize");
  CHECK(doc["input"] == text);
  CHECK(doc["step_count"] == r.trace.step_count());
  REQUIRE(doc["steps"].size() == r.trace.step_count());
  for (std::size_t i = 0; i < r.trace.step_count(); ++i) {
    const json& step = doc["steps"][i];
    CHECK(step["index"] == i);
    CHECK(step["rule_id"] == std::string(rule_name(r.trace.steps[i].rule)));
    CHECK(step["citation"] == std::string(rule_spec(r.trace.steps[i].rule).citation));
    CHECK(step["before"] == render(r.trace.steps[i].before));
    CHECK(step["after"] == render(r.trace.steps[i].after));
    CHECK(step["path"].is_array());
    CHECK(step["strategy"].is_boolean());
    for (const auto& [k, v] : step["params"].items()) CHECK(v.is_string());
  }
  const json& term = doc["terminal"];
  CHECK(term["kind"] == "fform");
  CHECK(term["s"] == "6");
  CHECK(term["r"] == "4");
  CHECK(term["profile"][0]["atom"] == "A");
  CHECK(term["profile"][0]["weight"] == "1");
  CHECK(render(expr(term["text"].get<std::string>())) == render(r.form.expr));

  const json brief = json::parse(normalize_document(text, r, false));
  CHECK_FALSE(brief.contains("steps"));
  CHECK(brief["step_count"] == r.trace.step_count());
}

TEST_CASE("rationals and infinity are strings") {
  const NormalizeResult r = normalize(expr("F(3/2, inf; dsum(1/3: A, 2/3: B))"), atoms());
  const json doc = json::parse(normalize_document("x", r, true));
  check_exact(doc);
  CHECK(doc["terminal"]["s"] == "3/2");
  CHECK(doc["terminal"]["r"] == "inf");
  CHECK(doc["terminal"]["profile"][1]["weight"] == "2/3");
  for (const auto& e : doc["terminal"]["profile"]) {
    CHECK_NOTHROW(ExtScalar::parse(e["weight"].get<std::string>()));
  }
}

TEST_CASE("other terminal kinds") {
  json doc = json::parse(normalize_document("x", normalize(expr("LF(2) * LF(5/2)"), atoms()), false));
  CHECK(doc["terminal"]["kind"] == "ifgf");
  CHECK(doc["terminal"]["r"] == "9/2");

  doc = json::parse(normalize_document("x", normalize(expr("M(2)"), atoms()), false));
  CHECK(doc["terminal"]["kind"] == "separable");
  CHECK(doc["terminal"]["fdim"] == "3/4");

  doc = json::parse(normalize_document("x", normalize(expr("A"), atoms()), false));
  CHECK(doc["terminal"]["kind"] == "residual");
  CHECK(doc["terminal"]["reason"] == "not-a-factor");
}

TEST_CASE("iso, fg and fdim documents") {
  const IsoVerdict v = check_iso(expr("F(2, 5; A)"), expr("F(3, 4; A)"), atoms());
  json doc = json::parse(iso_document("a", "b", v, true));
  check_exact(doc);
  CHECK(doc["command"] == "iso");
  CHECK(doc["input"] == json::array({"a", "b"}));
  CHECK(doc["traces"].size() == 2);
  CHECK(doc["verdict"]["kind"] == "non-isomorphic");
  CHECK(doc["verdict"]["left_rank"] == "2");
  CHECK(doc["verdict"]["right_rank"] == "3");

  doc = json::parse(fg_document("f", fundamental_group(expr("fpow(A, inf)"), atoms()), false));
  CHECK(doc["verdict"]["kind"] == "R_+^*");

  doc = json::parse(fdim_document("M(3)", ExtScalar(8, 9)));
  CHECK(doc["fdim"] == "8/9");
  doc = json::parse(fdim_document("A", std::nullopt));
  CHECK(doc["fdim"].is_null());
}

TEST_CASE("describe") {
  CHECK(describe(normalize(expr("F(1, 2; A) * F(1, 3; A)"), atoms()).form) == "F(2, 5; A)");
  CHECK(describe(normalize(expr("A"), atoms()).form) == "A  [residual: not-a-factor]");
  CHECK(describe(normalize(expr("M(2)"), atoms()).form) == "M(2)  [separable, fdim 3/4]");
}
