#include "doctest.h"

#include <random>

#include "vnfp/dsl.hpp"
#include "vnfp/normalizer.hpp"
#include "vnfp/validate.hpp"

using namespace vnfp;

namespace {

constexpr const char* kDecl = "atom A {abelian, diffuse, nonseparable}; atom B {abelian, diffuse, nonseparable}; ";

AtomTable atoms() { return parse(std::string(kDecl)).atoms; }

Expr expr(const std::string& text) { return parse_validated(kDecl + text); }

CanonicalForm norm(const std::string& text) { return normalize(expr(text), atoms()).form; }

/// Pseudo-parameters (sigma, rho) of a piece over the single atom A. They add
/// under free products, and for a factor they coincide with the F-form
/// parameters. A piece is generated together with its value, so the value
/// never goes through the rule catalog.
struct Piece {
  std::string text;
  ExtScalar sigma;
  ExtScalar rho;
};

ExtScalar rational_in_unit(std::mt19937_64& rng) {
  const long den = std::uniform_int_distribution<long>(2, 5)(rng);
  return ExtScalar(std::uniform_int_distribution<long>(1, den - 1)(rng), den);
}

Piece random_piece(std::mt19937_64& rng) {
  const ExtScalar one(1);
  switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
    case 0:
      return {"A", 1, 0};
    case 1: {
      const ExtScalar t = rational_in_unit(rng);
      return {"dsum(" + t.str() + ": A, " + (one - t).str() + ": C)", t, t - t * t};
    }
    case 2: {
      const long k = std::uniform_int_distribution<long>(2, 4)(rng);
      return {"tensorM(" + std::to_string(k) + ", A)", ExtScalar(1, k), one - ExtScalar(1, k)};
    }
    case 3: {
      const ExtScalar t = rational_in_unit(rng);
      return {"dsum(" + t.str() + ": A, " + (one - t).str() + ": LZ)", t, one - t};
    }
    case 4: {
      const ExtScalar u = one + rational_in_unit(rng) * ExtScalar(3);
      return {"LF(" + u.str() + ")", 0, u};
    }
    case 5: {
      const long k = std::uniform_int_distribution<long>(2, 3)(rng);
      return {"M(" + std::to_string(k) + ")", 0, one - ExtScalar(1, k * k)};
    }
    case 6:
      return {"LZ", 0, 1};
    default: {
      const ExtScalar s(std::uniform_int_distribution<long>(1, 6)(rng), 2);
      const ExtScalar r = one - s + rational_in_unit(rng) * ExtScalar(2);
      return {"F(" + s.str() + ", " + r.str() + "; A)", s, r};
    }
  }
}

}  // namespace

TEST_CASE("normalize examples") {
  CanonicalForm f = norm("(fpow(A, 2))^(1/3)");
  CHECK(f.kind == FormKind::FForm);
  CHECK(f.params == FParams{6, 4});
  CHECK(f.profile == AtomProfile::single("A"));

  f = norm("A * LZ");
  CHECK(f.params == FParams{1, 1});

  f = norm("F(2, 3; dsum(1/2: A, 1/2: LZ))");
  CHECK(f.kind == FormKind::FForm);
  CHECK(f.params == FParams{1, 4});
  CHECK(f.profile == AtomProfile::single("A"));

  f = norm("A");
  CHECK(f.kind == FormKind::Residual);
  CHECK(f.reason == ResidualReason::NotAFactor);
}

TEST_CASE("terminal kinds") {
  CanonicalForm f = norm("LF(2) * LF(3)");
  CHECK(f.kind == FormKind::IFGF);
  CHECK(f.r == ExtScalar(5));

  f = norm("M(3)");
  CHECK(f.kind == FormKind::Separable);
  CHECK(f.fdim == ExtScalar(8, 9));

  f = norm("dsum(1/2: C, 1/2: C) * dsum(1/2: C, 1/2: C)");
  CHECK(f.kind == FormKind::Separable);
  CHECK(f.fdim == ExtScalar(1));

  f = norm("A * LZ * tensorM(4, A)");
  CHECK(f.kind == FormKind::Residual);
  CHECK(f.reason == ResidualReason::NoApplicableRule);

  f = norm("fpow(A, inf)^(1/2)");
  CHECK(f.kind == FormKind::FForm);
  CHECK(f.params == FParams{ExtScalar::infinity(), ExtScalar::infinity()});
}

TEST_CASE("traces replay to the terminal and the measure drops") {
  for (const char* text : {"(fpow(A, 2))^(1/3)", "(F(2, 3; A) * F(1, 2; B))^(1/2) * LZ",
                           "tensorM(2, A) * dsum(1/3: A, 2/3: C) * LF(2)", "F(2, inf; A) * tensorM(3, B)"}) {
    CAPTURE(text);
    const NormalizeResult r = normalize(expr(text), atoms());
    CHECK(r.trace.step_count() > 0);
    CHECK(replay(r.trace, atoms()) == r.trace.terminal);
    CHECK(r.form.expr == r.trace.terminal);
    CHECK(measure(r.trace.terminal) < measure(r.trace.input));
  }
}

TEST_CASE("replay rejects a tampered trace") {
  NormalizeResult r = normalize(expr("F(1, 2; A) * F(1, 3; A)"), atoms());
  REQUIRE_FALSE(r.trace.steps.empty());
  r.trace.steps.front().after = expr("F(2, 6; A)");
  CHECK_THROWS_AS(replay(r.trace, atoms()), Error);
}

TEST_CASE("reversed priority reaches the same normal form") {
  NormalizeOptions reversed;
  std::reverse(reversed.priority.begin(), reversed.priority.end());
  for (const char* text : {"(F(2, 3; A) * LZ)^(2/3) * tensorM(2, A)", "fpow(A, 3)^(1/2) * dsum(1/2: A, 1/2: C)",
                           "F(2, inf; A) * F(1, 2; B) * LF(3)"}) {
    CAPTURE(text);
    CHECK(normalize(expr(text), atoms()).form.expr == normalize(expr(text), atoms(), reversed).form.expr);
  }
}

TEST_CASE("well-definedness of the expansion") {
  CHECK(check_welldefined({ExtScalar(3, 2), 1}, 2, 5));
  CHECK(check_welldefined({1, ExtScalar::infinity()}, 1, 3));
  CHECK(check_welldefined({2, 0}, 5, 7));
  CHECK(check_welldefined({ExtScalar(5, 2), ExtScalar(-1, 2)}, 7, 8));
  CHECK_THROWS_AS(check_welldefined({ExtScalar(5, 2), ExtScalar(-1, 2)}, 3, 4), Error);
  CHECK_THROWS_AS(check_welldefined({2, 0}, 4, 5), Error);
}

TEST_CASE("pseudo-parameter oracle") {
  std::mt19937_64 rng(7);
  const std::vector<ExtScalar> exponents = {ExtScalar(1), ExtScalar(1, 2), ExtScalar(2, 3), ExtScalar(3, 2),
                                            ExtScalar(2)};
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    // Two copies of A and an LF factor guarantee a factor with LF to lend.
    std::string text = "A * A * LF(3)";
    ExtScalar sigma(2);
    ExtScalar rho(3);
    const int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int j = 0; j < n; ++j) {
      const Piece p = random_piece(rng);
      text += " * " + p.text;
      sigma += p.sigma;
      rho += p.rho;
    }
    FParams expected{sigma, rho};
    const ExtScalar t = exponents[std::uniform_int_distribution<std::size_t>(0, exponents.size() - 1)(rng)];
    if (t != ExtScalar(1)) {
      text = "(" + text + ")^(" + t.str() + ")";
      // The invariant (sigma, sigma + rho - 1) scales as (sigma/t, (sigma + rho - 1)/t^2).
      const ExtScalar s = sigma / t;
      expected = {s, (sigma + rho - ExtScalar(1)) / (t * t) - s + ExtScalar(1)};
    }
    CAPTURE(text);
    const CanonicalForm f = norm(text);
    REQUIRE(f.kind == FormKind::FForm);
    CHECK(f.params == expected);
    CHECK(f.profile == AtomProfile::single("A"));
    ++checked;
  }
  CHECK(checked == 400);
}
