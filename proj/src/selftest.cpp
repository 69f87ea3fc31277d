#include "vnfp/selftest.hpp"

#include <algorithm>
#include <sstream>

#include "vnfp/dsl.hpp"
#include "vnfp/fdim.hpp"
#include "vnfp/iso.hpp"
#include "vnfp/validate.hpp"

namespace vnfp {

namespace {

constexpr std::size_t kMaxFailuresKept = 3;

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

ExtScalar positive_rational(Rng& rng, long num_max, long den_max) {
  return ExtScalar(uniform(rng, 1, num_max), uniform(rng, 1, den_max));
}

/// Rational strictly between 0 and 1.
ExtScalar unit_rational(Rng& rng) {
  const long den = uniform(rng, 2, 6);
  return ExtScalar(uniform(rng, 1, den - 1), den);
}

const ExtScalar kOne(1);

std::string atom_name(Rng& rng) {
  const long k = uniform(rng, 0, 5);
  return k < 3 ? "A" : (k < 5 ? "B" : "D");
}

AtomProfile random_profile(Rng& rng) {
  switch (uniform(rng, 0, 5)) {
    case 0: {
      const ExtScalar t = unit_rational(rng);
      return AtomProfile{{{"A", t}, {"B", kOne - t}}};
    }
    case 1: {
      const ExtScalar t = unit_rational(rng);
      const std::string a = atom_name(rng);
      AtomProfile p{{{a, t}, {std::string(kLZName), kOne - t}}};
      std::sort(p.entries.begin(), p.entries.end(),
                [](const ProfileEntry& x, const ProfileEntry& y) { return x.atom < y.atom; });
      return p;
    }
    default:
      return AtomProfile::single(atom_name(rng));
  }
}

Expr corner(const Expr& x, const ExtScalar& t, const Expr& filler) {
  return ex::dsum({{t, x}, {kOne - t, filler}});
}

Expr random_leaf(Rng& rng) {
  const ExtScalar inf = ExtScalar::infinity();
  switch (uniform(rng, 0, 13)) {
    case 0:
    case 1:
      return ex::atom(atom_name(rng));
    case 2:
      return ex::matrix(uniform(rng, 2, 4));
    case 3:
      return coin(rng, 0.5) ? ex::lz() : ex::hyperfinite();
    case 4:
      return ex::lfree(coin(rng, 0.15) ? inf : kOne + positive_rational(rng, 5, 3));
    case 5:
    case 6: {
      if (coin(rng, 0.1)) {
        AtomProfile p = random_profile(rng);
        if (!p.contains(kLZName)) p = AtomProfile::single(atom_name(rng));
        return ex::fform({inf, inf}, p);
      }
      return ex::fform(random_params(rng, true), random_profile(rng));
    }
    case 7:
      return corner(ex::atom(atom_name(rng)), unit_rational(rng), ex::trivial());
    case 8:
      return corner(ex::atom(atom_name(rng)), unit_rational(rng), ex::lz());
    case 9:
      return ex::tensor_matrix(uniform(rng, 2, 4), ex::atom(atom_name(rng)));
    case 10: {
      const long n = uniform(rng, 1, 5);
      return ex::free_pow(ex::atom(atom_name(rng)), n == 5 ? inf : ExtScalar(n + 1));
    }
    case 11:
      return corner(ex::matrix(uniform(rng, 2, 3)), unit_rational(rng), ex::trivial());
    case 12:
      return corner(ex::trivial(), unit_rational(rng), ex::trivial());
    default: {
      IFPSpec spec;
      if (coin(rng, 0.5)) spec.head.push_back({random_params(rng, false), random_profile(rng)});
      spec.tail_profile = AtomProfile::single(atom_name(rng));
      if (coin(rng, 0.3)) {
        spec.tail = {TailKind::Constant, positive_rational(rng, 3, 2), 0};
      } else {
        spec.tail = {TailKind::Geometric, positive_rational(rng, 3, 2), unit_rational(rng)};
      }
      return ex::inf_free_prod(std::move(spec));
    }
  }
}

const std::vector<ExtScalar>& compress_exponents() {
  static const std::vector<ExtScalar> ts = {ExtScalar(1, 4), ExtScalar(1, 3), ExtScalar(1, 2),
                                            ExtScalar(2, 3), ExtScalar(3, 4), ExtScalar(3, 2),
                                            ExtScalar(2)};
  return ts;
}

Expr form_over(const FParams& p, const std::string& atom) { return ex::fform(p, AtomProfile::single(atom)); }

std::string show(const Expr& e) { return render(e); }

AtomTable oracle_atoms() {
  AtomTable t = selftest_atoms();
  AtomAttrs x;
  x.abelian = true;
  x.separability = Separability::Separable;
  x.self_symmetric = true;
  t.declare("X", x);
  return t;
}

}  // namespace

void SuiteResult::check(bool cond, const std::string& what) {
  ++total;
  if (cond) {
    ++passed;
  } else if (failures.size() < kMaxFailuresKept) {
    failures.push_back(what);
  }
}

AtomTable selftest_atoms() {
  AtomTable t;
  AtomAttrs a;
  a.abelian = true;
  a.diffuse = true;
  a.separability = Separability::Nonseparable;
  t.declare("A", a);
  t.declare("B", a);
  AtomAttrs d;
  d.self_symmetric = true;
  t.declare("D", d);
  return t;
}

FParams random_params(Rng& rng, bool allow_infinite_r) {
  const ExtScalar s = positive_rational(rng, 9, 4);
  if (allow_infinite_r && coin(rng, 0.15)) return {s, ExtScalar::infinity()};
  // r > 1 - s, and r may be negative when s > 1.
  return {s, kOne - s + positive_rational(rng, 9, 4)};
}

Expr random_expr(Rng& rng, int depth) {
  if (depth <= 1 || coin(rng, 0.35)) return random_leaf(rng);
  switch (uniform(rng, 0, 9)) {
    case 0:
    case 1:
    case 2:
    case 3: {
      std::vector<Expr> kids;
      const long n = uniform(rng, 2, 3);
      for (long i = 0; i < n; ++i) kids.push_back(random_expr(rng, depth - 1));
      return ex::free_prod(std::move(kids));
    }
    case 4:
    case 5:
    case 6: {
      const auto& ts = compress_exponents();
      return ex::compress(random_expr(rng, depth - 1),
                          ts[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(ts.size()) - 1))]);
    }
    case 7:
      return ex::free_pow(random_expr(rng, depth - 1), ExtScalar(uniform(rng, 2, 3)));
    case 8:
      return ex::tensor_matrix(uniform(rng, 2, 3), random_expr(rng, depth - 1));
    default:
      return corner(random_expr(rng, depth - 1), unit_rational(rng), ex::trivial());
  }
}

SuiteResult suite_integer_powers() {
  SuiteResult res{"integer-powers"};
  const AtomTable atoms = selftest_atoms();
  for (long n = 1; n <= 10; ++n) {
    for (long m = 1; m <= 10; ++m) {
      const Expr copies = n == 1 ? ex::atom("A") : ex::free_pow(ex::atom("A"), n);
      const Expr e = validate_expr(ex::compress(copies, ExtScalar(1, m)), atoms);
      const CanonicalForm f = normalize(e, atoms).form;
      const std::string what = "n=" + std::to_string(n) + " m=" + std::to_string(m) + ": " + show(f.expr);
      if (n == 1) {
        // A alone is not a factor; its compressions have no F-form.
        res.check(m == 1 ? f.kind == FormKind::Residual && f.reason == ResidualReason::NotAFactor
                         : f.kind == FormKind::Residual,
                  what);
        continue;
      }
      // (A^{*n})^{1/m} = A^{*nm} * LF((n-1) m^2 - n m + 1)
      const ExtScalar s(n * m);
      const ExtScalar r((n - 1) * m * m - n * m + 1);
      res.check(f.kind == FormKind::FForm && f.params == FParams{s, r} &&
                    f.profile == AtomProfile::single("A"),
                what);
    }
  }
  return res;
}

SuiteResult suite_group_law(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"group-law"};
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const FParams p = random_params(rng, true);
    const ExtScalar t = positive_rational(rng, 7, 5);
    const ExtScalar u = positive_rational(rng, 7, 5);
    const FParams pt = rescale_params(p, t);
    const bool law = rescale_params(pt, u) == rescale_params(p, t * u);
    const bool inverse = rescale_params(pt, kOne / t) == p;
    res.check(law && inverse && in_param_domain(pt),
              "p=(" + p.s.str() + "," + p.r.str() + ") t=" + t.str() + " u=" + u.str());
  }
  return res;
}

SuiteResult suite_welldefined(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"well-definedness"};
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const FParams p = random_params(rng, coin(rng, 0.1));
    const BigInt n1 = def_expand(p).n;
    const BigInt n2 = n1 + uniform(rng, 1, 6);
    const std::string what = "p=(" + p.s.str() + "," + p.r.str() + ") n=" + n1.get_str() + "," + n2.get_str();
    try {
      res.check(check_welldefined(p, n1, n2), what);
    } catch (const Error& e) {
      res.check(false, what + ": " + e.what());
    }
  }
  return res;
}

SuiteResult suite_distribution(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"distribution"};
  Rng rng(seed);
  const AtomTable atoms = selftest_atoms();
  for (std::size_t i = 0; i < cases; ++i) {
    const FParams p = random_params(rng, true);
    const bool with_lf = coin(rng, 0.3);
    const FParams q = random_params(rng, true);
    const ExtScalar u = kOne + positive_rational(rng, 5, 3);
    ExtScalar t;
    do {
      t = ExtScalar(uniform(rng, 1, 7), uniform(rng, 2, 10));
    } while (!(t * t < ExtScalar(1, 2)));

    const Expr x = form_over(p, "A");
    const Expr y = with_lf ? ex::lfree(u) : form_over(q, "A");
    const std::string what = show(x) + " * " + show(y) + " at t=" + t.str();
    try {
      const Expr e = validate_expr(ex::compress(ex::free_prod({x, y}), t), atoms);
      const FParams sum = with_lf ? FParams{p.s, p.r + u} : add_params(p, q);
      const CanonicalForm direct = normalize(e, atoms).form;
      auto split = apply_rule(RuleId::DR00, e, atoms);
      if (!split) {
        res.check(false, what + ": distribution rule did not apply");
        continue;
      }
      const CanonicalForm distributed = normalize(split->after, atoms).form;
      res.check(direct.kind == FormKind::FForm && direct.params == rescale_params(sum, t) &&
                    distributed.expr == direct.expr,
                what);
    } catch (const Error& err) {
      res.check(false, what + ": " + err.what());
    }
  }
  return res;
}

SuiteResult suite_base_identities() {
  SuiteResult res{"base-identities"};
  const AtomTable atoms = selftest_atoms();
  const Expr a = ex::atom("A");
  const std::vector<ExtScalar> ts = {ExtScalar(1, 4), ExtScalar(1, 3), ExtScalar(1, 2), ExtScalar(2, 3)};
  const std::vector<ExtScalar> rs = {ExtScalar(3, 2), ExtScalar(2), ExtScalar::infinity()};

  auto expect = [&](const Expr& e, const FParams& p) {
    std::string what = show(e);
    try {
      const CanonicalForm f = normalize(validate_expr(e, atoms), atoms).form;
      res.check(f.kind == FormKind::FForm && f.params == p && f.profile == AtomProfile::single("A"),
                what + " -> " + show(f.expr));
    } catch (const Error& err) {
      res.check(false, what + ": " + err.what());
    }
  };

  expect(ex::free_prod({a, ex::lz()}), {kOne, kOne});
  expect(ex::free_prod({a, ex::hyperfinite()}), {kOne, kOne});
  for (long n = 2; n <= 6; ++n) {
    for (const auto& t : ts) {
      expect(ex::free_prod({ex::free_pow(a, n), corner(a, t, ex::trivial())}), {ExtScalar(n) + t, t - t * t});
      expect(ex::free_pow(corner(a, t, ex::lz()), n), {ExtScalar(n) * t, ExtScalar(n) * (kOne - t)});
      for (const auto& r : rs) {
        const ExtScalar s(n);
        expect(ex::fform({s, r}, AtomProfile{{{"A", t}, {std::string(kLZName), kOne - t}}}),
               {s * t, s + r - s * t});
      }
    }
  }
  for (long k = 2; k <= 6; ++k) {
    const ExtScalar inv(1, k);
    for (const auto& r : rs) expect(ex::free_prod({ex::tensor_matrix(k, a), ex::lfree(r)}), {inv, r - inv + kOne});
  }
  for (const auto& t : ts) {
    for (const auto& r : rs) expect(ex::free_prod({corner(a, t, ex::trivial()), ex::lfree(r)}), {t, r + t - t * t});
  }
  return res;
}

SuiteResult suite_infinite_products() {
  SuiteResult res{"infinite-products"};
  const AtomTable atoms = selftest_atoms();
  const ExtScalar inf = ExtScalar::infinity();
  auto run = [&](const IFPSpec& spec) { return normalize(validate_expr(ex::inf_free_prod(spec), atoms), atoms).form; };

  IFPSpec geom{{}, AtomProfile::single("A"), {TailKind::Geometric, ExtScalar(1, 2), ExtScalar(1, 2)}};
  CanonicalForm f = run(geom);
  res.check(f.kind == FormKind::FForm && f.params == FParams{kOne, inf} && f.profile == AtomProfile::single("A"),
            "geometric tail: " + show(f.expr));

  IFPSpec constant{{}, AtomProfile::single("A"), {TailKind::Constant, kOne, 0}};
  f = run(constant);
  res.check(f.kind == FormKind::FForm && f.params == FParams{inf, inf} && f.profile == AtomProfile::single("A"),
            "constant tail: " + show(f.expr));

  IFPSpec two{{{FParams{kOne, ExtScalar(2)}, AtomProfile::single("B")}},
              AtomProfile::single("A"),
              {TailKind::Geometric, ExtScalar(1, 2), ExtScalar(1, 2)}};
  f = run(two);
  const AtomProfile half{{{"A", ExtScalar(1, 2)}, {"B", ExtScalar(1, 2)}}};
  res.check(f.kind == FormKind::FForm && f.params == FParams{ExtScalar(2), inf} && f.profile == half,
            "two atoms: " + show(f.expr));

  IFPSpec uneven{{{FParams{ExtScalar(3), ExtScalar(1)}, AtomProfile::single("B")}},
                 AtomProfile::single("A"),
                 {TailKind::Geometric, ExtScalar(1), ExtScalar(1, 2)}};
  f = run(uneven);
  const AtomProfile weights{{{"A", ExtScalar(2, 5)}, {"B", ExtScalar(3, 5)}}};
  res.check(f.kind == FormKind::FForm && f.params == FParams{ExtScalar(5), inf} && f.profile == weights,
            "weights s_i/s: " + show(f.expr));
  return res;
}

SuiteResult suite_oracle() {
  SuiteResult res{"oracle"};
  const AtomTable atoms = oracle_atoms();
  auto F = [](long s, long r, const char* atom) { return form_over({ExtScalar(s), ExtScalar(r)}, atom); };

  IsoVerdict v = check_iso(F(2, 5, "A"), F(3, 4, "A"), atoms);
  res.check(v.kind == IsoKind::NonIsomorphic && v.left_rank == ExtScalar(2) && v.right_rank == ExtScalar(3),
            "F(2,5;A) vs F(3,4;A)");
  v = check_iso(F(2, 5, "X"), F(3, 4, "X"), atoms);
  res.check(v.kind == IsoKind::Unknown && v.reason == UnknownReason::SeparableOpen, "F(2,5;X) vs F(3,4;X)");
  v = check_iso(F(2, 5, "X"), F(2, 6, "X"), atoms);
  res.check(v.kind == IsoKind::Unknown, "F(2,5;X) vs F(2,6;X)");
  v = check_iso(F(2, 3, "A"), ex::free_prod({F(1, 1, "A"), F(1, 2, "A")}), atoms);
  res.check(v.kind == IsoKind::Isomorphic, "F(2,3;A) vs F(1,1;A) * F(1,2;A)");

  FGVerdict g = fundamental_group(ex::free_pow(ex::atom("A"), ExtScalar::infinity()), atoms);
  res.check(g.kind == FGKind::AllPositiveReals, "fg fpow(A, inf)");
  g = fundamental_group(F(2, 3, "A"), atoms);
  res.check(g.kind == FGKind::Trivial, "fg F(2,3;A)");
  g = fundamental_group(validate_expr(F(2, 3, "LZ"), atoms), atoms);
  res.check(g.kind == FGKind::Unknown, "fg F(2,3;LZ)");
  return res;
}

SuiteResult suite_confluence(std::uint64_t seed, std::size_t cases, std::size_t shuffles) {
  SuiteResult res{"confluence"};
  Rng rng(seed);
  const AtomTable atoms = selftest_atoms();
  for (std::size_t i = 0; i < cases; ++i) {
    const Expr e = validate_expr(random_expr(rng, 5), atoms);
    std::vector<NormalizeOptions> variants(shuffles);
    for (auto& opt : variants) std::shuffle(opt.priority.begin(), opt.priority.end(), rng);
    const std::string what = "case " + std::to_string(i) + ": " + show(e);
    try {
      const NormalizeResult base = normalize(e, atoms);
      bool same = true;
      std::string detail;
      for (const auto& opt : variants) {
        const NormalizeResult other = normalize(e, atoms, opt);
        if (!(other.trace.terminal == base.trace.terminal)) {
          same = false;
          detail = " -> " + show(base.trace.terminal) + " vs " + show(other.trace.terminal);
          break;
        }
      }
      replay(base.trace, atoms);
      const Expr again = parse_validated(render(base.trace.terminal), atoms);
      const bool idempotent = normalize(again, atoms).trace.terminal == base.trace.terminal;
      if (!idempotent) detail += " (not idempotent)";
      res.check(same && idempotent, what + detail);
    } catch (const Error& err) {
      res.check(false, what + ": " + err.what());
    }
  }
  return res;
}

SuiteResult suite_round_trip(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"round-trip"};
  Rng rng(seed);
  const AtomTable atoms = selftest_atoms();
  for (std::size_t i = 0; i < cases; ++i) {
    const Expr e = validate_expr(random_expr(rng, 5), atoms);
    const std::string text = render(e);
    try {
      const SourceProgram back = parse(text, atoms);
      res.check(back.has_body && back.body == e, text + " -> " + render(back.body));
    } catch (const Error& err) {
      res.check(false, text + ": " + err.what());
    }
  }
  return res;
}

SuiteResult suite_rank_laws(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"rank-laws"};
  Rng rng(seed);
  const AtomTable atoms = selftest_atoms();
  for (std::size_t i = 0; i < cases; ++i) {
    const FParams p = random_params(rng, true);
    const FParams q = random_params(rng, true);
    const ExtScalar t = positive_rational(rng, 5, 5);
    AtomProfile prof = coin(rng, 0.5) ? AtomProfile::single("A")
                                      : AtomProfile{{{"A", ExtScalar(1, 2)}, {std::string(kLZName), ExtScalar(1, 2)}}};
    const Expr x = ex::fform(p, prof);
    const Expr y = ex::fform(q, prof);
    const std::string what = show(x) + " * " + show(y) + " at t=" + t.str();
    try {
      auto rank = [&](const Expr& e) { return sans_rank(normalize(validate_expr(e, atoms), atoms).form, atoms); };
      const auto rx = rank(x);
      const auto ry = rank(y);
      const auto rc = rank(ex::compress(x, t));
      const auto rs = rank(ex::free_prod({x, y}));
      res.check(rx && ry && rc && rs && *rc == *rx / t && *rs == *rx + *ry, what);
    } catch (const Error& err) {
      res.check(false, what + ": " + err.what());
    }
  }
  return res;
}

SuiteResult suite_fdim(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"fdim"};
  Rng rng(seed);
  const AtomTable atoms = selftest_atoms();
  for (std::size_t i = 0; i < cases; ++i) {
    const long m = uniform(rng, 1, 4);
    std::vector<long> w;
    std::vector<long> k;
    long total = 0;
    for (long j = 0; j < m; ++j) {
      w.push_back(uniform(rng, 1, 6));
      k.push_back(uniform(rng, 1, 5));
      total += w.back();
    }
    std::vector<WeightedExpr> terms;
    ExtScalar expected(1);
    for (long j = 0; j < m; ++j) {
      const ExtScalar a(w[j], total);
      terms.push_back({a, ex::matrix(k[j])});
      expected -= a * a / ExtScalar(k[j] * k[j]);
    }
    const Expr e = validate_expr(m == 1 ? ex::matrix(k[0]) : ex::dsum(std::move(terms)), atoms);
    res.check(fdim(e) == expected, show(e));
  }
  for (long n = 1; n <= 8; ++n) {
    res.check(fdim(validate_expr(ex::matrix(n), atoms)) == kOne - ExtScalar(1, n * n), "M(" + std::to_string(n) + ")");
    std::vector<WeightedExpr> points;
    for (long j = 0; j < n; ++j) points.push_back({ExtScalar(1, n), ex::trivial()});
    const Expr cn = n == 1 ? ex::trivial() : ex::dsum(std::move(points));
    res.check(fdim(validate_expr(cn, atoms)) == ExtScalar(n - 1, n), "C^" + std::to_string(n));
  }
  for (long num = 1; num <= 5; ++num) {
    const ExtScalar t(num, 6);
    const Expr e = corner(ex::trivial(), t, ex::trivial());
    res.check(fdim(validate_expr(e, atoms)) == ExtScalar(2) * t * (kOne - t), "dsum(" + t.str() + ": C, C)");
  }
  return res;
}

bool SelftestReport::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

std::string SelftestReport::text() const {
  std::ostringstream out;
  out << "vnfp selftest seed=" << seed << " cases=" << cases << "\n";
  std::size_t passed = 0;
  std::size_t total = 0;
  for (const auto& s : suites) {
    out << "  " << s.name << std::string(s.name.size() < 20 ? 20 - s.name.size() : 1, ' ') << s.passed << "/"
        << s.total << (s.ok() ? "  ok" : "  FAILED") << "\n";
    for (const auto& f : s.failures) out << "      " << f << "\n";
    passed += s.passed;
    total += s.total;
  }
  out << "total " << passed << "/" << total << (ok() ? " passed" : " FAILED") << "\n";
  return out.str();
}

SelftestReport run_selftest(std::uint64_t seed, std::size_t cases) {
  SelftestReport r;
  r.seed = seed;
  r.cases = cases;
  r.suites.push_back(suite_integer_powers());
  r.suites.push_back(suite_group_law(seed, cases));
  r.suites.push_back(suite_welldefined(seed + 1, std::max<std::size_t>(cases / 20, 1)));
  r.suites.push_back(suite_distribution(seed + 2, std::max<std::size_t>(cases / 5, 1)));
  r.suites.push_back(suite_base_identities());
  r.suites.push_back(suite_infinite_products());
  r.suites.push_back(suite_oracle());
  r.suites.push_back(suite_confluence(seed + 3, std::max<std::size_t>(cases / 10, 1), 5));
  r.suites.push_back(suite_round_trip(seed + 4, cases));
  r.suites.push_back(suite_rank_laws(seed + 5, std::max<std::size_t>(cases / 5, 1)));
  r.suites.push_back(suite_fdim(seed + 6, std::max<std::size_t>(cases / 10, 1)));
  return r;
}

}  // namespace vnfp
