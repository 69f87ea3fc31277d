#include "vnfp/rules.hpp"

#include <algorithm>

#include "vnfp/dsl.hpp"
#include "vnfp/fdim.hpp"

namespace vnfp {

namespace {

const std::vector<RuleSpec> kCatalog = {
    {RuleId::Profile, "R-PROFILE", "dsum(a: A, b: A, ...) with A self-symmetric",
     "A = dsum(t_i: A_i) with every A_i a copy of a self-symmetric A"},
    {RuleId::SepCollapse, "R-SEP-COLLAPSE", "B_1 * ... * B_m, separable members",
     "B_1 * ... * B_m = LF(fdim B_1 + ... + fdim B_m) when the product is a factor"},
    {RuleId::IntForm, "R-INT-FORM", "fpow(A, n); A * ... * A; A^{*n} * LF(r)",
     "A^{*n} = F_{n,0}, A^{*n} * LF_r = F_{n,r}"},
    {RuleId::BaseLZ, "R-BASE-LZ", "A * LZ, A * R",
     "A * LZ = A * R = (F_{k,k^2-k+1})^k = F_{1,1}"},
    {RuleId::CornerDSum, "R-CORNER-DSUM", "A^{*n} * dsum(t: A, 1-t: C)",
     "A^{*n} * (A_t + C_{1-t}) = F_{n+t,t-t^2}"},
    {RuleId::Tensor, "R-TENSOR", "tensorM(k, A) * LF(r)",
     "(A (x) M_k) * LF_r = F_{1/k,r-1/k+1}"},
    {RuleId::DSumLF, "R-DSUM-LF", "dsum(t: A, 1-t: C) * LF(r)",
     "(A_t + C_{1-t}) * LF_r = F_{t,r+t-t^2}"},
    {RuleId::DSumLZPow, "R-DSUM-LZ-POW", "fpow(dsum(t: A, 1-t: LZ), n), n >= 2",
     "(A_t + LZ_{1-t})^{*n} = F_{nt,n(1-t)}"},
    {RuleId::DSumExchange, "R-DSUM-EXCHANGE", "dsum(a_i: B_i) * *_i dsum(a_i: C, 1-a_i: C)",
     "(+_i (B_i)_{a_i}) * (*_i (C_{a_i} + C)) = (+_i C_{a_i}) * (*_i ((B_i)_{a_i} + C))"},
    {RuleId::IFP, "R-IFP", "ifp([F(s_i, r_i; A_i), ...], A, tail)",
     "*_i F_{s_i,r_i}(A_i) = F_{s,inf}(+_i (A_i)_{s_i/s}) with s = sum s_i; = A^{*inf} when s = inf"},
    {RuleId::MultiAtom, "R-MULTIATOM", "F(s, r; A) * F(v, u; B)",
     "F_{s,r}(A) * F_{v,u}(B) = F_{s+v,r+u}(A_{s/(s+v)} + B_{v/(s+v)})"},
    {RuleId::AbsorbLF, "R-ABSORB-LF", "F(s, r; A) * LF(u)", "F_{s,r} * LF_u = F_{s,r+u}"},
    {RuleId::AbsorbFdim, "R-ABSORB-FDIM", "F(s, r; A) * B, B separable",
     "F_{s,r} * B = F_{s,r+fdim B}"},
    {RuleId::AbsorbCornerInf, "R-ABSORB-CORNER-INF", "F(s, inf; A) * dsum(t: A, 1-t: C), s > 1",
     "F_{s,inf} * (A_t + C_{1-t}) = F_{s+t,inf}"},
    {RuleId::Add, "R-ADD", "F(s, r; A) * F(v, u; A)", "F_{s,r} * F_{v,u} = F_{s+v,r+u}"},
    {RuleId::AtomThin, "R-ATOM-THIN", "F(s, r; dsum(t: A, 1-t: LZ))",
     "F_{s,r}(A_t + LZ_{1-t}) = F_{st,s+r-st}(A)"},
    {RuleId::DR00, "R-DR00", "(X * Y)^(t), X and Y factors, t^2 < 1/2",
     "(X * Y)^t = X^t * Y^t * LF_{t^-2 - 1}"},
    {RuleId::Rescale, "R-RESCALE", "F(s, r; A)^(t), LF(r)^(t)",
     "(F_{s,r})^t = F_{s/t,(s+r-1)/t^2-s/t+1}, (LF_r)^t = LF_{1+(r-1)/t^2}"},
};

using Params = std::vector<RuleParam>;

struct Match {
  Expr after;
  Params params;
};

RuleParam param(std::string name, const ExtScalar& v) { return {std::move(name), v.str()}; }
RuleParam param(std::string name, std::string v) { return {std::move(name), std::move(v)}; }

const ExtScalar kOne(1);

/// Free-product members minus `drop`, plus `add`; a single survivor is
/// returned bare.
Expr rebuild(const std::vector<Expr>& members, std::vector<std::size_t> drop, std::vector<Expr> add) {
  std::sort(drop.begin(), drop.end());
  std::vector<Expr> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!std::binary_search(drop.begin(), drop.end(), i)) out.push_back(members[i]);
  }
  for (auto& a : add) out.push_back(std::move(a));
  if (out.size() == 1) return out.front();
  return ex::free_prod(std::move(out));
}

Expr make_form(FParams p, AtomProfile profile) { return ex::fform(std::move(p), std::move(profile)); }

struct Copies {
  AtomProfile profile;
  ExtScalar n;
};

std::optional<Copies> copies_of(const Expr& e, const AtomTable& atoms) {
  if (auto p = ssa_profile(e, atoms)) return Copies{*p, ExtScalar(1)};
  if (const auto* fp = e.get<node::FreePow>()) {
    if (auto p = ssa_profile(fp->base, atoms)) return Copies{*p, fp->n};
  }
  return std::nullopt;
}

struct Corner {
  ExtScalar t;
  AtomProfile profile;
};

/// dsum(t: P, 1-t: C) with P self-symmetric atomic (flattened).
std::optional<Corner> corner_of(const Expr& e, const AtomTable& atoms) {
  const auto* d = e.get<node::DSum>();
  if (!d) return std::nullopt;
  std::optional<ExtScalar> c_weight;
  std::vector<ProfileEntry> entries;
  for (const auto& term : d->terms) {
    if (term.expr.is<node::Trivial>()) {
      if (c_weight) return std::nullopt;
      c_weight = term.weight;
    } else if (term.expr.is<node::LZ>()) {
      entries.push_back({std::string(kLZName), term.weight});
    } else if (const auto* a = term.expr.get<node::AtomRef>()) {
      const AtomAttrs* attrs = atoms.find(a->name);
      if (!attrs || !attrs->self_symmetric) return std::nullopt;
      entries.push_back({a->name, term.weight});
    } else {
      return std::nullopt;
    }
  }
  if (!c_weight || entries.empty()) return std::nullopt;
  const ExtScalar t = kOne - *c_weight;
  for (auto& en : entries) en.weight = en.weight / t;
  try {
    AtomProfile p = normalize_profile(std::move(entries), atoms);
    if (!p.has_non_lz()) return std::nullopt;
    return Corner{t, std::move(p)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct TensorPiece {
  BigInt k;
  AtomProfile profile;
};

std::optional<TensorPiece> tensor_of(const Expr& e, const AtomTable& atoms) {
  const auto* t = e.get<node::TensorMatrix>();
  if (!t) return std::nullopt;
  auto p = ssa_profile(t->base, atoms);
  if (!p) return std::nullopt;
  return TensorPiece{t->k, *p};
}

bool is_two_point_c(const Expr& e, const ExtScalar& a) {
  const auto* d = e.get<node::DSum>();
  if (!d || d->terms.size() != 2) return false;
  if (!d->terms[0].expr.is<node::Trivial>() || !d->terms[1].expr.is<node::Trivial>()) return false;
  return d->terms[0].weight == a || d->terms[1].weight == a;
}

bool is_diffuse_hyperfinite(const Expr& e) {
  auto v = separable_view(e);
  return v && v->atomic_summands.empty() && v->lf_contributions.empty();
}

/// Non-LZ part of a profile and its total weight.
std::pair<ExtScalar, AtomProfile> split_lz(const AtomProfile& p) {
  const ExtScalar t = kOne - p.lz_weight();
  AtomProfile rest;
  for (const auto& en : p.entries) {
    if (en.atom != kLZName) rest.entries.push_back({en.atom, en.weight / t});
  }
  return {t, rest};
}

FParams thin_params(const FParams& p, const ExtScalar& t) {
  if (p.s.is_infinite()) return p;
  const ExtScalar st = p.s * t;
  return FParams{st, p.s + p.r - st};
}

/// F-form parameters over `target`, reading an F-form over the non-LZ part of
/// `target` back through the thinning identity when needed.
std::optional<FParams> match_form(const node::FForm& f, const AtomProfile& target) {
  if (f.profile == target) return f.params;
  if (target.lz_weight().is_zero() || !target.has_non_lz()) return std::nullopt;
  auto [t, rest] = split_lz(target);
  if (!(f.profile == rest)) return std::nullopt;
  if (f.params.s.is_infinite()) return f.params;
  const ExtScalar sigma = f.params.s / t;
  return FParams{sigma, f.params.r - sigma + f.params.s};
}

Expr profile_expr(const AtomProfile& p) {
  auto leaf = [](const std::string& name) {
    return name == kLZName ? ex::lz() : ex::atom(name);
  };
  if (p.entries.size() == 1) return leaf(p.entries.front().atom);
  std::vector<WeightedExpr> terms;
  for (const auto& en : p.entries) terms.push_back({en.weight, leaf(en.atom)});
  return ex::dsum(std::move(terms));
}

/// Integer n >= 1 such that params == (n, 0).
std::optional<ExtScalar> integer_power(const FParams& p) {
  if (p.s.is_finite() && p.s.is_integer() && p.r.is_zero()) return p.s;
  return std::nullopt;
}

// ---------------------------------------------------------------- rules

std::optional<Match> rule_profile(const Expr& e, const AtomTable& atoms) {
  const auto* d = e.get<node::DSum>();
  if (!d) return std::nullopt;
  auto mergeable = [&](const Expr& x) {
    if (x.is<node::LZ>()) return true;
    const auto* a = x.get<node::AtomRef>();
    if (!a) return false;
    const AtomAttrs* attrs = atoms.find(a->name);
    return attrs && attrs->self_symmetric;
  };
  std::vector<WeightedExpr> out;
  std::string merged;
  for (const auto& term : d->terms) {
    if (!out.empty() && out.back().expr == term.expr && mergeable(term.expr)) {
      out.back().weight += term.weight;
      if (merged.find(render(term.expr)) == std::string::npos) {
        if (!merged.empty()) merged += ", ";
        merged += render(term.expr);
      }
    } else {
      out.push_back(term);
    }
  }
  if (out.size() == d->terms.size()) return std::nullopt;
  Expr after = out.size() == 1 ? out.front().expr : ex::dsum(std::move(out));
  return Match{after, {param("merged", merged)}};
}

std::optional<Match> rule_sep_collapse(const Expr& e, const AtomTable&) {
  auto collapse = [](const Expr& x) -> std::optional<Expr> {
    try {
      return collapse_separable(x);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  if (const auto* fp = e.get<node::FreePow>()) {
    if (!in_separable_class(fp->base)) return std::nullopt;
    auto lf = collapse(e);
    if (!lf) return std::nullopt;
    return Match{*lf, {param("fdim", lf->get<node::LFree>()->r)}};
  }
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  std::vector<std::size_t> sep;
  std::vector<Expr> sep_members;
  ExtScalar count(0);
  for (std::size_t i = 0; i < f->factors.size(); ++i) {
    const Expr& m = f->factors[i];
    if (!in_separable_class(m)) continue;
    sep.push_back(i);
    sep_members.push_back(m);
    const auto* p = m.get<node::FreePow>();
    count += p ? p->n : kOne;
  }
  if (!(count >= ExtScalar(2))) return std::nullopt;
  const Expr sub = sep_members.size() == 1 ? sep_members.front() : ex::free_prod(sep_members);
  auto lf = collapse(sub);
  if (!lf) return std::nullopt;
  Params ps{param("members", std::to_string(sep.size())), param("fdim", lf->get<node::LFree>()->r)};
  return Match{rebuild(f->factors, sep, {*lf}), std::move(ps)};
}

std::optional<Match> rule_int_form(const Expr& e, const AtomTable& atoms) {
  if (const auto* fp = e.get<node::FreePow>()) {
    auto p = ssa_profile(fp->base, atoms);
    if (!p) return std::nullopt;
    if (fp->n.is_infinite()) {
      return Match{make_form({ExtScalar::infinity(), ExtScalar::infinity()}, *p), {param("n", fp->n)}};
    }
    if (!p->lz_weight().is_zero() || fp->n < ExtScalar(2)) return std::nullopt;
    return Match{make_form({fp->n, ExtScalar(0)}, *p), {param("n", fp->n)}};
  }
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;

  // Copies of one profile (bare, free powers, or F_{n,0}) grouped together.
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto anchor = copies_of(ms[i], atoms);
    if (!anchor || anchor->n.is_infinite() || !anchor->profile.lz_weight().is_zero()) continue;
    std::vector<std::size_t> idx;
    ExtScalar total(0);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (auto c = copies_of(ms[j], atoms); c && c->profile == anchor->profile && c->n.is_finite()) {
        idx.push_back(j);
        total += c->n;
      } else if (const auto* ff = ms[j].get<node::FForm>(); ff && ff->profile == anchor->profile) {
        if (auto n = integer_power(ff->params)) {
          idx.push_back(j);
          total += *n;
        }
      }
    }
    if (idx.size() < 2) continue;
    return Match{rebuild(ms, idx, {make_form({total, ExtScalar(0)}, anchor->profile)}),
                 {param("n", total), param("atom", render(anchor->profile))}};
  }

  // A^{*n} * LF(r)
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto c = copies_of(ms[i], atoms);
    if (!c || c->n.is_infinite()) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto* lf = ms[j].get<node::LFree>();
      if (!lf) continue;
      return Match{rebuild(ms, {i, j}, {make_form({c->n, lf->r}, c->profile)}),
                   {param("n", c->n), param("r", lf->r), param("atom", render(c->profile))}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_base_lz(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto p = ssa_profile(ms[i], atoms);
    if (!p) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (j == i || !is_diffuse_hyperfinite(ms[j])) continue;
      return Match{rebuild(ms, {i, j}, {make_form({kOne, kOne}, *p)}),
                   {param("atom", render(*p)), param("diffuse", render(ms[j]))}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_corner_dsum(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto c = corner_of(ms[i], atoms);
    if (!c) continue;
    std::vector<std::size_t> idx{i};
    ExtScalar n(0);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (j == i) continue;
      if (auto cp = copies_of(ms[j], atoms); cp && cp->profile == c->profile && cp->n.is_finite()) {
        idx.push_back(j);
        n += cp->n;
      } else if (const auto* ff = ms[j].get<node::FForm>()) {
        auto p = match_form(*ff, c->profile);
        if (!p) continue;
        if (auto k = integer_power(*p)) {
          idx.push_back(j);
          n += *k;
        }
      }
    }
    if (n.is_zero()) continue;
    const ExtScalar& t = c->t;
    return Match{rebuild(ms, idx, {make_form({n + t, t - t * t}, c->profile)}),
                 {param("n", n), param("t", t), param("atom", render(c->profile))}};
  }
  return std::nullopt;
}

std::optional<Match> rule_tensor(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto tp = tensor_of(ms[i], atoms);
    if (!tp) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto* lf = ms[j].get<node::LFree>();
      if (!lf) continue;
      const ExtScalar inv = kOne / ExtScalar(tp->k);
      return Match{rebuild(ms, {i, j}, {make_form({inv, lf->r - inv + kOne}, tp->profile)}),
                   {param("k", ExtScalar(tp->k)), param("r", lf->r)}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_dsum_lf(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto c = corner_of(ms[i], atoms);
    if (!c) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto* lf = ms[j].get<node::LFree>();
      if (!lf) continue;
      const ExtScalar& t = c->t;
      const FParams p{t, lf->r + t - t * t};
      // With s + r <= 2 the result cannot lend an LF factor back, so a copy
      // or tensor piece that also needs one takes it first.
      if (p.r.is_finite() && p.s + p.r <= ExtScalar(2)) {
        bool other_needs_lf = false;
        for (std::size_t k = 0; k < ms.size() && !other_needs_lf; ++k) {
          if (k == i || k == j) continue;
          auto cp = copies_of(ms[k], atoms);
          other_needs_lf = (cp && cp->n.is_finite()) || tensor_of(ms[k], atoms).has_value();
        }
        if (other_needs_lf) continue;
      }
      return Match{rebuild(ms, {i, j}, {make_form(p, c->profile)}),
                   {param("t", t), param("r", lf->r), param("atom", render(c->profile))}};
    }
  }
  return std::nullopt;
}

Expr lz_pow_form(const AtomProfile& p, const ExtScalar& n) {
  auto [t, rest] = split_lz(p);
  return make_form({n * t, n * (kOne - t)}, rest);
}

bool mixed_lz(const AtomProfile& p) { return !p.lz_weight().is_zero() && p.has_non_lz(); }

std::optional<Match> rule_dsum_lz_pow(const Expr& e, const AtomTable& atoms) {
  if (const auto* fp = e.get<node::FreePow>()) {
    auto p = ssa_profile(fp->base, atoms);
    if (!p || !mixed_lz(*p) || fp->n.is_infinite() || fp->n < ExtScalar(2)) return std::nullopt;
    return Match{lz_pow_form(*p, fp->n), {param("n", fp->n), param("t", kOne - p->lz_weight())}};
  }
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto anchor = copies_of(ms[i], atoms);
    if (!anchor || anchor->n.is_infinite() || !mixed_lz(anchor->profile)) continue;
    std::vector<std::size_t> idx;
    ExtScalar total(0);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (auto c = copies_of(ms[j], atoms); c && c->profile == anchor->profile && c->n.is_finite()) {
        idx.push_back(j);
        total += c->n;
      } else if (const auto* ff = ms[j].get<node::FForm>()) {
        auto p = match_form(*ff, anchor->profile);
        if (!p) continue;
        if (auto n = integer_power(*p)) {
          idx.push_back(j);
          total += *n;
        }
      }
    }
    if (idx.size() < 2) continue;
    return Match{rebuild(ms, idx, {lz_pow_form(anchor->profile, total)}),
                 {param("n", total), param("t", kOne - anchor->profile.lz_weight())}};
  }
  return std::nullopt;
}

std::optional<Match> rule_dsum_exchange(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* d = ms[i].get<node::DSum>();
    if (!d) continue;
    std::size_t non_c = 0;
    for (const auto& term : d->terms) non_c += term.expr.is<node::Trivial>() ? 0 : 1;
    if (non_c < 2 || ssa_profile(ms[i], atoms) || corner_of(ms[i], atoms) ||
        in_separable_class(ms[i])) {
      continue;
    }
    std::vector<std::size_t> used{i};
    bool ok = true;
    for (const auto& term : d->terms) {
      bool found = false;
      for (std::size_t j = 0; j < ms.size() && !found; ++j) {
        if (std::find(used.begin(), used.end(), j) != used.end()) continue;
        if (is_two_point_c(ms[j], term.weight)) {
          used.push_back(j);
          found = true;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<WeightedExpr> skeleton;
    std::vector<Expr> add;
    for (const auto& term : d->terms) {
      skeleton.push_back({term.weight, ex::trivial()});
      add.push_back(ex::dsum({{term.weight, term.expr}, {kOne - term.weight, ex::trivial()}}));
    }
    add.push_back(ex::dsum(std::move(skeleton)));
    return Match{rebuild(ms, used, std::move(add)),
                 {param("terms", std::to_string(d->terms.size()))}};
  }
  return std::nullopt;
}

std::optional<Match> rule_ifp(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::InfFreeProd>();
  if (!f) return std::nullopt;
  const IFPSpec& spec = f->spec;
  const ExtScalar total = total_s(spec);
  const ExtScalar inf = ExtScalar::infinity();
  if (total.is_infinite()) {
    for (const auto& h : spec.head) {
      if (!(h.profile == spec.tail_profile)) return std::nullopt;
    }
    return Match{make_form({inf, inf}, spec.tail_profile), {param("s", total)}};
  }
  std::vector<ProfileEntry> entries;
  for (const auto& h : spec.head) {
    for (const auto& en : h.profile.entries) entries.push_back({en.atom, en.weight * h.params.s / total});
  }
  const ExtScalar tail = tail_sum(spec.tail);
  for (const auto& en : spec.tail_profile.entries) {
    entries.push_back({en.atom, en.weight * tail / total});
  }
  AtomProfile merged = normalize_profile(std::move(entries), atoms);
  return Match{make_form({total, inf}, std::move(merged)), {param("s", total)}};
}

std::optional<Match> rule_multiatom(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a || a->params.s.is_infinite()) continue;
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      const auto* b = ms[j].get<node::FForm>();
      if (!b || b->params.s.is_infinite() || a->profile == b->profile) continue;
      const ExtScalar s = a->params.s + b->params.s;
      AtomProfile mixed = mix_profiles(a->profile, a->params.s / s, b->profile, atoms);
      return Match{rebuild(ms, {i, j}, {make_form({s, a->params.r + b->params.r}, mixed)}),
                   {param("s", a->params.s), param("r", a->params.r), param("v", b->params.s),
                    param("u", b->params.r)}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_absorb_lf(const Expr& e, const AtomTable&) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto* lf = ms[j].get<node::LFree>();
      if (!lf) continue;
      return Match{rebuild(ms, {i, j}, {make_form({a->params.s, a->params.r + lf->r}, a->profile)}),
                   {param("s", a->params.s), param("r", a->params.r), param("u", lf->r)}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_absorb_fdim(const Expr& e, const AtomTable&) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const Expr& b = ms[j];
      if (b.is<node::LFree>() || b.is<node::Trivial>() || b.is<node::FForm>()) continue;
      auto u = fdim(b);
      if (!u || !u->is_positive()) continue;
      return Match{rebuild(ms, {i, j}, {make_form({a->params.s, a->params.r + *u}, a->profile)}),
                   {param("s", a->params.s), param("r", a->params.r), param("u", *u)}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_absorb_corner_inf(const Expr& e, const AtomTable& atoms) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a || a->params.r.is_finite()) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      auto c = corner_of(ms[j], atoms);
      if (!c) continue;
      auto p = match_form(*a, c->profile);
      if (!p || !(p->s > kOne)) continue;
      const ExtScalar inf = ExtScalar::infinity();
      return Match{rebuild(ms, {i, j}, {make_form({p->s + c->t, inf}, c->profile)}),
                   {param("s", p->s), param("t", c->t)}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_add(const Expr& e, const AtomTable& atoms) {
  const ExtScalar inf = ExtScalar::infinity();
  if (const auto* fp = e.get<node::FreePow>()) {
    const auto* a = fp->base.get<node::FForm>();
    if (!a) return std::nullopt;
    FParams p = fp->n.is_infinite() ? FParams{inf, inf}
                                    : FParams{a->params.s * fp->n, a->params.r * fp->n};
    return Match{make_form(p, a->profile),
                 {param("s", a->params.s), param("r", a->params.r), param("n", fp->n)}};
  }
  const auto* f = e.get<node::FreeProd>();
  if (!f) return std::nullopt;
  const auto& ms = f->factors;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a) continue;
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      const auto* b = ms[j].get<node::FForm>();
      if (!b || !(a->profile == b->profile)) continue;
      return Match{rebuild(ms, {i, j}, {make_form(add_params(a->params, b->params), a->profile)}),
                   {param("s", a->params.s), param("r", a->params.r), param("v", b->params.s),
                    param("u", b->params.r)}};
    }
  }
  // A^{*inf} absorbs further copies of A.
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a || a->params.s.is_finite()) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      auto c = copies_of(ms[j], atoms);
      if (!c || !match_form(*a, c->profile)) continue;
      return Match{rebuild(ms, {j}, {}), {param("s", inf), param("v", c->n)}};
    }
  }
  return std::nullopt;
}

std::optional<Match> rule_atom_thin(const Expr& e, const AtomTable&) {
  const auto* f = e.get<node::FForm>();
  if (!f || f->profile.lz_weight().is_zero()) return std::nullopt;
  const FParams& p = f->params;
  if (!f->profile.has_non_lz()) {
    return Match{ex::lfree(p.s + p.r), {param("s", p.s), param("r", p.r), param("t", ExtScalar(0))}};
  }
  auto [t, rest] = split_lz(f->profile);
  return Match{make_form(thin_params(p, t), rest), {param("s", p.s), param("r", p.r), param("t", t)}};
}

bool is_factor_form(const Expr& e) { return e.is<node::FForm>() || e.is<node::LFree>(); }

std::optional<Match> rule_dr00(const Expr& e, const AtomTable&) {
  const auto* c = e.get<node::Compress>();
  if (!c) return std::nullopt;
  const auto* f = c->base.get<node::FreeProd>();
  if (!f || f->factors.size() != 2) return std::nullopt;
  if (!is_factor_form(f->factors[0]) || !is_factor_form(f->factors[1])) return std::nullopt;
  const ExtScalar& t = c->t;
  if (!(t * t < ExtScalar(1, 2))) return std::nullopt;
  Expr after = ex::free_prod({ex::compress(f->factors[0], t), ex::compress(f->factors[1], t),
                              ex::lfree(kOne / (t * t) - kOne)});
  return Match{after, {param("t", t)}};
}

std::optional<Match> rule_rescale(const Expr& e, const AtomTable&) {
  const auto* c = e.get<node::Compress>();
  if (!c) return std::nullopt;
  if (const auto* a = c->base.get<node::FForm>()) {
    return Match{make_form(rescale_params(a->params, c->t), a->profile),
                 {param("s", a->params.s), param("r", a->params.r), param("t", c->t)}};
  }
  if (const auto* lf = c->base.get<node::LFree>()) {
    const ExtScalar r = kOne + (lf->r - kOne) / (c->t * c->t);
    return Match{ex::lfree(r), {param("r", lf->r), param("t", c->t)}};
  }
  return std::nullopt;
}

std::optional<Match> dispatch(RuleId id, const Expr& e, const AtomTable& atoms) {
  switch (id) {
    case RuleId::Profile: return rule_profile(e, atoms);
    case RuleId::SepCollapse: return rule_sep_collapse(e, atoms);
    case RuleId::IntForm: return rule_int_form(e, atoms);
    case RuleId::BaseLZ: return rule_base_lz(e, atoms);
    case RuleId::CornerDSum: return rule_corner_dsum(e, atoms);
    case RuleId::Tensor: return rule_tensor(e, atoms);
    case RuleId::DSumLF: return rule_dsum_lf(e, atoms);
    case RuleId::DSumLZPow: return rule_dsum_lz_pow(e, atoms);
    case RuleId::DSumExchange: return rule_dsum_exchange(e, atoms);
    case RuleId::IFP: return rule_ifp(e, atoms);
    case RuleId::MultiAtom: return rule_multiatom(e, atoms);
    case RuleId::AbsorbLF: return rule_absorb_lf(e, atoms);
    case RuleId::AbsorbFdim: return rule_absorb_fdim(e, atoms);
    case RuleId::AbsorbCornerInf: return rule_absorb_corner_inf(e, atoms);
    case RuleId::Add: return rule_add(e, atoms);
    case RuleId::AtomThin: return rule_atom_thin(e, atoms);
    case RuleId::DR00: return rule_dr00(e, atoms);
    case RuleId::Rescale: return rule_rescale(e, atoms);
  }
  return std::nullopt;
}

// ------------------------------------------------------- split strategy

std::size_t index_of(const std::vector<Expr>& ms, const Expr& x) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].id() == x.id()) return i;
  }
  throw Error(ErrorCode::InvalidExpression, "strategy operand lost during canonicalization");
}

const std::vector<Expr>& members(const Expr& e) {
  const auto* f = e.get<node::FreeProd>();
  if (!f) throw Error(ErrorCode::InvalidExpression, "strategy expects a free product");
  return f->factors;
}

RewriteStep strategy_step(RuleId rule, Params params, Expr before, Expr after) {
  RewriteStep s{rule, std::move(params), std::move(before), std::move(after), {}, true};
  return s;
}

/// Merge of two finite-or-matching F-forms; empty when no rule merges them.
std::optional<std::pair<RuleId, Expr>> merge_forms(const Expr& x, const Expr& y, const AtomTable& atoms) {
  const auto* a = x.get<node::FForm>();
  const auto* b = y.get<node::FForm>();
  if (a->profile == b->profile) {
    return std::make_pair(RuleId::Add, make_form(add_params(a->params, b->params), a->profile));
  }
  if (a->params.s.is_infinite() || b->params.s.is_infinite()) return std::nullopt;
  const ExtScalar s = a->params.s + b->params.s;
  return std::make_pair(RuleId::MultiAtom,
                        make_form({s, a->params.r + b->params.r},
                                  mix_profiles(a->profile, a->params.s / s, b->profile, atoms)));
}

struct Combined {
  RuleId rule;
  Expr form;
  Params params;
};

/// F-form obtained from `partner` and LF(u), if the partner is of a kind
/// some rule combines with an LF factor.
std::optional<Combined> combine_with_lf(const Expr& partner, const ExtScalar& u, const AtomTable& atoms) {
  if (auto c = copies_of(partner, atoms); c && c->n.is_finite()) {
    return Combined{RuleId::IntForm, make_form({c->n, u}, c->profile), {param("n", c->n), param("r", u)}};
  }
  if (auto c = corner_of(partner, atoms)) {
    const ExtScalar& t = c->t;
    return Combined{RuleId::DSumLF, make_form({t, u + t - t * t}, c->profile),
                    {param("t", t), param("r", u)}};
  }
  if (auto tp = tensor_of(partner, atoms)) {
    const ExtScalar inv = kOne / ExtScalar(tp->k);
    return Combined{RuleId::Tensor, make_form({inv, u - inv + kOne}, tp->profile),
                    {param("k", ExtScalar(tp->k)), param("r", u)}};
  }
  return std::nullopt;
}

std::vector<RewriteStep> try_lend_lf(const Expr& e, const AtomTable& atoms) {
  const auto& ms = members(e);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a) continue;
    const FParams& p = a->params;
    const bool lendable = p.r.is_infinite() || (p.s.is_finite() && p.r > ExtScalar(2) - p.s);
    if (!lendable) continue;
    const ExtScalar u = p.r.is_infinite() ? p.r : (p.s + p.r) / ExtScalar(2);
    const FParams kept{p.s, p.r.is_infinite() ? p.r : p.r - u};
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (j == i) continue;
      auto comb = combine_with_lf(ms[j], u, atoms);
      if (!comb) continue;
      const Expr kept_form = make_form(kept, a->profile);
      if (!merge_forms(kept_form, comb->form, atoms)) continue;

      std::vector<RewriteStep> steps;
      const Expr lf = ex::lfree(u);
      const Expr partner = ms[j];
      steps.push_back(strategy_step(RuleId::AbsorbLF,
                                    {param("direction", "split"), param("s", p.s), param("r", kept.r),
                                     param("u", u)},
                                    e, rebuild(ms, {i}, {kept_form, lf})));
      const Expr e1 = canonicalize(steps.back().after);
      const auto& m1 = members(e1);
      steps.push_back(strategy_step(comb->rule, comb->params, e1,
                                    rebuild(m1, {index_of(m1, partner), index_of(m1, lf)}, {comb->form})));
      const Expr e2 = canonicalize(steps.back().after);
      const auto& m2 = members(e2);
      auto merged = merge_forms(kept_form, comb->form, atoms);
      steps.push_back(strategy_step(merged->first, {}, e2,
                                    rebuild(m2, {index_of(m2, kept_form), index_of(m2, comb->form)},
                                            {merged->second})));
      return steps;
    }
  }
  return {};
}

std::vector<RewriteStep> try_unbase_lz(const Expr& e, const AtomTable& atoms) {
  const auto& ms = members(e);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* a = ms[i].get<node::FForm>();
    if (!a) continue;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (j == i) continue;
      std::optional<AtomProfile> target;
      auto cp = copies_of(ms[j], atoms);
      auto corner = corner_of(ms[j], atoms);
      if (cp && cp->n.is_finite()) {
        target = cp->profile;
      } else if (corner) {
        target = corner->profile;
      } else {
        continue;
      }
      auto p = match_form(*a, *target);
      if (!p || !(*p == FParams{kOne, kOne})) continue;

      std::vector<RewriteStep> steps;
      const Expr bare = profile_expr(*target);
      const Expr lz = ex::lz();
      const Expr partner = ms[j];
      steps.push_back(strategy_step(RuleId::BaseLZ,
                                    {param("direction", "split"), param("atom", render(*target))}, e,
                                    rebuild(ms, {i}, {bare, lz})));
      const Expr e1 = canonicalize(steps.back().after);
      const auto& m1 = members(e1);
      Expr form;
      RuleId rule;
      Params ps;
      if (cp) {
        const ExtScalar n = cp->n + kOne;
        if (mixed_lz(*target)) {
          rule = RuleId::DSumLZPow;
          form = lz_pow_form(*target, n);
        } else {
          rule = RuleId::IntForm;
          form = make_form({n, ExtScalar(0)}, *target);
        }
        ps = {param("n", n)};
      } else {
        const ExtScalar& t = corner->t;
        rule = RuleId::CornerDSum;
        form = make_form({kOne + t, t - t * t}, *target);
        ps = {param("n", kOne), param("t", t)};
      }
      steps.push_back(strategy_step(rule, ps, e1,
                                    rebuild(m1, {index_of(m1, bare), index_of(m1, partner)}, {form})));
      const Expr e2 = canonicalize(steps.back().after);
      const auto& m2 = members(e2);
      const auto* ff = form.get<node::FForm>();
      steps.push_back(strategy_step(
          RuleId::AbsorbFdim, {param("s", ff->params.s), param("r", ff->params.r), param("u", kOne)}, e2,
          rebuild(m2, {index_of(m2, form), index_of(m2, lz)},
                  {make_form({ff->params.s, ff->params.r + kOne}, ff->profile)})));
      return steps;
    }
  }
  return {};
}

/// Moves toward F(inf, inf; a) with a single atom a, which absorbs LF_u for
/// every u and every piece over a: the sink lends LF(inf) to a neighbour, or
/// the a-part of a mixed F-form is split off and absorbed.
/// Largest w with w * p <= q entrywise.
ExtScalar contained_multiple(const AtomProfile& p, const AtomProfile& q) {
  std::optional<ExtScalar> w;
  for (const auto& en : p.entries) {
    ExtScalar in_q(0);
    for (const auto& x : q.entries) {
      if (x.atom == en.atom) in_q = x.weight;
    }
    const ExtScalar ratio = in_q / en.weight;
    if (!w || ratio < *w) w = ratio;
  }
  return w.value_or(ExtScalar(0));
}

/// Moves toward F(inf, inf; P), which absorbs LF_u for every u and every
/// F-form over P: the sink lends LF(inf) to a neighbour, or the largest
/// multiple of P inside a neighbouring profile is split off and absorbed.
std::vector<RewriteStep> try_infinite_sink(const Expr& e, const AtomTable& atoms) {
  const auto& ms = members(e);
  const ExtScalar inf = ExtScalar::infinity();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto* sink = ms[i].get<node::FForm>();
    if (!sink || sink->params.s.is_finite()) continue;
    const Expr sink_expr = ms[i];
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (j == i) continue;
      const Expr target = ms[j];
      const auto* f = target.get<node::FForm>();
      if (f && f->params.s.is_infinite()) continue;

      if (f && f->params.r.is_infinite()) {
        const ExtScalar w = contained_multiple(sink->profile, f->profile);
        if (w.is_zero() || w == kOne) continue;
        std::vector<ProfileEntry> rest_entries;
        for (const auto& en : f->profile.entries) {
          ExtScalar in_p(0);
          for (const auto& x : sink->profile.entries) {
            if (x.atom == en.atom) in_p = x.weight;
          }
          const ExtScalar left = en.weight - w * in_p;
          if (left.is_positive()) rest_entries.push_back({en.atom, left / (kOne - w)});
        }
        const AtomProfile rest = normalize_profile(std::move(rest_entries), atoms);
        const Expr part_p = make_form({f->params.s * w, inf}, sink->profile);
        const Expr part_rest = make_form({f->params.s * (kOne - w), inf}, rest);
        std::vector<RewriteStep> steps;
        steps.push_back(strategy_step(RuleId::MultiAtom,
                                      {param("direction", "split"), param("s", f->params.s * w),
                                       param("v", f->params.s * (kOne - w))},
                                      e, rebuild(ms, {j}, {part_p, part_rest})));
        const Expr e1 = canonicalize(steps.back().after);
        const auto& m1 = members(e1);
        steps.push_back(strategy_step(RuleId::Add, {param("s", inf), param("v", f->params.s * w)}, e1,
                                      rebuild(m1, {index_of(m1, sink_expr), index_of(m1, part_p)}, {sink_expr})));
        return steps;
      }

      std::optional<Combined> comb;
      if (f) {
        comb = Combined{RuleId::AbsorbLF, make_form({f->params.s, inf}, f->profile),
                        {param("s", f->params.s), param("r", f->params.r), param("u", inf)}};
      } else {
        comb = combine_with_lf(target, inf, atoms);
      }
      if (!comb) continue;
      const Expr lf = ex::lfree(inf);
      std::vector<RewriteStep> steps;
      steps.push_back(strategy_step(RuleId::AbsorbLF,
                                    {param("direction", "split"), param("s", inf), param("r", inf),
                                     param("u", inf)},
                                    e, rebuild(ms, {i}, {sink_expr, lf})));
      const Expr e1 = canonicalize(steps.back().after);
      const auto& m1 = members(e1);
      steps.push_back(strategy_step(comb->rule, comb->params, e1,
                                    rebuild(m1, {index_of(m1, target), index_of(m1, lf)}, {comb->form})));
      return steps;
    }
  }
  return {};
}

}  // namespace

const std::vector<RuleSpec>& rule_catalog() { return kCatalog; }

const RuleSpec& rule_spec(RuleId id) { return kCatalog.at(static_cast<std::size_t>(id)); }

std::string_view rule_name(RuleId id) { return rule_spec(id).name; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const auto& r : kCatalog) {
    if (r.name == name) return r.id;
  }
  return std::nullopt;
}

std::vector<RuleId> default_priority() {
  return {RuleId::Profile,    RuleId::SepCollapse,  RuleId::IntForm,   RuleId::BaseLZ,
          RuleId::CornerDSum, RuleId::Tensor,       RuleId::DSumLF,    RuleId::DSumLZPow,
          RuleId::DSumExchange, RuleId::IFP,        RuleId::MultiAtom, RuleId::AbsorbLF,
          RuleId::AbsorbFdim, RuleId::AbsorbCornerInf, RuleId::Add,    RuleId::AtomThin,
          RuleId::DR00,       RuleId::Rescale};
}

std::optional<AtomProfile> ssa_profile(const Expr& e, const AtomTable& atoms) {
  if (const auto* a = e.get<node::AtomRef>()) {
    const AtomAttrs* attrs = atoms.find(a->name);
    if (!attrs || !attrs->self_symmetric) return std::nullopt;
    return AtomProfile::single(a->name);
  }
  const auto* d = e.get<node::DSum>();
  if (!d) return std::nullopt;
  std::vector<ProfileEntry> entries;
  for (const auto& term : d->terms) {
    if (term.expr.is<node::LZ>()) {
      entries.push_back({std::string(kLZName), term.weight});
    } else if (const auto* a = term.expr.get<node::AtomRef>()) {
      const AtomAttrs* attrs = atoms.find(a->name);
      if (!attrs || !attrs->self_symmetric) return std::nullopt;
      entries.push_back({a->name, term.weight});
    } else {
      return std::nullopt;
    }
  }
  try {
    AtomProfile p = normalize_profile(std::move(entries), atoms);
    if (!p.has_non_lz()) return std::nullopt;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<RewriteStep> apply_rule(RuleId rule, const Expr& e, const AtomTable& atoms) {
  auto m = dispatch(rule, e, atoms);
  if (!m) return std::nullopt;
  return RewriteStep{rule, std::move(m->params), e, std::move(m->after), {}, false};
}

std::vector<RewriteStep> apply_split_strategy(const Expr& e, const AtomTable& atoms) {
  if (!e.is<node::FreeProd>()) return {};
  auto steps = try_infinite_sink(e, atoms);
  if (steps.empty()) steps = try_lend_lf(e, atoms);
  if (steps.empty()) steps = try_unbase_lz(e, atoms);
  return steps;
}

}  // namespace vnfp
