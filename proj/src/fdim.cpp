#include "vnfp/fdim.hpp"

namespace vnfp {

namespace {

struct Copies {
  Expr base;
  ExtScalar count;
};

std::vector<Copies> expand_members(std::span<const Expr> members) {
  std::vector<Copies> out;
  for (const auto& m : members) {
    if (m.is<node::Trivial>()) continue;
    if (const auto* p = m.get<node::FreePow>()) {
      if (!p->base.is<node::Trivial>()) out.push_back({p->base, p->n});
    } else {
      out.push_back({m, ExtScalar(1)});
    }
  }
  return out;
}

std::vector<Expr> members_of(const Expr& e) {
  if (const auto* f = e.get<node::FreeProd>()) return f->factors;
  return {e};
}

void scale_into(SeparableClassView& acc, const SeparableClassView& v, const ExtScalar& w) {
  for (const auto& a : v.atomic_summands) acc.atomic_summands.push_back({a.weight * w, a.size});
  acc.diffuse_weight += v.diffuse_weight * w;
  for (const auto& l : v.lf_contributions) acc.lf_contributions.push_back({l.weight * w, l.r});
}

bool member_is_diffuse(const Expr& e) {
  if (e.is<node::FreeProd>() || e.is<node::FreePow>()) return is_factor_sufficient(e);
  auto v = separable_view(e);
  return v && v->is_diffuse();
}

bool is_two_point(const Expr& e, ExtScalar& t) {
  const auto* d = e.get<node::DSum>();
  if (!d || d->terms.size() != 2) return false;
  if (!d->terms[0].expr.is<node::Trivial>() || !d->terms[1].expr.is<node::Trivial>()) return false;
  t = max(d->terms[0].weight, d->terms[1].weight);
  return true;
}

bool matrix_pair_ok(const Expr& matrix, const Expr& other) {
  const auto* m = matrix.get<node::Matrix>();
  if (!m || m->k < 2) return false;
  auto v = separable_view(other);
  if (!v) return false;
  const ExtScalar k(m->k);
  const ExtScalar bound = ExtScalar(1) - ExtScalar(1) / (k * k);
  for (const auto& tr : v->minimal_projection_traces()) {
    if (!(tr < bound)) return false;
  }
  return true;
}

}  // namespace

ExtScalar SeparableClassView::fdim() const {
  ExtScalar out(1);
  for (const auto& a : atomic_summands) {
    const ExtScalar n(a.size);
    out -= a.weight * a.weight / (n * n);
  }
  for (const auto& l : lf_contributions) out += l.weight * l.weight * (l.r - ExtScalar(1));
  return out;
}

std::vector<ExtScalar> SeparableClassView::minimal_projection_traces() const {
  std::vector<ExtScalar> out;
  for (const auto& a : atomic_summands) out.push_back(a.weight / ExtScalar(a.size));
  return out;
}

std::optional<SeparableClassView> separable_view(const Expr& e) {
  SeparableClassView v;
  switch (e.kind()) {
    case ExprKind::Trivial:
      v.atomic_summands.push_back({ExtScalar(1), BigInt(1)});
      return v;
    case ExprKind::Matrix:
      v.atomic_summands.push_back({ExtScalar(1), e.get<node::Matrix>()->k});
      return v;
    case ExprKind::LZ:
    case ExprKind::Hyperfinite:
      v.diffuse_weight = 1;
      return v;
    case ExprKind::LFree:
      v.diffuse_weight = 1;
      v.lf_contributions.push_back({ExtScalar(1), e.get<node::LFree>()->r});
      return v;
    case ExprKind::TensorMatrix: {
      const auto* t = e.get<node::TensorMatrix>();
      auto inner = separable_view(t->base);
      if (!inner) return std::nullopt;
      const ExtScalar k(t->k);
      for (auto& a : inner->atomic_summands) a.size *= t->k;
      for (auto& l : inner->lf_contributions) l.r = ExtScalar(1) + (l.r - ExtScalar(1)) / (k * k);
      return inner;
    }
    case ExprKind::Compress: {
      const auto* c = e.get<node::Compress>();
      const auto* lf = c->base.get<node::LFree>();
      if (!lf) return std::nullopt;
      v.diffuse_weight = 1;
      v.lf_contributions.push_back(
          {ExtScalar(1), ExtScalar(1) + (lf->r - ExtScalar(1)) / (c->t * c->t)});
      return v;
    }
    case ExprKind::DSum:
      for (const auto& term : e.get<node::DSum>()->terms) {
        auto inner = separable_view(term.expr);
        if (!inner) return std::nullopt;
        scale_into(v, *inner, term.weight);
      }
      return v;
    case ExprKind::FreeProd:
    case ExprKind::FreePow: {
      if (!is_factor_sufficient(e)) return std::nullopt;
      auto f = fdim(e);
      if (!f || !(*f > ExtScalar(1))) return std::nullopt;
      v.diffuse_weight = 1;
      v.lf_contributions.push_back({ExtScalar(1), *f});
      return v;
    }
    default:
      return std::nullopt;
  }
}

std::optional<ExtScalar> fdim(const Expr& e) {
  if (const auto* f = e.get<node::FreeProd>()) {
    ExtScalar total(0);
    for (const auto& m : f->factors) {
      auto d = fdim(m);
      if (!d) return std::nullopt;
      total += *d;
    }
    return total;
  }
  if (const auto* p = e.get<node::FreePow>()) {
    auto d = fdim(p->base);
    if (!d) return std::nullopt;
    if (d->is_zero()) return ExtScalar(0);
    return *d * p->n;
  }
  auto v = separable_view(e);
  if (!v) return std::nullopt;
  return v->fdim();
}

bool is_factor_sufficient(std::span<const Expr> members) {
  const auto copies = expand_members(members);
  for (const auto& c : copies) {
    if (!in_separable_class(c.base)) return false;
  }
  ExtScalar count(0);
  for (const auto& c : copies) count += c.count;

  // (a)
  if (count >= ExtScalar(2)) {
    for (const auto& c : copies) {
      if (member_is_diffuse(c.base)) return true;
    }
  }
  // (b)
  if (copies.size() == 2 && count == ExtScalar(2)) {
    if (matrix_pair_ok(copies[0].base, copies[1].base) ||
        matrix_pair_ok(copies[1].base, copies[0].base)) {
      return true;
    }
  }
  if (copies.size() == 1 && copies[0].count == ExtScalar(2) &&
      matrix_pair_ok(copies[0].base, copies[0].base)) {
    return true;
  }
  // (c)
  if (!copies.empty() && count >= ExtScalar(3)) {
    ExtScalar t;
    if (!is_two_point(copies[0].base, t)) return false;
    for (const auto& c : copies) {
      if (!(c.base == copies[0].base)) return false;
    }
    if (count.is_infinite()) return true;
    return t < count / (count + ExtScalar(1));
  }
  return false;
}

bool is_factor_sufficient(const Expr& e) {
  const auto members = members_of(e);
  return is_factor_sufficient(std::span<const Expr>(members));
}

Expr collapse_separable(const Expr& e) {
  const auto members = members_of(e);
  if (!is_factor_sufficient(std::span<const Expr>(members))) {
    throw Error(ErrorCode::NotAFactorCertificate,
                "no sufficient factoriality condition holds for this free product");
  }
  auto total = fdim(e);
  if (!total || !(*total > ExtScalar(1))) {
    throw Error(ErrorCode::NotAFactorCertificate, "free dimension does not exceed 1");
  }
  return ex::lfree(*total);
}

}  // namespace vnfp
