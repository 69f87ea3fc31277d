#include "vnfp/expr.hpp"

#include <algorithm>

namespace vnfp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Expr make(Payload p) { return Expr(std::make_shared<const Node>(Node{std::move(p)})); }

std::strong_ordering cmp_int(const BigInt& a, const BigInt& b) {
  const int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering cmp_profile(const AtomProfile& a, const AtomProfile& b) {
  const std::size_t n = std::min(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.entries[i].atom <=> b.entries[i].atom; c != 0) return c;
    if (auto c = a.entries[i].weight <=> b.entries[i].weight; c != 0) return c;
  }
  return a.entries.size() <=> b.entries.size();
}

std::strong_ordering cmp_params(const FParams& a, const FParams& b) {
  if (auto c = a.s <=> b.s; c != 0) return c;
  return a.r <=> b.r;
}

std::strong_ordering cmp_spec(const IFPSpec& a, const IFPSpec& b) {
  const std::size_t n = std::min(a.head.size(), b.head.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = cmp_params(a.head[i].params, b.head[i].params); c != 0) return c;
    if (auto c = cmp_profile(a.head[i].profile, b.head[i].profile); c != 0) return c;
  }
  if (auto c = a.head.size() <=> b.head.size(); c != 0) return c;
  if (auto c = cmp_profile(a.tail_profile, b.tail_profile); c != 0) return c;
  if (auto c = a.tail.kind <=> b.tail.kind; c != 0) return c;
  if (auto c = a.tail.a <=> b.tail.a; c != 0) return c;
  return a.tail.q <=> b.tail.q;
}

bool less_expr(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>(Node{node::Trivial{}})) {}

std::vector<Expr> Expr::children() const {
  return std::visit(
      overloaded{
          [](const node::DSum& d) {
            std::vector<Expr> out;
            out.reserve(d.terms.size());
            for (const auto& t : d.terms) out.push_back(t.expr);
            return out;
          },
          [](const node::FreeProd& f) { return f.factors; },
          [](const node::Compress& c) { return std::vector<Expr>{c.base}; },
          [](const node::TensorMatrix& t) { return std::vector<Expr>{t.base}; },
          [&](const node::FreePow& p) { return std::vector<Expr>{p.base}; },
          [](const auto&) { return std::vector<Expr>{}; },
      },
      node_->payload);
}

Expr Expr::with_children(const std::vector<Expr>& kids) const {
  return std::visit(
      overloaded{
          [&](const node::DSum& d) {
            node::DSum out = d;
            for (std::size_t i = 0; i < out.terms.size(); ++i) out.terms[i].expr = kids.at(i);
            return make(out);
          },
          [&](const node::FreeProd&) { return make(node::FreeProd{kids}); },
          [&](const node::Compress& c) { return make(node::Compress{kids.at(0), c.t}); },
          [&](const node::TensorMatrix& t) { return make(node::TensorMatrix{t.k, kids.at(0)}); },
          [&](const node::FreePow& p) { return make(node::FreePow{kids.at(0), p.n}); },
          [&](const auto&) { return *this; },
      },
      node_->payload);
}

ExtScalar tail_sum(const IFPTail& tail) {
  if (tail.kind == TailKind::Constant) return ExtScalar::infinity();
  return tail.a / (ExtScalar(1) - tail.q);
}

ExtScalar total_s(const IFPSpec& spec) {
  ExtScalar s = tail_sum(spec.tail);
  for (const auto& h : spec.head) s += h.params.s;
  return s;
}

namespace ex {
Expr atom(std::string name) { return make(node::AtomRef{std::move(name)}); }
Expr trivial() { return make(node::Trivial{}); }
Expr matrix(BigInt k) { return make(node::Matrix{std::move(k)}); }
Expr lz() { return make(node::LZ{}); }
Expr hyperfinite() { return make(node::Hyperfinite{}); }
Expr lfree(ExtScalar r) { return make(node::LFree{std::move(r)}); }
Expr fform(FParams params, AtomProfile profile) {
  return make(node::FForm{std::move(params), std::move(profile)});
}
Expr fform(ExtScalar s, ExtScalar r, std::string atom) {
  return fform(FParams{std::move(s), std::move(r)}, AtomProfile::single(std::move(atom)));
}
Expr dsum(std::vector<WeightedExpr> terms) { return make(node::DSum{std::move(terms)}); }
Expr free_prod(std::vector<Expr> factors) { return make(node::FreeProd{std::move(factors)}); }
Expr compress(Expr base, ExtScalar t) { return make(node::Compress{std::move(base), std::move(t)}); }
Expr tensor_matrix(BigInt k, Expr base) {
  return make(node::TensorMatrix{std::move(k), std::move(base)});
}
Expr free_pow(Expr base, ExtScalar n) { return make(node::FreePow{std::move(base), std::move(n)}); }
Expr inf_free_prod(IFPSpec spec) { return make(node::InfFreeProd{std::move(spec)}); }
}  // namespace ex

std::strong_ordering compare(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  return std::visit(
      overloaded{
          [&](const node::AtomRef& x) { return x.name <=> b.get<node::AtomRef>()->name; },
          [&](const node::Matrix& x) { return cmp_int(x.k, b.get<node::Matrix>()->k); },
          [&](const node::LFree& x) { return x.r <=> b.get<node::LFree>()->r; },
          [&](const node::FForm& x) {
            const auto* y = b.get<node::FForm>();
            if (auto c = cmp_params(x.params, y->params); c != 0) return c;
            return cmp_profile(x.profile, y->profile);
          },
          [&](const node::DSum& x) {
            const auto* y = b.get<node::DSum>();
            const std::size_t n = std::min(x.terms.size(), y->terms.size());
            for (std::size_t i = 0; i < n; ++i) {
              if (auto c = compare(x.terms[i].expr, y->terms[i].expr); c != 0) return c;
              if (auto c = x.terms[i].weight <=> y->terms[i].weight; c != 0) return c;
            }
            return x.terms.size() <=> y->terms.size();
          },
          [&](const node::FreeProd& x) {
            const auto* y = b.get<node::FreeProd>();
            const std::size_t n = std::min(x.factors.size(), y->factors.size());
            for (std::size_t i = 0; i < n; ++i) {
              if (auto c = compare(x.factors[i], y->factors[i]); c != 0) return c;
            }
            return x.factors.size() <=> y->factors.size();
          },
          [&](const node::Compress& x) {
            const auto* y = b.get<node::Compress>();
            if (auto c = compare(x.base, y->base); c != 0) return c;
            return x.t <=> y->t;
          },
          [&](const node::TensorMatrix& x) {
            const auto* y = b.get<node::TensorMatrix>();
            if (auto c = cmp_int(x.k, y->k); c != 0) return c;
            return compare(x.base, y->base);
          },
          [&](const node::FreePow& x) {
            const auto* y = b.get<node::FreePow>();
            if (auto c = compare(x.base, y->base); c != 0) return c;
            return x.n <=> y->n;
          },
          [&](const node::InfFreeProd& x) {
            return cmp_spec(x.spec, b.get<node::InfFreeProd>()->spec);
          },
          [](const auto&) { return std::strong_ordering::equal; },
      },
      a.node().payload);
}

bool expr_equal(const Expr& a, const Expr& b) {
  return compare(canonicalize(a), canonicalize(b)) == 0;
}

namespace {

bool same_ids(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id() != b[i].id()) return false;
  }
  return true;
}

Expr canon_free_prod(const Expr& self, const node::FreeProd& f) {
  std::vector<Expr> flat;
  for (const auto& child : f.factors) {
    const Expr c = canonicalize(child);
    if (const auto* inner = c.get<node::FreeProd>()) {
      flat.insert(flat.end(), inner->factors.begin(), inner->factors.end());
    } else if (!c.is<node::Trivial>()) {
      flat.push_back(c);
    }
  }
  if (flat.empty()) return ex::trivial();
  if (flat.size() == 1) return flat.front();
  std::sort(flat.begin(), flat.end(), less_expr);
  if (same_ids(flat, f.factors)) return self;
  return ex::free_prod(std::move(flat));
}

Expr canon_dsum(const Expr& self, const node::DSum& d) {
  std::vector<WeightedExpr> flat;
  for (const auto& term : d.terms) {
    const Expr c = canonicalize(term.expr);
    if (const auto* inner = c.get<node::DSum>()) {
      for (const auto& t : inner->terms) flat.push_back({term.weight * t.weight, t.expr});
    } else {
      flat.push_back({term.weight, c});
    }
  }
  if (flat.size() == 1 && flat.front().weight == ExtScalar(1)) return flat.front().expr;
  std::sort(flat.begin(), flat.end(), [](const WeightedExpr& x, const WeightedExpr& y) {
    if (auto c = compare(x.expr, y.expr); c != 0) return c < 0;
    return x.weight < y.weight;
  });
  if (flat.size() == d.terms.size()) {
    bool same = true;
    for (std::size_t i = 0; i < flat.size() && same; ++i) {
      same = flat[i].expr.id() == d.terms[i].expr.id() && flat[i].weight == d.terms[i].weight;
    }
    if (same) return self;
  }
  return ex::dsum(std::move(flat));
}

}  // namespace

Expr canonicalize(const Expr& e) {
  return std::visit(
      overloaded{
          [&](const node::FreeProd& f) { return canon_free_prod(e, f); },
          [&](const node::DSum& d) { return canon_dsum(e, d); },
          [&](const node::Compress& c) {
            Expr base = canonicalize(c.base);
            ExtScalar t = c.t;
            while (const auto* inner = base.get<node::Compress>()) {
              t = inner->t * t;
              base = inner->base;
            }
            if (t == ExtScalar(1)) return base;
            if (base.id() == c.base.id() && t == c.t) return e;
            return ex::compress(base, t);
          },
          [&](const node::TensorMatrix& tm) {
            Expr base = canonicalize(tm.base);
            BigInt k = tm.k;
            while (const auto* inner = base.get<node::TensorMatrix>()) {
              k *= inner->k;
              base = inner->base;
            }
            if (base.is<node::Trivial>()) return ex::matrix(k);
            if (k == 1) return base;
            if (base.id() == tm.base.id() && k == tm.k) return e;
            return ex::tensor_matrix(k, base);
          },
          [&](const node::FreePow& p) {
            Expr base = canonicalize(p.base);
            ExtScalar n = p.n;
            while (const auto* inner = base.get<node::FreePow>()) {
              n = n * inner->n;
              base = inner->base;
            }
            if (base.is<node::Trivial>()) return base;
            if (n == ExtScalar(1)) return base;
            if (base.id() == p.base.id() && n == p.n) return e;
            return ex::free_pow(base, n);
          },
          [&](const auto&) { return e; },
      },
      e.node().payload);
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& c : e.children()) n += node_count(c);
  return n;
}

Expr subterm_at(const Expr& root, std::span<const std::size_t> path) {
  Expr cur = root;
  for (std::size_t i : path) {
    auto kids = cur.children();
    if (i >= kids.size()) throw Error(ErrorCode::InvalidExpression, "path out of range");
    cur = kids[i];
  }
  return cur;
}

Expr replace_at(const Expr& root, std::span<const std::size_t> path, const Expr& replacement) {
  if (path.empty()) return replacement;
  auto kids = root.children();
  if (path.front() >= kids.size()) throw Error(ErrorCode::InvalidExpression, "path out of range");
  kids[path.front()] = replace_at(kids[path.front()], path.subspan(1), replacement);
  return root.with_children(kids);
}

}  // namespace vnfp
