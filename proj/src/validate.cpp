#include "vnfp/validate.hpp"

namespace vnfp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

AtomProfile checked_profile(const AtomProfile& raw, const AtomTable& atoms) {
  AtomProfile p = normalize_profile(raw.entries, atoms);
  for (const auto& e : p.entries) {
    if (!atoms.at(e.atom).self_symmetric) {
      throw Error(ErrorCode::NotSelfSymmetric,
                  "atom '" + e.atom + "' in an F profile must be self-symmetric");
    }
  }
  return p;
}

void check_positive_count(const BigInt& k, const char* what) {
  if (k < 1) throw Error(ErrorCode::InvalidExpression, std::string(what) + " size must be positive");
}

Expr check(const Expr& e, const AtomTable& atoms) {
  return std::visit(
      overloaded{
          [&](const node::AtomRef& a) {
            const AtomAttrs& attrs = atoms.at(a.name);
            if (a.name == kLZName || is_lz_like(attrs)) return ex::lz();
            return e;
          },
          [&](const node::Matrix& m) {
            check_positive_count(m.k, "matrix");
            return m.k == 1 ? ex::trivial() : e;
          },
          [&](const node::LFree& f) {
            if (!(f.r > ExtScalar(1))) {
              throw Error(ErrorCode::LFreeIndexOutOfRange,
                          "LF index must exceed 1 (or be inf), got " + f.r.str());
            }
            return e;
          },
          [&](const node::FForm& f) {
            require_param_domain(f.params);
            return ex::fform(f.params, checked_profile(f.profile, atoms));
          },
          [&](const node::DSum& d) {
            ExtScalar total(0);
            std::vector<WeightedExpr> terms;
            for (const auto& t : d.terms) {
              if (t.weight.is_infinite() || !t.weight.is_positive() || !(t.weight < ExtScalar(1))) {
                throw Error(ErrorCode::WeightSumNotOne,
                            "direct-sum weight " + t.weight.str() + " outside (0, 1)");
              }
              total += t.weight;
              terms.push_back({t.weight, check(t.expr, atoms)});
            }
            if (total != ExtScalar(1)) {
              throw Error(ErrorCode::WeightSumNotOne, "direct-sum weights sum to " + total.str());
            }
            return ex::dsum(std::move(terms));
          },
          [&](const node::FreeProd& f) {
            std::vector<Expr> kids;
            for (const auto& c : f.factors) kids.push_back(check(c, atoms));
            return ex::free_prod(std::move(kids));
          },
          [&](const node::Compress& c) {
            if (c.t.is_infinite() || !c.t.is_positive()) {
              throw Error(ErrorCode::NonPositiveExponent,
                          "compression exponent must be a finite positive rational, got " + c.t.str());
            }
            return ex::compress(check(c.base, atoms), c.t);
          },
          [&](const node::TensorMatrix& t) {
            check_positive_count(t.k, "tensor matrix");
            return ex::tensor_matrix(t.k, check(t.base, atoms));
          },
          [&](const node::FreePow& p) {
            if (!(p.n.is_infinite() || (p.n.is_integer() && p.n >= ExtScalar(1)))) {
              throw Error(ErrorCode::InvalidExpression,
                          "free power must be a positive integer or inf, got " + p.n.str());
            }
            return ex::free_pow(check(p.base, atoms), p.n);
          },
          [&](const node::InfFreeProd& f) {
            IFPSpec spec = f.spec;
            for (auto& h : spec.head) {
              require_param_domain(h.params, "infinite free product head term");
              h.profile = checked_profile(h.profile, atoms);
            }
            spec.tail_profile = checked_profile(spec.tail_profile, atoms);
            const IFPTail& tail = spec.tail;
            if (tail.a.is_infinite() || !tail.a.is_positive()) {
              throw Error(ErrorCode::InvalidExpression, "tail s must be a finite positive rational");
            }
            if (tail.kind == TailKind::Geometric &&
                !(tail.q.is_positive() && tail.q < ExtScalar(1))) {
              throw Error(ErrorCode::InvalidExpression, "geometric ratio must lie in (0, 1)");
            }
            return ex::inf_free_prod(std::move(spec));
          },
          [&](const auto&) { return e; },
      },
      e.node().payload);
}

}  // namespace

Expr validate_expr(const Expr& e, const AtomTable& atoms) {
  return canonicalize(check(e, atoms));
}

}  // namespace vnfp
