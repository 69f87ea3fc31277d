#include "vnfp/normalizer.hpp"

#include <unordered_set>

#include "vnfp/dsl.hpp"
#include "vnfp/fdim.hpp"
#include "vnfp/validate.hpp"

namespace vnfp {

namespace {

BigInt weight_of(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::InfFreeProd:
      return 3;
    case ExprKind::DSum:
    case ExprKind::FreeProd: {
      BigInt w = 1;
      for (const auto& c : e.children()) w += weight_of(c);
      return w;
    }
    case ExprKind::FreePow:
    case ExprKind::TensorMatrix:
      return weight_of(e.children().front()) + 1;
    case ExprKind::Compress: {
      const BigInt w = weight_of(e.children().front());
      return w * w;
    }
    default:
      return 2;
  }
}

void accumulate(const Expr& e, Measure& m) {
  if (const auto* d = e.get<node::DSum>()) {
    long non_c = 0;
    for (const auto& term : d->terms) non_c += term.expr.is<node::Trivial>() ? 0 : 1;
    m.spread += BigInt(non_c * non_c);
  } else if (const auto* f = e.get<node::FForm>()) {
    if (f->profile.contains(kLZName)) m.lz_entries += 1;
    if (f->params.r.is_finite()) m.finite_r_forms += 1;
    m.profile_entries += static_cast<unsigned long>(f->profile.entries.size());
  } else if (e.is<node::AtomRef>()) {
    m.atom_refs += 1;
  }
  for (const auto& c : e.children()) accumulate(c, m);
}

struct Engine {
  const AtomTable& atoms;
  const NormalizeOptions& options;
  std::unordered_set<const Node*> normal;
  std::vector<Expr> keep_alive;

  void mark_normal(const Expr& e) {
    if (normal.insert(e.id()).second) keep_alive.push_back(e);
  }

  std::vector<RewriteStep> at_node(const Expr& e) {
    for (RuleId id : options.priority) {
      if (auto step = apply_rule(id, e, atoms)) return {std::move(*step)};
    }
    return apply_split_strategy(e, atoms);
  }

  /// First redex in post-order, as the steps of one move.
  std::vector<RewriteStep> find(const Expr& e, std::vector<std::size_t>& path) {
    if (normal.count(e.id())) return {};
    const auto kids = e.children();
    for (std::size_t i = 0; i < kids.size(); ++i) {
      path.push_back(i);
      auto steps = find(kids[i], path);
      path.pop_back();
      if (!steps.empty()) return steps;
    }
    auto steps = at_node(e);
    if (steps.empty()) {
      mark_normal(e);
    } else {
      for (auto& s : steps) s.path = path;
    }
    return steps;
  }
};

Expr apply_step(const Expr& cur, const RewriteStep& step, Expr* placed = nullptr) {
  const Expr here = subterm_at(cur, step.path);
  if (!(here == step.before)) {
    throw Error(ErrorCode::InvalidExpression, "step " + std::string(rule_name(step.rule)) + " expects " +
                                                  render(step.before) + " but the current subterm is " +
                                                  render(here));
  }
  const Expr node = canonicalize(step.after);
  if (placed) *placed = node;
  return canonicalize(replace_at(cur, step.path, node));
}

bool locate(const Expr& e, const Node* target, std::vector<std::size_t>& path) {
  if (e.id() == target) return true;
  const auto kids = e.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    if (locate(kids[i], target, path)) return true;
    path.pop_back();
  }
  return false;
}

bool is_atomic_piece(const Expr& e) {
  if (e.is<node::AtomRef>()) return true;
  const auto* d = e.get<node::DSum>();
  if (!d) return false;
  for (const auto& term : d->terms) {
    if (!term.expr.is<node::AtomRef>() && !term.expr.is<node::LZ>() && !term.expr.is<node::Trivial>()) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(FormKind kind) {
  switch (kind) {
    case FormKind::FForm: return "fform";
    case FormKind::IFGF: return "ifgf";
    case FormKind::Separable: return "separable";
    case FormKind::Residual: return "residual";
  }
  return "residual";
}

std::string_view to_string(ResidualReason reason) {
  switch (reason) {
    case ResidualReason::NotAFactor: return "not-a-factor";
    case ResidualReason::NoApplicableRule: return "no-applicable-rule";
  }
  return "no-applicable-rule";
}

std::strong_ordering operator<=>(const Measure& a, const Measure& b) {
  auto order = [](const BigInt& x, const BigInt& y) {
    const int c = cmp(x, y);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  };
  if (auto c = order(a.weight, b.weight); c != 0) return c;
  if (auto c = order(a.spread, b.spread); c != 0) return c;
  if (auto c = order(a.lz_entries, b.lz_entries); c != 0) return c;
  if (auto c = order(a.atom_refs, b.atom_refs); c != 0) return c;
  if (auto c = order(a.finite_r_forms, b.finite_r_forms); c != 0) return c;
  return order(a.profile_entries, b.profile_entries);
}

Measure measure(const Expr& e) {
  Measure m{weight_of(e), 0, 0, 0, 0, 0};
  accumulate(e, m);
  return m;
}

CanonicalForm classify(const Expr& terminal) {
  CanonicalForm out;
  out.expr = terminal;
  if (const auto* f = terminal.get<node::FForm>()) {
    out.kind = FormKind::FForm;
    out.params = f->params;
    out.profile = f->profile;
  } else if (const auto* lf = terminal.get<node::LFree>()) {
    out.kind = FormKind::IFGF;
    out.r = lf->r;
  } else if (auto d = fdim(terminal)) {
    out.kind = FormKind::Separable;
    out.fdim = d;
  } else {
    out.kind = FormKind::Residual;
    out.reason = is_atomic_piece(terminal) ? ResidualReason::NotAFactor : ResidualReason::NoApplicableRule;
  }
  return out;
}

NormalizeResult normalize(const Expr& e, const AtomTable& atoms, const NormalizeOptions& options) {
  Engine engine{atoms, options, {}, {}};
  ProofTrace trace;
  trace.input = canonicalize(e);
  Expr cur = trace.input;
  Measure last = options.check_measure ? measure(cur) : Measure{};
  for (;;) {
    std::vector<std::size_t> path;
    auto steps = engine.find(cur, path);
    if (steps.empty()) break;
    Expr placed;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      RewriteStep& step = steps[k];
      if (k > 0) {
        // Canonicalizing the whole tree may reorder siblings along the path.
        step.path.clear();
        if (!locate(cur, placed.id(), step.path)) {
          throw Error(ErrorCode::InvalidExpression, "lost the subterm of a multi-step move");
        }
      }
      cur = apply_step(cur, step, &placed);
      trace.steps.push_back(std::move(step));
    }
    if (options.check_measure) {
      Measure next = measure(cur);
      if (!(next < last)) {
        throw Error(ErrorCode::InvalidExpression,
                    "termination measure did not decrease after " +
                        std::string(rule_name(trace.steps.back().rule)) + " at " + render(cur));
      }
      last = std::move(next);
    }
  }
  trace.terminal = cur;
  return {classify(cur), std::move(trace)};
}

Expr replay(const ProofTrace& trace, const AtomTable& atoms) {
  Expr cur = trace.input;
  for (const auto& step : trace.steps) {
    if (!step.strategy) {
      auto again = apply_rule(step.rule, step.before, atoms);
      if (!again || !(again->after == step.after) || again->params != step.params) {
        throw Error(ErrorCode::InvalidExpression,
                    "step " + std::string(rule_name(step.rule)) + " does not reproduce from " +
                        render(step.before));
      }
    }
    cur = apply_step(cur, step);
  }
  if (!(cur == trace.terminal)) {
    throw Error(ErrorCode::InvalidExpression, "replay ends at " + render(cur) + ", trace ends at " +
                                                  render(trace.terminal));
  }
  return cur;
}

bool check_welldefined(const FParams& p, const BigInt& n1, const BigInt& n2) {
  AtomTable atoms;
  AtomAttrs a;
  a.abelian = true;
  a.diffuse = true;
  a.separability = Separability::Nonseparable;
  atoms.declare("A", complete_attrs(a));

  auto realize = [&](const BigInt& n) -> std::optional<FParams> {
    const Expansion x = expand_with(p, n);
    const Expr copies = n == 1 ? ex::atom("A") : ex::free_pow(ex::atom("A"), ExtScalar(n));
    const Expr e = ex::compress(ex::free_prod({copies, ex::lfree(x.lf_index)}), x.exponent);
    const NormalizeResult res = normalize(validate_expr(e, atoms), atoms);
    if (res.form.kind != FormKind::FForm) return std::nullopt;
    return res.form.params;
  };
  const auto a1 = realize(n1);
  const auto a2 = realize(n2);
  return a1 && a2 && *a1 == *a2;
}

}  // namespace vnfp
