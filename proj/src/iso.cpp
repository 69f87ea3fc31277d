#include "vnfp/iso.hpp"

namespace vnfp {

namespace {

bool all_abelian(const AtomProfile& p, const AtomTable& atoms) {
  for (const auto& en : p.entries) {
    const AtomAttrs* a = atoms.find(en.atom);
    if (!a || !a->abelian) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(IsoKind kind) {
  switch (kind) {
    case IsoKind::Isomorphic: return "isomorphic";
    case IsoKind::NonIsomorphic: return "non-isomorphic";
    case IsoKind::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(UnknownReason reason) {
  switch (reason) {
    case UnknownReason::ResidualForm: return "residual form";
    case UnknownReason::SeparableOpen: return "separable case, free group factor problem open";
    case UnknownReason::EqualRankOpen: return "equal sans-rank, open";
    case UnknownReason::RankNotApplicable: return "sans-rank not applicable";
  }
  return "residual form";
}

std::string_view to_string(FGKind kind) {
  switch (kind) {
    case FGKind::Trivial: return "trivial";
    case FGKind::AllPositiveReals: return "R_+^*";
    case FGKind::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<ExtScalar> sans_rank(const CanonicalForm& form, const AtomTable& atoms) {
  switch (form.kind) {
    case FormKind::IFGF:
    case FormKind::Separable:
      return ExtScalar(0);
    case FormKind::Residual:
      return std::nullopt;
    case FormKind::FForm:
      break;
  }
  if (!all_abelian(form.profile, atoms)) return std::nullopt;
  auto mass = profile_ns_mass(form.profile, atoms);
  if (!mass) return std::nullopt;
  if (mass->is_zero()) return ExtScalar(0);
  return form.params.s * *mass;
}

IsoVerdict check_iso(const Expr& e1, const Expr& e2, const AtomTable& atoms) {
  IsoVerdict v;
  v.left = normalize(e1, atoms);
  v.right = normalize(e2, atoms);
  v.left_rank = sans_rank(v.left.form, atoms);
  v.right_rank = sans_rank(v.right.form, atoms);
  if (v.left.trace.terminal == v.right.trace.terminal) {
    v.kind = IsoKind::Isomorphic;
    return v;
  }
  const bool residual =
      v.left.form.kind == FormKind::Residual || v.right.form.kind == FormKind::Residual;
  if (residual) {
    v.reason = UnknownReason::ResidualForm;
  } else if (!v.left_rank || !v.right_rank) {
    v.reason = UnknownReason::RankNotApplicable;
  } else if (*v.left_rank != *v.right_rank) {
    v.kind = IsoKind::NonIsomorphic;
    return v;
  } else {
    v.reason = v.left_rank->is_zero() ? UnknownReason::SeparableOpen : UnknownReason::EqualRankOpen;
  }
  v.kind = IsoKind::Unknown;
  return v;
}

FGVerdict fundamental_group(const Expr& e, const AtomTable& atoms) {
  FGVerdict v;
  v.result = normalize(e, atoms);
  const CanonicalForm& f = v.result.form;
  switch (f.kind) {
    case FormKind::Residual:
    case FormKind::Separable:
      throw Error(ErrorCode::NotAFactorForm, "expression normalizes to " + std::string(to_string(f.kind)) +
                                                 ", not a factor form");
    case FormKind::IFGF:
      v.kind = f.r.is_infinite() ? FGKind::AllPositiveReals : FGKind::Unknown;
      return v;
    case FormKind::FForm:
      break;
  }
  if (f.params.s.is_infinite()) {
    v.kind = FGKind::AllPositiveReals;
    return v;
  }
  auto mass = profile_ns_mass(f.profile, atoms);
  v.kind = all_abelian(f.profile, atoms) && mass && mass->is_positive() ? FGKind::Trivial : FGKind::Unknown;
  return v;
}

}  // namespace vnfp
