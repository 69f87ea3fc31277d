#include "vnfp/trace_json.hpp"

#include "json.hpp"
#include "vnfp/dsl.hpp"

namespace vnfp {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kIndent = 2;

Json profile_json(const AtomProfile& p) {
  Json out = Json::array();
  for (const auto& en : p.entries) out.push_back({{"atom", en.atom}, {"weight", en.weight.str()}});
  return out;
}

Json terminal_json(const CanonicalForm& f) {
  Json out;
  out["kind"] = to_string(f.kind);
  out["text"] = render(f.expr);
  switch (f.kind) {
    case FormKind::FForm:
      out["s"] = f.params.s.str();
      out["r"] = f.params.r.str();
      out["profile"] = profile_json(f.profile);
      break;
    case FormKind::IFGF:
      out["r"] = f.r.str();
      break;
    case FormKind::Separable:
      out["fdim"] = f.fdim->str();
      break;
    case FormKind::Residual:
      out["reason"] = to_string(f.reason);
      break;
  }
  return out;
}

Json step_json(const RewriteStep& s, std::size_t index) {
  Json params = Json::object();
  for (const auto& p : s.params) params[p.name] = p.value;
  return {{"index", index},
          {"rule_id", rule_name(s.rule)},
          {"citation", rule_spec(s.rule).citation},
          {"params", params},
          {"path", s.path},
          {"strategy", s.strategy},
          {"before", render(s.before)},
          {"after", render(s.after)}};
}

Json trace_json(std::string_view input, const NormalizeResult& r, bool with_steps) {
  Json out;
  out["input"] = input;
  if (with_steps) {
    Json steps = Json::array();
    for (std::size_t i = 0; i < r.trace.steps.size(); ++i) steps.push_back(step_json(r.trace.steps[i], i));
    out["steps"] = steps;
  }
  out["step_count"] = r.trace.step_count();
  out["terminal"] = terminal_json(r.form);
  return out;
}

std::string dump(const Json& j) { return j.dump(kIndent); }

}  // namespace

std::string describe(const CanonicalForm& form) {
  switch (form.kind) {
    case FormKind::FForm:
    case FormKind::IFGF:
      return render(form.expr);
    case FormKind::Separable:
      return render(form.expr) + "  [separable, fdim " + form.fdim->str() + "]";
    case FormKind::Residual:
      return render(form.expr) + "  [residual: " + std::string(to_string(form.reason)) + "]";
  }
  return render(form.expr);
}

std::string normalize_document(std::string_view input, const NormalizeResult& result, bool with_steps) {
  Json out;
  out["command"] = "normalize";
  out.update(trace_json(input, result, with_steps));
  return dump(out);
}

std::string iso_document(std::string_view input1, std::string_view input2, const IsoVerdict& v,
                         bool with_steps) {
  Json verdict;
  verdict["kind"] = to_string(v.kind);
  if (v.kind == IsoKind::Unknown) verdict["reason"] = to_string(v.reason);
  verdict["left_rank"] = v.left_rank ? Json(v.left_rank->str()) : Json(nullptr);
  verdict["right_rank"] = v.right_rank ? Json(v.right_rank->str()) : Json(nullptr);
  Json out;
  out["command"] = "iso";
  out["input"] = Json::array({input1, input2});
  out["traces"] = Json::array({trace_json(input1, v.left, with_steps), trace_json(input2, v.right, with_steps)});
  out["verdict"] = verdict;
  return dump(out);
}

std::string fg_document(std::string_view input, const FGVerdict& v, bool with_steps) {
  Json out;
  out["command"] = "fg";
  out.update(trace_json(input, v.result, with_steps));
  out["verdict"] = {{"kind", to_string(v.kind)}};
  return dump(out);
}

std::string fdim_document(std::string_view input, const std::optional<ExtScalar>& value) {
  Json out;
  out["command"] = "fdim";
  out["input"] = input;
  out["fdim"] = value ? Json(value->str()) : Json(nullptr);
  return dump(out);
}

}  // namespace vnfp
