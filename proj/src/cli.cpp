#include "vnfp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "vnfp/dsl.hpp"
#include "vnfp/fdim.hpp"
#include "vnfp/iso.hpp"
#include "vnfp/selftest.hpp"
#include "vnfp/trace_json.hpp"
#include "vnfp/validate.hpp"

namespace vnfp {

namespace {

struct Flags {
  bool trace = false;
  bool json = false;
  std::string atoms_file;
};

struct Loaded {
  std::string text;
  SourceProgram program;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidExpression, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A path to an existing file is read; anything else is program text.
std::string source_text(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

AtomTable prelude(const Flags& flags) {
  if (flags.atoms_file.empty()) return AtomTable{};
  return parse_declarations(read_file(flags.atoms_file));
}

Loaded load(const std::string& arg, const AtomTable& pre) {
  Loaded l;
  l.text = source_text(arg);
  l.program = parse(l.text, pre);
  if (!l.program.has_body) throw SyntaxError(1, 1, "program has declarations but no expression");
  return l;
}

void print_trace(std::ostream& out, const NormalizeResult& r) {
  for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
    const RewriteStep& s = r.trace.steps[i];
    out << "[" << i << "] " << rule_name(s.rule) << (s.strategy ? " (strategy)" : "") << ": "
        << render(s.before) << "  =>  " << render(s.after) << "\n";
  }
}

int cmd_normalize(const std::string& arg, const Flags& flags, std::ostream& out) {
  const Loaded l = load(arg, prelude(flags));
  const Expr e = validate_expr(l.program.body, l.program.atoms);
  const NormalizeResult r = normalize(e, l.program.atoms);
  if (flags.json) {
    out << normalize_document(l.text, r, flags.trace) << "\n";
    return kExitOk;
  }
  if (flags.trace) print_trace(out, r);
  out << describe(r.form) << "\n";
  return kExitOk;
}

std::string rank_text(const std::optional<ExtScalar>& r) { return r ? r->str() : "n/a"; }

int cmd_iso(const std::string& a, const std::string& b, const Flags& flags, std::ostream& out) {
  const AtomTable pre = prelude(flags);
  const Loaded la = load(a, pre);
  const Loaded lb = load(b, pre);
  AtomTable atoms = la.program.atoms;
  atoms.merge(lb.program.atoms);
  const Expr e1 = validate_expr(la.program.body, atoms);
  const Expr e2 = validate_expr(lb.program.body, atoms);
  const IsoVerdict v = check_iso(e1, e2, atoms);
  if (flags.json) {
    out << iso_document(la.text, lb.text, v, flags.trace) << "\n";
    return kExitOk;
  }
  if (flags.trace) {
    out << "left:\n";
    print_trace(out, v.left);
    out << "  " << describe(v.left.form) << "\nright:\n";
    print_trace(out, v.right);
    out << "  " << describe(v.right.form) << "\n";
  }
  switch (v.kind) {
    case IsoKind::Isomorphic:
      out << "isomorphic\n";
      break;
    case IsoKind::NonIsomorphic:
      out << "non-isomorphic (sans-rank " << rank_text(v.left_rank) << " vs " << rank_text(v.right_rank) << ")\n";
      break;
    case IsoKind::Unknown:
      out << "unknown: " << to_string(v.reason) << "\n";
      break;
  }
  return kExitOk;
}

int cmd_fg(const std::string& arg, const Flags& flags, std::ostream& out) {
  const Loaded l = load(arg, prelude(flags));
  const Expr e = validate_expr(l.program.body, l.program.atoms);
  const FGVerdict v = fundamental_group(e, l.program.atoms);
  if (flags.json) {
    out << fg_document(l.text, v, flags.trace) << "\n";
    return kExitOk;
  }
  if (flags.trace) {
    print_trace(out, v.result);
    out << "  " << describe(v.result.form) << "\n";
  }
  if (v.kind == FGKind::Unknown) {
    out << "unknown: not determined for " << render(v.result.form.expr) << "\n";
  } else {
    out << to_string(v.kind) << "\n";
  }
  return kExitOk;
}

int cmd_fdim(const std::string& arg, const Flags& flags, std::ostream& out) {
  const Loaded l = load(arg, prelude(flags));
  const Expr e = validate_expr(l.program.body, l.program.atoms);
  const auto d = fdim(e);
  if (flags.json) {
    out << fdim_document(l.text, d) << "\n";
  } else {
    out << (d ? d->str() : "not applicable") << "\n";
  }
  return kExitOk;
}

int report_error(const Error& e, std::ostream& err) {
  err << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
  if (e.code() == ErrorCode::UnknownAtom) {
    err << "hint: declare it inline, e.g. \"atom A {abelian, diffuse, nonseparable}; ...\", or pass --atoms <file>\n";
  }
  if (is_parse_error(e.code())) return kExitParse;
  if (e.code() == ErrorCode::NotAFactorForm) return kExitNotAFactorForm;
  return kExitValidation;
}

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_flag("--trace", flags.trace, "Print the rewrite steps");
  cmd->add_flag("--json", flags.json, "Emit a TraceDocument as JSON");
  cmd->add_option("--atoms", flags.atoms_file, "File with atom declarations")->check(CLI::ExistingFile);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalizer for F_{s,r} free product expressions", "vnfp"};
  app.require_subcommand(1);
  Flags flags;
  std::string first;
  std::string second;
  std::uint64_t seed = 42;
  std::size_t cases = 2000;

  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize an expression");
  normalize_cmd->add_option("expr", first, "Expression text or file")->required();
  add_common(normalize_cmd, flags);

  auto* iso_cmd = app.add_subcommand("iso", "Decide isomorphism of two expressions");
  iso_cmd->add_option("left", first, "Expression text or file")->required();
  iso_cmd->add_option("right", second, "Expression text or file")->required();
  add_common(iso_cmd, flags);

  auto* fg_cmd = app.add_subcommand("fg", "Fundamental group of an expression");
  fg_cmd->add_option("expr", first, "Expression text or file")->required();
  add_common(fg_cmd, flags);

  auto* fdim_cmd = app.add_subcommand("fdim", "Free dimension of a separable-class expression");
  fdim_cmd->add_option("expr", first, "Expression text or file")->required();
  add_common(fdim_cmd, flags);

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the seeded property suites");
  selftest_cmd->add_option("--seed", seed, "Random seed");
  selftest_cmd->add_option("--cases", cases, "Cases per randomized suite")->check(CLI::PositiveNumber);

  std::vector<const char*> argv{"vnfp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (normalize_cmd->parsed()) return cmd_normalize(first, flags, out);
    if (iso_cmd->parsed()) return cmd_iso(first, second, flags, out);
    if (fg_cmd->parsed()) return cmd_fg(first, flags, out);
    if (fdim_cmd->parsed()) return cmd_fdim(first, flags, out);
    const SelftestReport report = run_selftest(seed, cases);
    out << report.text();
    return report.ok() ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace vnfp
