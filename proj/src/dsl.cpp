#include "vnfp/dsl.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <sstream>

#include "vnfp/validate.hpp"

namespace vnfp {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

constexpr std::array<std::string_view, 14> kReserved = {
    "atom", "C", "LZ", "R", "M", "LF", "F", "dsum", "tensorM", "fpow", "ifp", "inf", "const", "geom"};

bool is_reserved(std::string_view word) {
  for (auto r : kReserved) {
    if (r == word) return true;
  }
  return false;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Int, std::string(text.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::string_view("(){}[],;:*^/=-").find(static_cast<char>(c)) !=
               std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, static_cast<char>(c)), line, col});
      advance(1);
    } else {
      throw SyntaxError(line, col, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
public:
  Parser(std::string_view text, AtomTable atoms) : toks_(lex(text)), atoms_(std::move(atoms)) {}

  SourceProgram program(bool allow_body) {
    while (peek_ident("atom")) {
      declaration();
      expect(";");
    }
    SourceProgram out;
    if (peek().kind != Tok::End) {
      if (!allow_body) fail(peek(), "expected an atom declaration");
      out.body = expr();
      out.has_body = true;
      accept(";");
      if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "' after expression");
    }
    out.atoms = std::move(atoms_);
    return out;
  }

private:
  static constexpr int kMaxDepth = 400;

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  AtomTable atoms_;
  int depth_ = 0;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail(p.peek(), "expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw SyntaxError(t.line, t.column, msg);
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  }

  bool peek_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool peek_ident(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  bool accept(std::string_view p) {
    if (!peek_punct(p)) return false;
    next();
    return true;
  }

  void expect(std::string_view p) {
    if (!accept(p)) fail(peek(), "expected '" + std::string(p) + "', found " + describe(peek()));
  }

  BigInt integer() {
    const Token& t = peek();
    if (t.kind != Tok::Int) fail(t, "expected an integer, found " + describe(t));
    next();
    return BigInt(t.text);
  }

  ExtScalar rational() {
    const bool negative = accept("-");
    BigInt num = integer();
    BigInt den = 1;
    if (accept("/")) {
      const Token& dt = peek();
      den = integer();
      if (den == 0) fail(dt, "zero denominator");
    }
    Rational q(negative ? BigInt(-num) : num, den);
    q.canonicalize();
    return ExtScalar(q);
  }

  ExtScalar rational_or_inf() {
    if (peek_ident("inf")) {
      next();
      return ExtScalar::infinity();
    }
    return rational();
  }

  void declaration() {
    next();  // "atom"
    const Token& name = peek();
    if (name.kind != Tok::Ident) fail(name, "expected an atom name, found " + describe(name));
    if (is_reserved(name.text)) fail(name, "'" + name.text + "' is a reserved word");
    next();
    expect("{");
    AtomAttrs attrs;
    bool seen_sep = false;
    do {
      const Token& a = peek();
      if (a.kind != Tok::Ident) fail(a, "expected an attribute, found " + describe(a));
      next();
      if (a.text == "abelian") {
        attrs.abelian = true;
      } else if (a.text == "diffuse") {
        attrs.diffuse = true;
      } else if (a.text == "separable" || a.text == "nonseparable") {
        const Separability s =
            a.text == "separable" ? Separability::Separable : Separability::Nonseparable;
        if (seen_sep && attrs.separability != s) {
          fail(a, "atom declared both separable and nonseparable");
        }
        seen_sep = true;
        attrs.separability = s;
      } else if (a.text == "selfsym") {
        attrs.self_symmetric = true;
      } else if (a.text == "mass") {
        expect("=");
        attrs.ns_mass = rational();
      } else {
        fail(a, "unknown attribute '" + a.text + "'");
      }
    } while (accept(","));
    expect("}");
    try {
      atoms_.declare(name.text, attrs);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DuplicateAtomDecl) throw;
      throw Error(e.code(), "line " + std::to_string(name.line) + ": " + e.what());
    }
  }

  Expr expr() {
    DepthGuard guard(*this);
    std::vector<Expr> factors{power()};
    while (accept("*")) factors.push_back(power());
    if (factors.size() == 1) return factors.front();
    return ex::free_prod(std::move(factors));
  }

  Expr power() {
    Expr b = base();
    if (accept("^")) {
      expect("(");
      ExtScalar t = rational();
      expect(")");
      b = ex::compress(std::move(b), std::move(t));
    }
    return b;
  }

  Expr base() {
    DepthGuard guard(*this);
    const Token& t = peek();
    if (accept("(")) {
      Expr inner = expr();
      expect(")");
      return inner;
    }
    if (t.kind != Tok::Ident) fail(t, "expected an expression, found " + describe(t));
    next();
    const std::string& w = t.text;
    if (w == "C") return ex::trivial();
    if (w == "LZ") return ex::lz();
    if (w == "R") return ex::hyperfinite();
    if (w == "M") {
      expect("(");
      BigInt k = integer();
      expect(")");
      return ex::matrix(std::move(k));
    }
    if (w == "LF") {
      expect("(");
      ExtScalar r = rational_or_inf();
      expect(")");
      return ex::lfree(std::move(r));
    }
    if (w == "F") return fform_tail(t);
    if (w == "dsum") {
      expect("(");
      std::vector<WeightedExpr> terms;
      do {
        ExtScalar weight = rational();
        expect(":");
        terms.push_back({std::move(weight), expr()});
      } while (accept(","));
      expect(")");
      return ex::dsum(std::move(terms));
    }
    if (w == "tensorM") {
      expect("(");
      BigInt k = integer();
      expect(",");
      Expr b = expr();
      expect(")");
      return ex::tensor_matrix(std::move(k), std::move(b));
    }
    if (w == "fpow") {
      expect("(");
      Expr b = expr();
      expect(",");
      ExtScalar n = peek_ident("inf") ? (next(), ExtScalar::infinity()) : ExtScalar(integer());
      expect(")");
      return ex::free_pow(std::move(b), std::move(n));
    }
    if (w == "ifp") return ifp();
    if (is_reserved(w)) fail(t, "unexpected keyword '" + w + "'");
    return ex::atom(w);
  }

  /// After the "F" keyword.
  Expr fform_tail(const Token& kw) {
    expect("(");
    ExtScalar s = rational_or_inf();
    expect(",");
    ExtScalar r = rational_or_inf();
    AtomProfile profile;
    if (accept(";")) {
      const Token& at = peek();
      profile = to_profile(expr(), at);
    } else {
      auto users = atoms_.user_atoms();
      if (users.size() != 1) {
        fail(kw, "F without a profile needs exactly one declared atom (found " +
                     std::to_string(users.size()) + ")");
      }
      profile = AtomProfile::single(users.front());
    }
    expect(")");
    return ex::fform(FParams{std::move(s), std::move(r)}, std::move(profile));
  }

  void collect_profile(const Expr& e, const ExtScalar& scale, std::vector<ProfileEntry>& out,
                       const Token& at) const {
    if (const auto* a = e.get<node::AtomRef>()) {
      out.push_back({a->name, scale});
    } else if (e.is<node::LZ>()) {
      out.push_back({std::string(kLZName), scale});
    } else if (const auto* d = e.get<node::DSum>()) {
      for (const auto& term : d->terms) collect_profile(term.expr, scale * term.weight, out, at);
    } else {
      fail(at, "an F profile must be an atom or a direct sum of atoms");
    }
  }

  AtomProfile to_profile(const Expr& e, const Token& at) const {
    AtomProfile p;
    collect_profile(e, ExtScalar(1), p.entries, at);
    return p;
  }

  Expr ifp() {
    expect("(");
    expect("[");
    IFPSpec spec;
    if (!peek_punct("]")) {
      do {
        const Token& ft = peek();
        if (!peek_ident("F")) fail(ft, "expected an F(...) head term, found " + describe(ft));
        next();
        Expr f = fform_tail(ft);
        const auto* ff = f.get<node::FForm>();
        spec.head.push_back({ff->params, ff->profile});
      } while (accept(","));
    }
    expect("]");
    expect(",");
    const Token& pt = peek();
    spec.tail_profile = to_profile(expr(), pt);
    expect(",");
    const Token& tt = peek();
    if (peek_ident("const")) {
      next();
      expect("(");
      spec.tail = IFPTail{TailKind::Constant, rational(), ExtScalar(0)};
      expect(")");
    } else if (peek_ident("geom")) {
      next();
      expect("(");
      ExtScalar a = rational();
      expect(",");
      ExtScalar q = rational();
      expect(")");
      spec.tail = IFPTail{TailKind::Geometric, std::move(a), std::move(q)};
    } else {
      fail(tt, "expected const(...) or geom(...), found " + describe(tt));
    }
    expect(")");
    return ex::inf_free_prod(std::move(spec));
  }
};

void render_to(std::ostream& os, const Expr& e);

void render_profile(std::ostream& os, const AtomProfile& p) {
  if (p.entries.size() == 1 && p.entries.front().weight == ExtScalar(1)) {
    os << p.entries.front().atom;
    return;
  }
  os << "dsum(";
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    if (i) os << ", ";
    os << p.entries[i].weight << ": " << p.entries[i].atom;
  }
  os << ')';
}

void render_fform(std::ostream& os, const FParams& params, const AtomProfile& profile) {
  os << "F(" << params.s << ", " << params.r << "; ";
  render_profile(os, profile);
  os << ')';
}

void render_to(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::AtomRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, node::Trivial>) {
          os << 'C';
        } else if constexpr (std::is_same_v<T, node::Matrix>) {
          os << "M(" << n.k.get_str() << ')';
        } else if constexpr (std::is_same_v<T, node::LZ>) {
          os << "LZ";
        } else if constexpr (std::is_same_v<T, node::Hyperfinite>) {
          os << 'R';
        } else if constexpr (std::is_same_v<T, node::LFree>) {
          os << "LF(" << n.r << ')';
        } else if constexpr (std::is_same_v<T, node::FForm>) {
          render_fform(os, n.params, n.profile);
        } else if constexpr (std::is_same_v<T, node::DSum>) {
          os << "dsum(";
          for (std::size_t i = 0; i < n.terms.size(); ++i) {
            if (i) os << ", ";
            os << n.terms[i].weight << ": ";
            render_to(os, n.terms[i].expr);
          }
          os << ')';
        } else if constexpr (std::is_same_v<T, node::FreeProd>) {
          for (std::size_t i = 0; i < n.factors.size(); ++i) {
            if (i) os << " * ";
            const bool paren = n.factors[i].template is<node::FreeProd>();
            if (paren) os << '(';
            render_to(os, n.factors[i]);
            if (paren) os << ')';
          }
        } else if constexpr (std::is_same_v<T, node::Compress>) {
          const bool paren = n.base.template is<node::FreeProd>() || n.base.template is<node::Compress>();
          if (paren) os << '(';
          render_to(os, n.base);
          if (paren) os << ')';
          os << "^(" << n.t << ')';
        } else if constexpr (std::is_same_v<T, node::TensorMatrix>) {
          os << "tensorM(" << n.k.get_str() << ", ";
          render_to(os, n.base);
          os << ')';
        } else if constexpr (std::is_same_v<T, node::FreePow>) {
          os << "fpow(";
          render_to(os, n.base);
          os << ", " << n.n << ')';
        } else if constexpr (std::is_same_v<T, node::InfFreeProd>) {
          os << "ifp([";
          for (std::size_t i = 0; i < n.spec.head.size(); ++i) {
            if (i) os << ", ";
            render_fform(os, n.spec.head[i].params, n.spec.head[i].profile);
          }
          os << "], ";
          render_profile(os, n.spec.tail_profile);
          if (n.spec.tail.kind == TailKind::Constant) {
            os << ", const(" << n.spec.tail.a << "))";
          } else {
            os << ", geom(" << n.spec.tail.a << ", " << n.spec.tail.q << "))";
          }
        }
      },
      e.node().payload);
}

}  // namespace

SourceProgram parse(std::string_view text, const AtomTable& prelude) {
  return Parser(text, prelude).program(true);
}

AtomTable parse_declarations(std::string_view text, const AtomTable& prelude) {
  return Parser(text, prelude).program(false).atoms;
}

Expr parse_validated(std::string_view text, const AtomTable& prelude) {
  SourceProgram prog = parse(text, prelude);
  if (!prog.has_body) throw SyntaxError(1, 1, "program has no expression");
  return validate_expr(prog.body, prog.atoms);
}

std::string render(const Expr& e) {
  std::ostringstream os;
  render_to(os, e);
  return os.str();
}

std::string render(const AtomProfile& profile) {
  std::ostringstream os;
  render_profile(os, profile);
  return os.str();
}

std::string render(const FParams& params, const AtomProfile& profile) {
  std::ostringstream os;
  render_fform(os, params, profile);
  return os.str();
}

}  // namespace vnfp
