#pragma once

/**
 * Text format for atom declarations and expressions.
 *
 *   program := { decl ";" } [ expr [";"] ]
 *   decl    := "atom" IDENT "{" attr { "," attr } "}"
 *   attr    := abelian | diffuse | separable | nonseparable | selfsym | mass "=" RATIONAL
 *   expr    := power { "*" power }
 *   power   := base [ "^" "(" RATIONAL ")" ]
 *   base    := IDENT | C | LZ | R | M(INT) | LF(RATIONAL|inf)
 *            | F(RATIONAL|inf, RATIONAL|inf [; expr]) | dsum(RATIONAL: expr, ...)
 *            | tensorM(INT, expr) | fpow(expr, INT|inf) | ifp(ifpspec) | "(" expr ")"
 *   ifpspec := "[" [ F(...) { "," F(...) } ] "]" "," expr "," ( const(RATIONAL) | geom(RATIONAL, RATIONAL) )
 *
 * "#" starts a comment that runs to the end of the line.
 */

#include <string>
#include <string_view>

#include "vnfp/expr.hpp"

namespace vnfp {

struct SourceProgram {
  AtomTable atoms;
  Expr body;
  bool has_body = false;
};

/// Parses a program. Declarations are added on top of `prelude`; redeclaring
/// a prelude atom is a DuplicateAtomDecl error. The body is not validated.
/// Throws SyntaxError, DuplicateAtomDecl and attribute errors.
SourceProgram parse(std::string_view text, const AtomTable& prelude = AtomTable{});

/// Declarations only (no body allowed), as used for --atoms files.
AtomTable parse_declarations(std::string_view text, const AtomTable& prelude = AtomTable{});

/// Parses, then validates the body against the resulting atom table.
/// Throws SyntaxError when the program has no body.
Expr parse_validated(std::string_view text, const AtomTable& prelude = AtomTable{});

std::string render(const Expr& e);
std::string render(const AtomProfile& profile);
std::string render(const FParams& params, const AtomProfile& profile);

}  // namespace vnfp
