#pragma once

/**
 * Expression trees over tracial von Neumann algebras.
 *
 * Expr is an immutable, cheaply copyable handle. The canonical shape used by
 * the rest of the engine is produced by canonicalize(): free products are
 * flattened n-ary and sorted, trivial free factors dropped, nested direct sums
 * multiplied through and sorted, nested compressions folded.
 */

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vnfp/atoms.hpp"
#include "vnfp/params.hpp"

namespace vnfp {

struct Node;

enum class ExprKind {
  Atom,
  Trivial,
  Matrix,
  LZ,
  Hyperfinite,
  LFree,
  FForm,
  DSum,
  FreeProd,
  Compress,
  TensorMatrix,
  FreePow,
  InfFreeProd,
};

class Expr {
public:
  Expr();  // Trivial
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  ExprKind kind() const;
  const Node& node() const { return *node_; }
  /// Node identity; canonicalize() returns an input that is already
  /// canonical unchanged, so identity survives normalization passes.
  const Node* id() const { return node_.get(); }

  template <class T>
  const T* get() const;

  template <class T>
  bool is() const {
    return get<T>() != nullptr;
  }

  /// Direct subexpressions in positional order (the order paths index into).
  std::vector<Expr> children() const;
  /// Same node with its subexpressions replaced positionally.
  Expr with_children(const std::vector<Expr>& kids) const;

private:
  std::shared_ptr<const Node> node_;
};

struct WeightedExpr {
  ExtScalar weight;
  Expr expr;
};

struct IFPHead {
  FParams params;
  AtomProfile profile;
};

enum class TailKind { Constant, Geometric };

/// Tail s_i for i = 0, 1, 2, ...: Constant gives s_i = a, Geometric gives
/// s_i = a * q^i. Every tail term has r_i = inf.
struct IFPTail {
  TailKind kind = TailKind::Constant;
  ExtScalar a{1};
  ExtScalar q{0};
};

struct IFPSpec {
  std::vector<IFPHead> head;
  AtomProfile tail_profile;
  IFPTail tail;
};

/// Sum of the tail s_i: inf for a constant tail, a / (1 - q) for a geometric one.
ExtScalar tail_sum(const IFPTail& tail);
ExtScalar total_s(const IFPSpec& spec);

namespace node {
struct AtomRef { std::string name; };
struct Trivial {};
struct Matrix { BigInt k; };
struct LZ {};
struct Hyperfinite {};
struct LFree { ExtScalar r; };
struct FForm { FParams params; AtomProfile profile; };
struct DSum { std::vector<WeightedExpr> terms; };
struct FreeProd { std::vector<Expr> factors; };
struct Compress { Expr base; ExtScalar t; };
struct TensorMatrix { BigInt k; Expr base; };
struct FreePow { Expr base; ExtScalar n; };
struct InfFreeProd { IFPSpec spec; };
}  // namespace node

using Payload = std::variant<node::AtomRef, node::Trivial, node::Matrix, node::LZ,
                             node::Hyperfinite, node::LFree, node::FForm, node::DSum,
                             node::FreeProd, node::Compress, node::TensorMatrix,
                             node::FreePow, node::InfFreeProd>;

struct Node {
  Payload payload;
};

inline ExprKind Expr::kind() const { return static_cast<ExprKind>(node_->payload.index()); }

template <class T>
const T* Expr::get() const {
  return std::get_if<T>(&node_->payload);
}

/// Builders. They do not validate; see validate_expr().
namespace ex {
Expr atom(std::string name);
Expr trivial();
Expr matrix(BigInt k);
Expr lz();
Expr hyperfinite();
Expr lfree(ExtScalar r);
Expr fform(FParams params, AtomProfile profile);
Expr fform(ExtScalar s, ExtScalar r, std::string atom);
Expr dsum(std::vector<WeightedExpr> terms);
Expr free_prod(std::vector<Expr> factors);
Expr compress(Expr base, ExtScalar t);
Expr tensor_matrix(BigInt k, Expr base);
Expr free_pow(Expr base, ExtScalar n);
Expr inf_free_prod(IFPSpec spec);
}  // namespace ex

/// Total structural order; free-product and direct-sum operands are compared
/// positionally, so compare canonical trees for order-insensitive results.
std::strong_ordering compare(const Expr& a, const Expr& b);

/// Equality up to reordering of free-product and direct-sum operands.
bool expr_equal(const Expr& a, const Expr& b);

inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

Expr canonicalize(const Expr& e);

std::size_t node_count(const Expr& e);

Expr subterm_at(const Expr& root, std::span<const std::size_t> path);
Expr replace_at(const Expr& root, std::span<const std::size_t> path, const Expr& replacement);

}  // namespace vnfp
