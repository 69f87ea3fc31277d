#pragma once

/**
 * Exact extended rationals: a reduced rational p/q (q > 0) or +inf.
 *
 * Every parameter the engine touches (s, r, t, weights, traces) is an
 * ExtScalar. Arithmetic never rounds. Patterns that would leave the
 * non-negative extended reals or that are indeterminate (inf - inf, 0 * inf,
 * x / inf, negative * inf) throw instead of being given a value.
 */

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include "vnfp/errors.hpp"

namespace vnfp {

using BigInt = mpz_class;
using Rational = mpq_class;

class ExtScalar {
public:
  ExtScalar() = default;
  ExtScalar(long value) : value_(value) {}  // NOLINT: integers convert implicitly
  ExtScalar(long num, long den);
  explicit ExtScalar(const BigInt& value) : value_(value) {}
  explicit ExtScalar(Rational value);

  static ExtScalar infinity();

  /// Accepts "p", "-p", "p/q", "-p/q" and "inf".
  static ExtScalar parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  bool is_zero() const noexcept { return !infinite_ && sgn(value_) == 0; }
  bool is_positive() const noexcept { return infinite_ || sgn(value_) > 0; }
  bool is_negative() const noexcept { return !infinite_ && sgn(value_) < 0; }
  bool is_integer() const noexcept;

  /// Finite value; throws UndefinedInfinityPattern on +inf.
  const Rational& rational() const;
  BigInt numerator() const;
  BigInt denominator() const;
  BigInt floor() const;

  /// "p/q", "p" when q == 1, or "inf".
  std::string str() const;

  ExtScalar operator-() const;

  friend ExtScalar operator+(const ExtScalar& a, const ExtScalar& b);
  friend ExtScalar operator-(const ExtScalar& a, const ExtScalar& b);
  friend ExtScalar operator*(const ExtScalar& a, const ExtScalar& b);
  friend ExtScalar operator/(const ExtScalar& a, const ExtScalar& b);

  ExtScalar& operator+=(const ExtScalar& b) { return *this = *this + b; }
  ExtScalar& operator-=(const ExtScalar& b) { return *this = *this - b; }
  ExtScalar& operator*=(const ExtScalar& b) { return *this = *this * b; }
  ExtScalar& operator/=(const ExtScalar& b) { return *this = *this / b; }

  friend bool operator==(const ExtScalar& a, const ExtScalar& b);
  friend std::strong_ordering operator<=>(const ExtScalar& a, const ExtScalar& b);

private:
  Rational value_{0};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtScalar& x);

enum class ArithOp { Add, Sub, Mul, Div };

/// Dispatching form of the four operators.
ExtScalar ext_arith(const ExtScalar& a, const ExtScalar& b, ArithOp op);

ExtScalar min(const ExtScalar& a, const ExtScalar& b);
ExtScalar max(const ExtScalar& a, const ExtScalar& b);

}  // namespace vnfp
