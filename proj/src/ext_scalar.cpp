#include "vnfp/ext_scalar.hpp"

#include <cctype>
#include <ostream>
#include <utility>

namespace vnfp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UndefinedInfinityPattern: return "UndefinedInfinityPattern";
    case ErrorCode::NonPositiveExponent: return "NonPositiveExponent";
    case ErrorCode::FParamsOutOfDomain: return "FParamsOutOfDomain";
    case ErrorCode::WeightSumNotOne: return "WeightSumNotOne";
    case ErrorCode::LFreeIndexOutOfRange: return "LFreeIndexOutOfRange";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::MergeOnNonSelfSymmetric: return "MergeOnNonSelfSymmetric";
    case ErrorCode::NotSelfSymmetric: return "NotSelfSymmetric";
    case ErrorCode::AttributeConflict: return "AttributeConflict";
    case ErrorCode::InvalidExpression: return "InvalidExpression";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateAtomDecl: return "DuplicateAtomDecl";
    case ErrorCode::NotAFactorCertificate: return "NotAFactorCertificate";
    case ErrorCode::InadmissibleWitness: return "InadmissibleWitness";
    case ErrorCode::NotAFactorForm: return "NotAFactorForm";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void undefined(const std::string& what) {
  throw Error(ErrorCode::UndefinedInfinityPattern, "undefined extended arithmetic: " + what);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

ExtScalar::ExtScalar(long num, long den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  value_ = Rational(num, den);
  value_.canonicalize();
}

ExtScalar::ExtScalar(Rational value) : value_(std::move(value)) {
  if (sgn(value_.get_den()) == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  value_.canonicalize();
}

ExtScalar ExtScalar::infinity() {
  ExtScalar x;
  x.infinite_ = true;
  return x;
}

ExtScalar ExtScalar::parse(std::string_view text) {
  if (text == "inf") return infinity();
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorCode::InvalidExpression, "not a rational literal: '" + std::string(text) + "'");
  }
  BigInt n(std::string(num), 10);
  BigInt d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  return ExtScalar(Rational(n, d));
}

bool ExtScalar::is_integer() const noexcept {
  return !infinite_ && value_.get_den() == 1;
}

const Rational& ExtScalar::rational() const {
  if (infinite_) undefined("finite value of inf requested");
  return value_;
}

BigInt ExtScalar::numerator() const { return rational().get_num(); }
BigInt ExtScalar::denominator() const { return rational().get_den(); }

BigInt ExtScalar::floor() const {
  const Rational& q = rational();
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

std::string ExtScalar::str() const {
  if (infinite_) return "inf";
  return value_.get_str(10);
}

ExtScalar ExtScalar::operator-() const {
  if (infinite_) undefined("-inf");
  return ExtScalar(Rational(-value_));
}

ExtScalar operator+(const ExtScalar& a, const ExtScalar& b) {
  if (a.infinite_ || b.infinite_) return ExtScalar::infinity();
  return ExtScalar(Rational(a.value_ + b.value_));
}

ExtScalar operator-(const ExtScalar& a, const ExtScalar& b) {
  if (b.infinite_) undefined(a.infinite_ ? "inf - inf" : "x - inf");
  if (a.infinite_) return ExtScalar::infinity();
  return ExtScalar(Rational(a.value_ - b.value_));
}

ExtScalar operator*(const ExtScalar& a, const ExtScalar& b) {
  if (a.infinite_ || b.infinite_) {
    const ExtScalar& other = a.infinite_ ? b : a;
    if (other.is_zero()) undefined("0 * inf");
    if (other.is_negative()) undefined("negative * inf");
    return ExtScalar::infinity();
  }
  return ExtScalar(Rational(a.value_ * b.value_));
}

ExtScalar operator/(const ExtScalar& a, const ExtScalar& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (b.infinite_) undefined("x / inf");
  if (a.infinite_) {
    if (b.is_negative()) undefined("inf / negative");
    return ExtScalar::infinity();
  }
  return ExtScalar(Rational(a.value_ / b.value_));
}

bool operator==(const ExtScalar& a, const ExtScalar& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtScalar& a, const ExtScalar& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ == b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  const int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const ExtScalar& x) { return os << x.str(); }

ExtScalar ext_arith(const ExtScalar& a, const ExtScalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  return a;
}

ExtScalar min(const ExtScalar& a, const ExtScalar& b) { return b < a ? b : a; }
ExtScalar max(const ExtScalar& a, const ExtScalar& b) { return a < b ? b : a; }

}  // namespace vnfp
