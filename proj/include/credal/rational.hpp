#pragma once

#include <gmpxx.h>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace credal {

/// Exact rational number. GMP keeps every value canonical (lowest terms,
/// positive denominator) as long as construction goes through the helpers
/// below.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  Parse,
  Validation,
  GbrUndefined,
  SizeCap,
  EngineMismatch,
  Precondition,
};

class CredalError : public std::runtime_error {
 public:
  CredalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parses "num/den", "num" or a signed integer; accepts non-lowest terms.
/// Throws CredalError(Parse) on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Lowest-terms text, "num/den" or "num" when the denominator is one.
std::string to_string(const Rational& value);

/// Decimal expansion with `digits` digits after the point, rounded to
/// nearest with ties away from zero.
std::string to_decimal(const Rational& value, int digits = 40);

Rational pow2(long exponent);

/// Smallest integer b with 2^-b <= value (value > 0).
long bits_below(const Rational& value);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace credal
