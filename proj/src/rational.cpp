#include "credal/rational.hpp"

#include <cctype>

namespace credal {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-')
    throw CredalError(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
  mpz_class d = parse_integer(den);
  if (d == 0) throw CredalError(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational r(parse_integer(num), d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const bool negative = value < 0;
  Rational magnitude = abs(value) * scale;
  // round half away from zero
  mpz_class scaled = (magnitude.get_num() * 2 + magnitude.get_den()) / (magnitude.get_den() * 2);
  std::string body = scaled.get_str();
  if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
  std::string out = negative && scaled != 0 ? "-" : "";
  out += body.substr(0, body.size() - digits);
  if (digits > 0) out += "." + body.substr(body.size() - digits);
  return out;
}

Rational pow2(long exponent) {
  mpz_class p = 1;
  if (exponent >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return Rational(mpz_class(1), p);
}

long bits_below(const Rational& value) {
  if (value <= 0) throw CredalError(ErrorKind::Precondition, "bits_below needs a positive value");
  // start near log2(1/value) and adjust
  long b = static_cast<long>(mpz_sizeinbase(value.get_den().get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(value.get_num().get_mpz_t(), 2)) - 2;
  while (pow2(-b) > value) ++b;
  while (pow2(-(b - 1)) <= value) --b;
  return b;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

}  // namespace credal
