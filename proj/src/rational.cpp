#include "tropembed/rational.hpp"

#include <cctype>
#include <numeric>

#include "tropembed/errors.hpp"

namespace tropembed {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) {
      throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
    }
    BigInt d = parse_integer(den);
    if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(parse_integer(num), d);
  }
  if (is_integer_literal(text)) return Rational(parse_integer(text));

  // exact decimal
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (!frac.empty() && is_integer_literal(frac) && frac[0] != '-' && frac[0] != '+' &&
        (digits.empty() || digits == "-" || digits == "+" || is_integer_literal(digits))) {
      bool negative = !digits.empty() && digits[0] == '-';
      if (digits.empty() || digits == "-" || digits == "+") digits += "0";
      BigInt whole = parse_integer(digits);
      if (whole < 0) whole = -whole;
      BigInt scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational r(whole * scale + BigInt(frac), scale);
      return negative ? Rational(-r) : r;
    }
  }
  throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
}

std::string format_rational(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

int sign(const Rational& value) { return value.sign(); }

BigInt floor(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil(const Rational& value) {
  BigInt f = floor(value);
  return Rational(f) == value ? f : BigInt(f + 1);
}

long floor_log2(const Rational& value) {
  // msb of num/den up to one step, then correct exactly
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  long k = static_cast<long>(boost::multiprecision::msb(num)) -
           static_cast<long>(boost::multiprecision::msb(den));
  while (pow2(k) > value) --k;
  while (pow2(k + 1) <= value) ++k;
  return k;
}

Rational pow2(long exponent) {
  BigInt one = 1;
  if (exponent >= 0) return Rational(BigInt(one << static_cast<unsigned>(exponent)));
  return Rational(one, BigInt(one << static_cast<unsigned>(-exponent)));
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept { return std::gcd(a, b); }

}  // namespace tropembed
