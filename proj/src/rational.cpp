#include "entrex/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace entrex {

namespace {

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == '_') {
      continue;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E')
      throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    ++i;
    const char* first = s.data() + i;
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr != last)
      throw std::invalid_argument("bad exponent in '" + std::string(s) + "'");
  }
  const int scale = exponent - frac_digits;
  Rational r = scale >= 0 ? Rational(digits * pow10(scale))
                          : Rational(digits, pow10(-scale));
  return negative ? Rational(-r) : r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  const Rational num = parse_decimal(trim(s.substr(0, slash)));
  const Rational den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::invalid_argument("cannot format double");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  using boost::multiprecision::abs;
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (a == 0) return abs(b);
  if (b == 0) return abs(a);
  const BigInt an = abs(numerator(a)), ad = denominator(a);
  const BigInt bn = abs(numerator(b)), bd = denominator(b);
  // gcd(an/ad, bn/bd) = gcd(an*bd, bn*ad) / (ad*bd)
  return Rational(boost::multiprecision::gcd(BigInt(an * bd), BigInt(bn * ad)),
                  BigInt(ad * bd));
}

}  // namespace entrex
