#include "bgkit/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace bgkit {

namespace {

Integer parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("malformed integer literal");
  Integer value = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw std::invalid_argument("malformed rational literal: " + std::string(text));
    value = value * 10 + (c - '0');
  }
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(text.substr(0, slash));
    Integer q = parse_integer(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator in " + std::string(text));
    return Rational(p, q);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed decimal literal: " + std::string(text));
    bool negative = !digits.empty() && digits[0] == '-';
    Integer whole = (digits.empty() || digits == "-" || digits == "+") ? Integer(0) : parse_integer(digits);
    Integer scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    Rational f(parse_integer(frac), scale);
    return negative ? Rational(whole) - f : Rational(whole) + f;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double log_of(const Rational& q) {
  if (q <= 0) throw std::domain_error("log of nonpositive rational");
  auto log_int = [](const Integer& n) {
    // Shift big integers into double range before taking the log.
    std::size_t bits = boost::multiprecision::msb(n) + 1;
    if (bits <= 1000) return std::log(n.convert_to<double>());
    std::size_t shift = bits - 64;
    Integer top = n >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
  };
  return log_int(numerator(q)) - log_int(denominator(q));
}

Integer floor_of(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

Integer ceil_of(const Rational& q) {
  Integer f = floor_of(q);
  return Rational(f) == q ? f : Integer(f + 1);
}

Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace bgkit
