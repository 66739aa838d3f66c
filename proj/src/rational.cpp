#include "pairlab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace pairlab {

std::string to_string(const Rational& x) {
  const auto num = boost::multiprecision::numerator(x);
  const auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("bad integer: " + std::string(text));
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') throw std::invalid_argument("bad integer: " + std::string(text));
  }
  BigInt value(std::string(text.substr(start)));
  return text[0] == '-' ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(text.substr(0, slash)));
    BigInt den = parse_integer(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view digits = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (digits.empty()) return Rational(negative ? BigInt(-parse_integer(whole)) : parse_integer(whole));
    BigInt scale = 1;
    for (std::size_t i = 0; i < digits.size(); ++i) scale *= 10;
    Rational value = Rational(parse_integer(whole)) + Rational(parse_integer(digits), scale);
    return negative ? Rational(-value) : value;
  }
  return Rational(parse_integer(text));
}

Rational nearest_rational(double x, std::int64_t max_den) {
  if (max_den < 1) throw std::invalid_argument("max_den must be positive");
  std::int64_t best_num = std::llround(x);
  std::int64_t best_den = 1;
  double best_err = std::abs(x - static_cast<double>(best_num));
  for (std::int64_t den = 2; den <= max_den; ++den) {
    auto num = std::llround(x * static_cast<double>(den));
    double err = std::abs(x - static_cast<double>(num) / static_cast<double>(den));
    if (err < best_err - 1e-15) {
      best_err = err;
      best_num = num;
      best_den = den;
    }
  }
  return Rational(best_num, best_den);
}

}  // namespace pairlab
