#include "randctl/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace randctl {

std::string format_rational(const Rational& r) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool neg = false;
  if (text.front() == '+' || text.front() == '-') {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d{std::string(den)};
    if (d == 0) return std::nullopt;
    value = Rational(BigInt(std::string(num)), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt n = BigInt(std::string(whole)) * scale + BigInt(std::string(frac));
    value = Rational(n, scale);
  } else {
    if (!all_digits(text)) return std::nullopt;
    value = Rational(BigInt(std::string(text)));
  }
  if (neg) value = -value;
  return value;
}

std::string decimal_string(const Rational& r, int digits) {
  if (digits < 0) digits = 0;
  bool neg = r < 0;
  Rational a = neg ? Rational(-r) : r;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round(|r| * 10^digits), half away from zero
  BigInt n = numerator(a) * scale;
  BigInt d = denominator(a);
  BigInt q = (2 * n + d) / (2 * d);
  std::string s = q.str();
  std::string out;
  if (digits == 0) {
    out = s;
  } else {
    if (s.size() <= static_cast<size_t>(digits))
      s.insert(0, static_cast<size_t>(digits) + 1 - s.size(), '0');
    out = s.substr(0, s.size() - digits) + "." + s.substr(s.size() - digits);
  }
  if (neg && q != 0) out.insert(0, 1, '-');
  return out;
}

}  // namespace randctl
