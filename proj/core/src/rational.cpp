#include "rankload/rational.hpp"

#include <charconv>
#include <numeric>

#include "rankload/errors.hpp"

namespace rankload {

namespace {

bool parse_i64(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw InvalidArgument("rational denominator is zero");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t n = 0, d = 0;
    if (!parse_i64(text.substr(0, slash), n) || !parse_i64(text.substr(slash + 1), d) || d == 0) {
      return std::nullopt;
    }
    return Rational(n, d);
  }
  const std::size_t dot = text.find('.');
  if (dot == std::string_view::npos) {
    std::int64_t v = 0;
    if (!parse_i64(text, v)) return std::nullopt;
    return Rational(v);
  }
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  if (frac_part.empty() || frac_part.size() > 17) return std::nullopt;
  bool negative = false;
  if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
    negative = int_part.front() == '-';
    int_part.remove_prefix(1);
  }
  std::int64_t whole = 0;
  if (!int_part.empty() && !parse_i64(int_part, whole)) return std::nullopt;
  std::int64_t frac = 0;
  if (!parse_i64(frac_part, frac) || frac < 0) return std::nullopt;
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  std::int64_t num = whole * scale + frac;
  if (negative) num = -num;
  return Rational(num, scale);
}

std::string Rational::str() const {
  // Find the smallest power of ten divisible by den_, if one exists.
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  const int scale = twos > fives ? twos : fives;
  std::int64_t pow10 = 1;
  for (int i = 0; i < scale; ++i) pow10 *= 10;
  const std::int64_t magnitude = (num_ < 0 ? -num_ : num_) * (pow10 / den_);
  const std::int64_t whole = magnitude / pow10;
  std::int64_t frac = magnitude % pow10;
  std::string out = num_ < 0 ? "-" : "";
  out += std::to_string(whole);
  if (frac != 0) {
    std::string digits(static_cast<std::size_t>(scale), '0');
    for (int i = scale - 1; i >= 0 && frac != 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + frac % 10);
      frac /= 10;
    }
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += ".";
    out += digits;
  }
  return out;
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& other) {
  num_ = num_ * other.den_ + other.num_ * den_;
  den_ = den_ * other.den_;
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& other) { return *this += -other; }

Rational operator*(const Rational& lhs, const Rational& rhs) {
  return Rational(lhs.num_ * rhs.num_, lhs.den_ * rhs.den_);
}

Rational operator/(const Rational& lhs, const Rational& rhs) {
  if (rhs.num_ == 0) throw InvalidArgument("rational division by zero");
  return Rational(lhs.num_ * rhs.den_, lhs.den_ * rhs.num_);
}

bool operator<(const Rational& lhs, const Rational& rhs) {
  return static_cast<__int128>(lhs.num_) * rhs.den_ < static_cast<__int128>(rhs.num_) * lhs.den_;
}

}  // namespace rankload
