#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rankload {

// Exact rational number. Workload values are small ratios of small integers
// (k * 60 / period), and keeping them exact lets Pareto dominance and budget
// accounting compare with zero tolerance.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);           // throws InvalidArgument on den == 0

  // Accepts "6", "-3", "1.5", "0.25" and "7/2".
  static std::optional<Rational> parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Exact decimal ("1.5", "2.4") when the reduced denominator has only
  // factors 2 and 5, otherwise "num/den".
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(const Rational& lhs, const Rational& rhs);
  friend Rational operator/(const Rational& lhs, const Rational& rhs);

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
  }
  friend bool operator!=(const Rational& lhs, const Rational& rhs) { return !(lhs == rhs); }
  friend bool operator<(const Rational& lhs, const Rational& rhs);
  friend bool operator>(const Rational& lhs, const Rational& rhs) { return rhs < lhs; }
  friend bool operator<=(const Rational& lhs, const Rational& rhs) { return !(rhs < lhs); }
  friend bool operator>=(const Rational& lhs, const Rational& rhs) { return !(lhs < rhs); }

private:
  void normalize();

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace rankload
