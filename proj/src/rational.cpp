#include "weaklie/rational.hpp"

#include <cmath>
#include <ostream>

namespace weaklie {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("rational overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("rational overflow");
  return out;
}

std::int64_t checked_neg(std::int64_t a) {
  if (a == INT64_MIN) throw std::overflow_error("rational overflow");
  return -a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = checked_neg(num);
    den = checked_neg(den);
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = checked_neg(num_);
  r.den_ = den_;
  return r;
}

Rational Rational::inverse() const {
  if (num_ == 0) throw std::domain_error("inverse of zero rational");
  return Rational(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == 1 && b.den_ == 1) return Rational(checked_add(a.num_, b.num_));
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t da = a.den_ / g;
  const std::int64_t db = b.den_ / g;
  return Rational(checked_add(checked_mul(a.num_, db), checked_mul(b.num_, da)), checked_mul(a.den_, db));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.num_ == 0 || b.num_ == 0) return Rational();
  // cross-reduce first to keep intermediates small
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(std::int64_t exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  Rational result(1);
  Rational base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

bool exact_integer_root(std::int64_t value, std::int64_t r, std::int64_t& out) {
  if (value < 0 || r <= 0) return false;
  if (value < 2) {
    out = value;
    return true;
  }
  auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(value), 1.0 / static_cast<double>(r))));
  for (std::int64_t c = std::max<std::int64_t>(guess - 1, 0); c <= guess + 1; ++c) {
    __int128 acc = 1;
    bool over = false;
    for (std::int64_t k = 0; k < r; ++k) {
      acc *= c;
      if (acc > value) {
        over = true;
        break;
      }
    }
    if (!over && acc == value) {
      out = c;
      return true;
    }
  }
  return false;
}

}  // namespace weaklie
