#ifndef SCOPQ_RATIONAL_HPP
#define SCOPQ_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scopq {

// Exact fraction used for count-based weights and probabilities. Keeps the
// numerator/denominator as constructed (20/408 prints as 20/408, the form
// the count tables use); equality and ordering compare values. All counts in
// this library are small, so int64 arithmetic is plenty.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  static Rational integer(std::int64_t n) { return Rational(n, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  Rational normalized() const {
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g <= 1) return *this;
    return Rational(num_ / g, den_ / g);
  }

  Rational operator*(const Rational& o) const {
    const Rational a = normalized();
    const Rational b = o.normalized();
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_).normalized();
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_).normalized();
  }

  bool operator==(const Rational& o) const { return num_ * o.den_ == o.num_ * den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator<=(const Rational& o) const { return num_ * o.den_ <= o.num_ * den_; }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace scopq

#endif
