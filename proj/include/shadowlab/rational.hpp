#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shadowlab {

// Exact rational with 128-bit integer storage, used for the channel
// eigenvalues a_lambda = d_lambda^H / d_lambda.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }
  static Rational integer(long long n) { return Rational(n, 1); }

  long long num() const { return clamp64(num_); }
  long long den() const { return clamp64(den_); }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool is_zero() const { return num_ == 0; }

  Rational inverse() const {
    if (num_ == 0) throw std::domain_error("Rational: inverse of zero");
    Rational r;
    r.num_ = den_;
    r.den_ = num_;
    r.normalize();
    return r;
  }

  Rational operator*(const Rational& o) const {
    Rational r;
    r.num_ = num_ * o.num_;
    r.den_ = den_ * o.den_;
    r.normalize();
    return r;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num());
    return std::to_string(num()) + "/" + std::to_string(den());
  }

 private:
  static long long clamp64(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational: does not fit in 64 bits");
    return static_cast<long long>(v);
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    __int128 a = num_ < 0 ? -num_ : num_;
    __int128 b = den_;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num_ /= a;
      den_ /= a;
    }
    if (num_ == 0) den_ = 1;
  }

  __int128 num_;
  __int128 den_;
};

}  // namespace shadowlab
