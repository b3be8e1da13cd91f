#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qtmlab {

// Exact rational over int64 with overflow-checked arithmetic.
// Desk-scale amplitudes and Kraft sums stay far below the 2^62 guard.
class rational {
 public:
  rational() : num_(0), den_(1) {}
  rational(long long n) : num_(n), den_(1) {}
  rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  friend rational operator+(const rational& a, const rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return from_wide(n, d);
  }
  friend rational operator-(const rational& a, const rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return from_wide(n, d);
  }
  friend rational operator*(const rational& a, const rational& b) {
    return from_wide((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend rational operator/(const rational& a, const rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("rational: division by zero");
    return from_wide((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  rational operator-() const { return rational(-num_, den_); }
  rational& operator+=(const rational& o) { return *this = *this + o; }
  rational& operator-=(const rational& o) { return *this = *this - o; }
  rational& operator*=(const rational& o) { return *this = *this * o; }
  rational& operator/=(const rational& o) { return *this = *this / o; }

  friend bool operator==(const rational& a, const rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
  friend bool operator<(const rational& a, const rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const rational& a, const rational& b) {
    return (__int128)a.num_ * b.den_ <= (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const rational& a, const rational& b) { return b < a; }
  friend bool operator>=(const rational& a, const rational& b) { return b <= a; }

  double to_double() const { return (double)num_ / (double)den_; }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Parses "n" or "n/d"; throws std::invalid_argument on malformed input.
  static rational parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational: empty literal");
    size_t slash = s.find('/');
    try {
      size_t used = 0;
      long long n = std::stoll(s.substr(0, slash), &used);
      if (used != (slash == std::string::npos ? s.size() : slash))
        throw std::invalid_argument("trailing characters");
      if (slash == std::string::npos) return rational(n);
      std::string ds = s.substr(slash + 1);
      long long d = std::stoll(ds, &used);
      if (used != ds.size()) throw std::invalid_argument("trailing characters");
      return rational(n, d);
    } catch (const std::exception&) {
      throw std::invalid_argument("rational: bad literal '" + s + "'");
    }
  }

  static rational pow2(int e) {  // 2^e for |e| <= 62
    if (e > 62 || e < -62) throw std::overflow_error("rational: pow2 exponent out of range");
    if (e >= 0) return rational(1LL << e);
    return rational(1, 1LL << (-e));
  }

 private:
  static rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd_wide(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    const __int128 lim = (__int128)1 << 62;
    if (n >= lim || n <= -lim || d >= lim)
      throw std::overflow_error("rational: value exceeds 2^62 after reduction");
    rational r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  static __int128 gcd_wide(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void normalize() {
    if (den_ == 0) throw std::invalid_argument("rational: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  long long num_;
  long long den_;
};

}  // namespace qtmlab
