#pragma once

#include <complex>
#include <string>

#include "qtmlab/rational.hpp"

namespace qtmlab {

// Element of Q adjoined sqrt(1/2): a + b*2^{-1/2}. Closed under ring
// operations since (2^{-1/2})^2 = 1/2, and 1, 2^{-1/2} are independent
// over Q, so zero tests are exact.
struct sqrt_half_ext {
  rational a;  // rational part
  rational b;  // coefficient of 2^{-1/2}

  sqrt_half_ext() = default;
  sqrt_half_ext(rational ra) : a(ra) {}
  sqrt_half_ext(rational ra, rational rb) : a(ra), b(rb) {}

  bool is_zero() const { return a.is_zero() && b.is_zero(); }

  friend sqrt_half_ext operator+(const sqrt_half_ext& x, const sqrt_half_ext& y) {
    return {x.a + y.a, x.b + y.b};
  }
  friend sqrt_half_ext operator-(const sqrt_half_ext& x, const sqrt_half_ext& y) {
    return {x.a - y.a, x.b - y.b};
  }
  friend sqrt_half_ext operator*(const sqrt_half_ext& x, const sqrt_half_ext& y) {
    return {x.a * y.a + x.b * y.b * rational(1, 2), x.a * y.b + x.b * y.a};
  }
  sqrt_half_ext operator-() const { return {-a, -b}; }
  friend bool operator==(const sqrt_half_ext& x, const sqrt_half_ext& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const sqrt_half_ext& x, const sqrt_half_ext& y) { return !(x == y); }

  double to_double() const { return a.to_double() + b.to_double() * 0.70710678118654752440; }
};

// Exact transition amplitude: re + im*i with re, im in Q(2^{-1/2}).
struct amplitude {
  sqrt_half_ext re;
  sqrt_half_ext im;

  amplitude() = default;
  amplitude(sqrt_half_ext r) : re(r) {}
  amplitude(sqrt_half_ext r, sqrt_half_ext i) : re(r), im(i) {}
  static amplitude one() { return amplitude(sqrt_half_ext(rational(1))); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend amplitude operator+(const amplitude& x, const amplitude& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend amplitude operator-(const amplitude& x, const amplitude& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend amplitude operator*(const amplitude& x, const amplitude& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  amplitude conj() const { return {re, -im}; }
  friend bool operator==(const amplitude& x, const amplitude& y) {
    return x.re == y.re && x.im == y.im;
  }
  friend bool operator!=(const amplitude& x, const amplitude& y) { return !(x == y); }

  sqrt_half_ext norm_sq() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

  // Literal grammar: RAT(+RATi)? where RAT := [-]?INT(/INT)?(r)?
  // and the r suffix multiplies by 2^{-1/2}. Examples: "1", "-1r", "1/2+-1/2i".
  static amplitude parse(const std::string& s);
  std::string str() const;
};

}  // namespace qtmlab
