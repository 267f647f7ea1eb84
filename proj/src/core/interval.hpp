#pragma once

#include <cstdint>
#include <string>

namespace irrlab {

// Closed enclosure [lower, upper] of a real number. Every operation rounds
// outward, so the exact result of the corresponding real operation on any
// points of the operands lies inside the result.
class CertifiedInterval {
 public:
  CertifiedInterval() = default;
  explicit CertifiedInterval(double x) : lo_(x), hi_(x) {}
  CertifiedInterval(double lo, double hi);

  static CertifiedInterval hull(double a, double b);
  // Enclosure of x with an absolute error bound err >= 0.
  static CertifiedInterval around(double x, double err);

  double lower() const { return lo_; }
  double upper() const { return hi_; }
  double width() const { return hi_ - lo_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool certainly_below(double x) const { return hi_ < x; }
  bool certainly_above(double x) const { return lo_ > x; }

  CertifiedInterval operator-() const { return {-hi_, -lo_}; }
  CertifiedInterval& operator+=(const CertifiedInterval& o);
  CertifiedInterval& operator-=(const CertifiedInterval& o);
  CertifiedInterval& operator*=(const CertifiedInterval& o);
  CertifiedInterval& operator/=(const CertifiedInterval& o);

  friend CertifiedInterval operator+(CertifiedInterval a, const CertifiedInterval& b) { return a += b; }
  friend CertifiedInterval operator-(CertifiedInterval a, const CertifiedInterval& b) { return a -= b; }
  friend CertifiedInterval operator*(CertifiedInterval a, const CertifiedInterval& b) { return a *= b; }
  friend CertifiedInterval operator/(CertifiedInterval a, const CertifiedInterval& b) { return a /= b; }

  std::string str() const;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

CertifiedInterval max(const CertifiedInterval& a, const CertifiedInterval& b);
CertifiedInterval sqrt(const CertifiedInterval& x);
CertifiedInterval square(const CertifiedInterval& x);
CertifiedInterval abs(const CertifiedInterval& x);
CertifiedInterval exp(const CertifiedInterval& x);
CertifiedInterval log1p(const CertifiedInterval& x);
CertifiedInterval pow(const CertifiedInterval& base, uint64_t e);

// sin(pi * r / q) for integers r, q > 0. Exact at multiples of q/2.
CertifiedInterval sin_pi_ratio(int64_t r, int64_t q);
// cos(pi * r / q).
CertifiedInterval cos_pi_ratio(int64_t r, int64_t q);

struct ComplexInterval {
  CertifiedInterval re;
  CertifiedInterval im;

  ComplexInterval operator*(const ComplexInterval& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  ComplexInterval& operator+=(const ComplexInterval& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CertifiedInterval magnitude() const;
};

// e(r/q) = exp(2 pi i r/q).
ComplexInterval unit_root(int64_t r, int64_t q);

// Floating-point sum with a running bound on its rounding error:
// |fl(sum) - sum| <= (n + 1) u sum|x_i|, plus any input error passed in.
class ErrorTrackedSum {
 public:
  void add(double x, double input_error = 0.0) {
    sum_ += x;
    abs_ += x < 0 ? -x : x;
    input_err_ += input_error;
    ++count_;
  }
  double value() const { return sum_; }
  double error_bound() const;
  CertifiedInterval enclosure() const { return CertifiedInterval::around(sum_, error_bound()); }

 private:
  double sum_ = 0.0;
  double abs_ = 0.0;
  double input_err_ = 0.0;
  uint64_t count_ = 0;
};

}  // namespace irrlab
