#include "interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "common.hpp"

namespace irrlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnit = 0x1.0p-53;

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

// glibc sin/cos/exp/log1p are accurate to within a couple of ulps; the angle
// itself carries a few roundings from 2*pi*r/q. Both are covered by these.
constexpr double kTrigAbsError = 0x1.0p-48;
constexpr double kElemRelError = 0x1.0p-49;

int64_t floor_mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

CertifiedInterval clamp_unit(CertifiedInterval x) {
  return CertifiedInterval(std::max(x.lower(), -1.0), std::min(x.upper(), 1.0));
}

}  // namespace

CertifiedInterval::CertifiedInterval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("invalid interval bounds");
}

CertifiedInterval CertifiedInterval::hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

CertifiedInterval CertifiedInterval::around(double x, double err) {
  if (err == 0.0) return CertifiedInterval(x);
  return {down(x - err), up(x + err)};
}

CertifiedInterval& CertifiedInterval::operator+=(const CertifiedInterval& o) {
  const double lo = lo_ + o.lo_;
  const double hi = hi_ + o.hi_;
  // Sums of exactly representable values that cancel or hit zero need no widening.
  lo_ = (o.lo_ == 0.0 || lo_ == 0.0) ? lo : down(lo);
  hi_ = (o.hi_ == 0.0 || hi_ == 0.0) ? hi : up(hi);
  return *this;
}

CertifiedInterval& CertifiedInterval::operator-=(const CertifiedInterval& o) { return *this += -o; }

CertifiedInterval& CertifiedInterval::operator*=(const CertifiedInterval& o) {
  const double a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
  double lo = std::min({a, b, c, d});
  double hi = std::max({a, b, c, d});
  // Products that come out as zero are exact (one factor is an exact zero).
  lo_ = lo == 0.0 ? 0.0 : down(lo);
  hi_ = hi == 0.0 ? 0.0 : up(hi);
  return *this;
}

CertifiedInterval& CertifiedInterval::operator/=(const CertifiedInterval& o) {
  if (o.lo_ <= 0.0 && o.hi_ >= 0.0) throw DomainError("interval division by an interval containing zero");
  const double a = lo_ / o.lo_, b = lo_ / o.hi_, c = hi_ / o.lo_, d = hi_ / o.hi_;
  const double lo = std::min({a, b, c, d});
  const double hi = std::max({a, b, c, d});
  lo_ = lo == 0.0 ? 0.0 : down(lo);
  hi_ = hi == 0.0 ? 0.0 : up(hi);
  return *this;
}

std::string CertifiedInterval::str() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lo_, hi_);
  return buf;
}

CertifiedInterval max(const CertifiedInterval& a, const CertifiedInterval& b) {
  return {std::max(a.lower(), b.lower()), std::max(a.upper(), b.upper())};
}

CertifiedInterval sqrt(const CertifiedInterval& x) {
  if (x.upper() < 0.0) throw DomainError("sqrt of a negative interval");
  const double lo = x.lower() <= 0.0 ? 0.0 : std::sqrt(x.lower());
  const double hi = std::sqrt(x.upper());
  return {lo == 0.0 ? 0.0 : down(lo), hi == 0.0 ? 0.0 : up(hi)};
}

CertifiedInterval square(const CertifiedInterval& x) {
  const double a = std::abs(x.lower()), b = std::abs(x.upper());
  double hi = std::max(a, b);
  double lo = (x.lower() <= 0.0 && x.upper() >= 0.0) ? 0.0 : std::min(a, b);
  hi = hi * hi;
  lo = lo * lo;
  return {lo == 0.0 ? 0.0 : down(lo), hi == 0.0 ? 0.0 : up(hi)};
}

CertifiedInterval abs(const CertifiedInterval& x) {
  if (x.lower() >= 0.0) return x;
  if (x.upper() <= 0.0) return -x;
  return {0.0, std::max(-x.lower(), x.upper())};
}

CertifiedInterval exp(const CertifiedInterval& x) {
  const double lo = std::exp(x.lower());
  const double hi = std::exp(x.upper());
  return {std::max(0.0, down(lo * (1.0 - kElemRelError))), up(hi * (1.0 + kElemRelError))};
}

CertifiedInterval log1p(const CertifiedInterval& x) {
  if (x.lower() <= -1.0) throw DomainError("log1p of an interval reaching -1");
  const double lo = std::log1p(x.lower());
  const double hi = std::log1p(x.upper());
  auto widen_lo = [](double v) { return down(v - std::abs(v) * kElemRelError); };
  auto widen_hi = [](double v) { return up(v + std::abs(v) * kElemRelError); };
  return {lo == 0.0 ? 0.0 : widen_lo(lo), hi == 0.0 ? 0.0 : widen_hi(hi)};
}

CertifiedInterval pow(const CertifiedInterval& base, uint64_t e) {
  CertifiedInterval result(1.0);
  CertifiedInterval b = base;
  while (e) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b = b * b;
  }
  return result;
}

CertifiedInterval sin_pi_ratio(int64_t r, int64_t q) {
  if (q <= 0) throw DomainError("sin_pi_ratio: q must be positive");
  // sin(pi x) has period 2 in x.
  const int64_t m = floor_mod(r, 2 * q);
  if (m == 0 || m == q) return CertifiedInterval(0.0);
  if (2 * m == q) return CertifiedInterval(1.0);
  if (2 * m == 3 * q) return CertifiedInterval(-1.0);
  const double angle = M_PI * (static_cast<double>(m) / static_cast<double>(q));
  return clamp_unit(CertifiedInterval::around(std::sin(angle), kTrigAbsError));
}

CertifiedInterval cos_pi_ratio(int64_t r, int64_t q) {
  if (q <= 0) throw DomainError("cos_pi_ratio: q must be positive");
  const int64_t m = floor_mod(r, 2 * q);
  if (m == 0) return CertifiedInterval(1.0);
  if (m == q) return CertifiedInterval(-1.0);
  if (2 * m == q || 2 * m == 3 * q) return CertifiedInterval(0.0);
  const double angle = M_PI * (static_cast<double>(m) / static_cast<double>(q));
  return clamp_unit(CertifiedInterval::around(std::cos(angle), kTrigAbsError));
}

CertifiedInterval ComplexInterval::magnitude() const {
  auto m = sqrt(square(re) + square(im));
  return {m.lower(), std::max(m.lower(), m.upper())};
}

ComplexInterval unit_root(int64_t r, int64_t q) {
  const int64_t m = floor_mod(r, q);
  return {cos_pi_ratio(2 * m, q), sin_pi_ratio(2 * m, q)};
}

double ErrorTrackedSum::error_bound() const {
  if (count_ == 0) return input_err_;
  const double gamma = static_cast<double>(count_ + 1) * kUnit;
  return up(up(gamma * abs_) * (1.0 + 4 * kUnit) + input_err_);
}

}  // namespace irrlab
