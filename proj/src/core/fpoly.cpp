#include "fpoly.hpp"

#include <algorithm>
#include <sstream>

#include "common.hpp"
#include "numtheory.hpp"

namespace irrlab {

FpPoly::FpPoly(uint64_t p, std::vector<uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  if (p < 2) throw DomainError("polynomial modulus must be a prime >= 2");
  for (auto& c : c_) c %= p_;
  normalize();
}

FpPoly FpPoly::from_signed(uint64_t p, const std::vector<int64_t>& coeffs) {
  std::vector<uint64_t> c(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = static_cast<uint64_t>(floor_mod(coeffs[i], static_cast<int64_t>(p)));
  return FpPoly(p, std::move(c));
}

FpPoly FpPoly::monomial(uint64_t p, std::size_t k, uint64_t c) {
  std::vector<uint64_t> v(k + 1, 0);
  v[k] = c;
  return FpPoly(p, std::move(v));
}

FpPoly FpPoly::monic_from_index(uint64_t p, unsigned n, uint64_t index) {
  std::vector<uint64_t> v(n + 1, 0);
  for (unsigned i = 0; i < n; ++i) {
    v[i] = index % p;
    index /= p;
  }
  v[n] = 1;
  return FpPoly(p, std::move(v));
}

uint64_t FpPoly::index() const {
  uint64_t idx = 0;
  for (int i = degree() - 1; i >= 0; --i) idx = idx * p_ + c_[i];
  return idx;
}

void FpPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

uint64_t FpPoly::mul(uint64_t a, uint64_t b) const {
  if (p_ < (1ULL << 32)) return a * b % p_;
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
}

uint64_t FpPoly::inv(uint64_t a) const {
  int64_t t = 0, nt = 1;
  __int128 r = p_, nr = a % p_;
  if (nr == 0) throw DomainError("inverse of zero in F_p");
  while (nr != 0) {
    const __int128 q = r / nr;
    const int64_t tmp = t - static_cast<int64_t>(q) * nt;
    t = nt;
    nt = tmp;
    const __int128 rr = r - q * nr;
    r = nr;
    nr = rr;
  }
  return static_cast<uint64_t>(floor_mod(t, static_cast<int64_t>(p_)));
}

FpPoly FpPoly::monic() const {
  if (is_zero() || is_monic()) return *this;
  return scaled(inv(lead()));
}

FpPoly FpPoly::derivative() const {
  std::vector<uint64_t> v(c_.size() > 1 ? c_.size() - 1 : 0);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = mul(c_[i], i % p_);
  return FpPoly(p_, std::move(v));
}

uint64_t FpPoly::eval(uint64_t x) const {
  uint64_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (mul(acc, x % p_) + *it) % p_;
  return acc;
}

FpPoly FpPoly::operator+(const FpPoly& o) const {
  std::vector<uint64_t> v(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const uint64_t s = coeff(i) + o.coeff(i);
    v[i] = s >= p_ ? s - p_ : s;
  }
  return FpPoly(p_, std::move(v));
}

FpPoly FpPoly::operator-(const FpPoly& o) const {
  std::vector<uint64_t> v(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const uint64_t a = coeff(i), b = o.coeff(i);
    v[i] = a >= b ? a - b : a + p_ - b;
  }
  return FpPoly(p_, std::move(v));
}

FpPoly FpPoly::operator*(const FpPoly& o) const {
  if (is_zero() || o.is_zero()) return zero(p_);
  std::vector<uint64_t> v(c_.size() + o.c_.size() - 1, 0);
  if (p_ < (1ULL << 16)) {
    // Products are below 2^32, so sums of up to 2^32 terms cannot overflow.
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    }
    for (auto& x : v) x %= p_;
  } else {
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] = (v[i + j] + mul(c_[i], o.c_[j])) % p_;
  }
  return FpPoly(p_, std::move(v));
}

FpPoly FpPoly::scaled(uint64_t c) const {
  std::vector<uint64_t> v(c_);
  for (auto& x : v) x = mul(x, c % p_);
  return FpPoly(p_, std::move(v));
}

FpPoly FpPoly::shifted(std::size_t k) const {
  if (is_zero()) return *this;
  std::vector<uint64_t> v(k, 0);
  v.insert(v.end(), c_.begin(), c_.end());
  return FpPoly(p_, std::move(v));
}

void FpPoly::divmod(const FpPoly& d, FpPoly& q, FpPoly& r) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  if (d.p_ != p_) throw DomainError("mismatched moduli");
  std::vector<uint64_t> rem(c_);
  const int dd = d.degree();
  if (degree() < dd) {
    q = zero(p_);
    r = *this;
    return;
  }
  std::vector<uint64_t> quo(static_cast<std::size_t>(degree() - dd + 1), 0);
  const uint64_t linv = d.is_monic() ? 1 : inv(d.lead());
  for (int i = degree(); i >= dd; --i) {
    const uint64_t c = mul(rem[i], linv);
    if (c == 0) continue;
    quo[static_cast<std::size_t>(i - dd)] = c;
    const uint64_t neg = p_ - c;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] = (rem[i - dd + j] + mul(neg, d.c_[j])) % p_;
  }
  rem.resize(static_cast<std::size_t>(dd));
  q = FpPoly(p_, std::move(quo));
  r = FpPoly(p_, std::move(rem));
}

FpPoly FpPoly::operator/(const FpPoly& d) const {
  FpPoly q, r;
  divmod(d, q, r);
  return q;
}

FpPoly FpPoly::operator%(const FpPoly& d) const {
  FpPoly q, r;
  divmod(d, q, r);
  return r;
}

bool FpPoly::divides(const FpPoly& a) const { return (a % *this).is_zero(); }

bool FpPoly::operator<(const FpPoly& o) const {
  if (degree() != o.degree()) return degree() < o.degree();
  return c_ < o.c_;
}

std::string FpPoly::str() const {
  std::ostringstream os;
  os << p_ << ':';
  if (c_.empty()) os << '0';
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  return os.str();
}

std::string FpPoly::pretty() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const uint64_t c = c_[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c != 1 || i == 0) os << c;
    if (i >= 1) os << 'T';
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

uint64_t FpPoly::hash() const {
  uint64_t h = splitmix64(p_);
  for (auto c : c_) h = splitmix64(h ^ c);
  return h;
}

FpPoly parse_fpoly(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("polynomial text must look like p:c0,c1,...");
  int64_t p = 0;
  try {
    std::size_t used = 0;
    p = std::stoll(text.substr(0, colon), &used);
    if (used != colon) throw ParseError("bad prime");
  } catch (const std::exception&) {
    throw ParseError("bad prime in polynomial text '" + text + "'");
  }
  if (p < 2 || !is_prime(static_cast<uint64_t>(p))) throw ParseError("polynomial modulus must be prime");
  std::vector<int64_t> coeffs;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto trimmed = item.substr(item.find_first_not_of(" \t"));
      coeffs.push_back(std::stoll(trimmed, &used));
      if (trimmed.find_first_not_of(" \t\r\n", used) != std::string::npos) throw ParseError("junk");
    } catch (const std::exception&) {
      throw ParseError("bad coefficient '" + item + "'");
    }
  }
  return FpPoly::from_signed(static_cast<uint64_t>(p), coeffs);
}

FpPoly gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& m) {
  FpPoly result = FpPoly::one(base.p()) % m;
  const FpPoly b = base % m;
  for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
    result = (result * result) % m;
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) result = (result * b) % m;
  }
  return result;
}

FpPoly powmod(const FpPoly& base, uint64_t e, const FpPoly& m) {
  return powmod(base, mpz_class(static_cast<unsigned long>(e)), m);
}

}  // namespace irrlab
