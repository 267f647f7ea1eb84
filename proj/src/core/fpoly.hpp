#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "partition.hpp"

namespace irrlab {

// Polynomial over F_p, little-endian coefficients, no trailing zeros.
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(uint64_t p, std::vector<uint64_t> coeffs);
  static FpPoly from_signed(uint64_t p, const std::vector<int64_t>& coeffs);
  static FpPoly zero(uint64_t p) { return FpPoly(p, {}); }
  static FpPoly one(uint64_t p) { return FpPoly(p, {1}); }
  static FpPoly monomial(uint64_t p, std::size_t k, uint64_t c = 1);
  // Monic polynomial of degree n whose lower coefficients are the base-p
  // digits of index.
  static FpPoly monic_from_index(uint64_t p, unsigned n, uint64_t index);

  uint64_t p() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  uint64_t lead() const { return c_.empty() ? 0 : c_.back(); }
  uint64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<uint64_t>& coeffs() const { return c_; }
  // Base-p index of the lower coefficients (inverse of monic_from_index).
  uint64_t index() const;

  FpPoly monic() const;
  FpPoly derivative() const;
  uint64_t eval(uint64_t x) const;

  FpPoly operator+(const FpPoly& o) const;
  FpPoly operator-(const FpPoly& o) const;
  FpPoly operator*(const FpPoly& o) const;
  FpPoly scaled(uint64_t c) const;
  FpPoly shifted(std::size_t k) const;  // times T^k
  void divmod(const FpPoly& d, FpPoly& q, FpPoly& r) const;
  FpPoly operator/(const FpPoly& d) const;
  FpPoly operator%(const FpPoly& d) const;
  bool divides(const FpPoly& a) const;  // this | a

  bool operator==(const FpPoly& o) const { return p_ == o.p_ && c_ == o.c_; }
  bool operator!=(const FpPoly& o) const { return !(*this == o); }
  // Order by degree, then coefficients from the constant term up.
  bool operator<(const FpPoly& o) const;

  std::string str() const;  // "p:c0,c1,...,cd"
  std::string pretty() const;
  uint64_t hash() const;

  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t inv(uint64_t a) const;

 private:
  void normalize();
  uint64_t p_ = 2;
  std::vector<uint64_t> c_;
};

FpPoly parse_fpoly(const std::string& text);
FpPoly gcd(FpPoly a, FpPoly b);  // monic, or zero
// base^e mod m.
FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& m);
FpPoly powmod(const FpPoly& base, uint64_t e, const FpPoly& m);

struct Factor {
  FpPoly f;
  unsigned mult = 1;
};
using Factorization = std::vector<Factor>;

Factorization factor(const FpPoly& a, uint64_t seed = 0);
bool is_irreducible(const FpPoly& a);
bool is_squarefree(const FpPoly& a);
FpPoly product(const Factorization& fac);

// (d, number of distinct irreducible factors of degree d) for a squarefree
// monic polynomial.
std::vector<std::pair<unsigned, unsigned>> distinct_degree_counts(const FpPoly& a);

struct SmoothRough {
  FpPoly smooth;
  FpPoly rough;
};
// The factor T always goes to the rough part.
SmoothRough smooth_rough_split(const FpPoly& a, unsigned m, uint64_t seed = 0);
SmoothRough smooth_rough_split(const Factorization& fac, uint64_t p, unsigned m);

// bit k set iff A has a monic divisor of degree k.
std::vector<bool> divisor_degree_set(const FpPoly& a, uint64_t seed = 0);
std::vector<bool> divisor_degree_set(const Factorization& fac, unsigned n);

struct FactorizationType {
  Partition rho;
  mpz_class tau;
  unsigned omega = 0;
};
FactorizationType factorization_type(const FpPoly& a, uint64_t seed = 0);
FactorizationType factorization_type(const Factorization& fac);

// All monic irreducibles of degree k over F_p, ascending (small p^k only).
std::vector<FpPoly> monic_irreducibles(uint64_t p, unsigned k);

}  // namespace irrlab
