#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fpoly.hpp"

namespace irrlab {

// Integer polynomial, little-endian, no trailing zeros.
class ZPoly {
 public:
  ZPoly() = default;
  explicit ZPoly(std::vector<mpz_class> coeffs);
  static ZPoly from_ints(const std::vector<int64_t>& coeffs);
  static ZPoly monomial(std::size_t k, const mpz_class& c = 1);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  const mpz_class& coeff(std::size_t i) const;
  const std::vector<mpz_class>& coeffs() const { return c_; }

  ZPoly operator+(const ZPoly& o) const;
  ZPoly operator-(const ZPoly& o) const;
  ZPoly operator*(const ZPoly& o) const;
  bool operator==(const ZPoly& o) const { return c_ == o.c_; }

  // Division by a monic divisor; returns false if the remainder is nonzero.
  bool divide_exact(const ZPoly& d, ZPoly& quotient) const;
  mpz_class eval(const mpz_class& x) const;
  uint64_t eval_mod(uint64_t x, uint64_t q) const;
  FpPoly reduce(uint64_t p) const;
  // Coefficients reduced into the symmetric range (-m/2, m/2].
  ZPoly symmetric_mod(const mpz_class& m) const;
  ZPoly derivative() const;

  std::string str() const;     // "z:c0,c1,..."
  std::string pretty() const;  // "T^2 - 2"

 private:
  void normalize();
  std::vector<mpz_class> c_;
};

// Accepts "z:c0,c1,..." or an expression in T such as "T^5 - T - 1".
ZPoly parse_zpoly(const std::string& text);

// Lift an F_p polynomial to the integers with coefficients in [0, p).
ZPoly lift(const FpPoly& f);

// Cyclotomic polynomial Phi_d.
ZPoly cyclotomic(unsigned d);

enum class ZVerdict { Irreducible, Reducible, Undecided };
const char* verdict_name(ZVerdict v);

struct ZIrreducibility {
  ZVerdict verdict = ZVerdict::Undecided;
  int stage = -1;                 // deciding stage
  ZPoly witness;                  // a proper monic factor when reducible
  std::string reason;
  std::vector<uint64_t> stage1_primes;
  std::vector<bool> degree_set;   // stage-1 intersection
  uint64_t recombinations = 0;
};

struct ZBudget {
  unsigned stage1_primes = 8;
  unsigned stage1_scan_limit = 64;    // primes examined while looking for squarefree reductions
  uint64_t recombinations = 100000;
  int max_stage2_degree = 64;
};

ZIrreducibility irreducible_over_Z(const ZPoly& a, const ZBudget& budget = {});

}  // namespace irrlab
