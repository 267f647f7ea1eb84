#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "equidist.hpp"
#include "fpoly.hpp"
#include "interval.hpp"
#include "measure.hpp"

namespace irrlab {

// Monic irreducibles over F_p of degree <= m, none equal to T.
struct IrreducibleFamily {
  uint64_t p = 2;
  unsigned m = 0;
  std::vector<FpPoly> members;

  // Every monic irreducible of degree <= m except T.
  static IrreducibleFamily all_up_to(uint64_t p, unsigned m);
  void validate() const;
};

// ceil(3/2 + 2 log l) with l = max(1, m).
unsigned default_truncation(unsigned m);

struct BonferroniSums {
  mpq_class lower;  // omega(G) <= 2v + 1
  mpq_class full;   // prod (1 - 1/|I|)
  mpq_class upper;  // omega(G) <= 2v
};
// Sums of (-1)^omega(G)/|G| over squarefree products G of family members.
BonferroniSums bonferroni_sums(const IrreducibleFamily& family, unsigned v);

struct BrunResult {
  std::vector<unsigned> truncation;
  std::vector<BonferroniSums> sums;  // per prime
  mpq_class norm_D;
  mpq_class main_term;        // 2^#P / |D| * prod prod (1 - 1/|I|)
  mpq_class truncated_main;   // (1/|D|) prod of the truncated sums
  mpq_class remainder;        // sum over G with omega(G_p) <= 2 v_p
  mpq_class bound;            // main_term + remainder
  mpq_class truncated_bound;  // truncated_main + remainder
  std::size_t remainder_terms = 0;
  bool exact_available = false;
  mpq_class exact;
  bool mc_used = false;
  double mc_estimate = 0, mc_stderr = 0;
  bool ok = true;              // bound >= exact (or MC within 5 sigma)
  bool degree_hypothesis = true;  // every family degree bound >= 11
};

// Probability bound for D_p | A_p and (A_p / D_p, I_p) = 1 for every p.
BrunResult brun_upper_bound(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes,
                            const std::vector<FpPoly>& D, const std::vector<IrreducibleFamily>& families,
                            std::optional<std::vector<unsigned>> truncation = std::nullopt, uint64_t seed = 0,
                            uint64_t samples = 20000, uint64_t cap = 10'000'000);

// Fraction of A in M_p(n) all of whose irreducible factors have degree > m or
// equal T.
mpq_class rough_fraction_exact(uint64_t p, unsigned n, unsigned m);

struct EulerProduct {
  bool exact = false;
  mpq_class value;  // when exact
  CertifiedInterval enclosure;
  bool bound_ok = false;  // value <= 2/(m+1), certified
};
EulerProduct euler_product(uint64_t p, unsigned m);

}  // namespace irrlab
