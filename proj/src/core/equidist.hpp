#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fpoly.hpp"
#include "interval.hpp"
#include "measure.hpp"

namespace irrlab {

inline constexpr double kLambda0 = 0.8147228136661187;  // 1/(4 - 4 log 2)

struct PrimeModulusSet {
  std::vector<uint64_t> primes;  // ascending, distinct
  int64_t P = 1;

  static PrimeModulusSet of(std::vector<uint64_t> primes);
  std::size_t index_of(uint64_t p) const;
};

// Law of (A mod D_p)_p. Entries are indexed by the mixed-radix code of the
// residue tuple: component i contributes sum_k c_k p_i^k, times the product of
// the sizes of the earlier components.
struct ResidueDistribution {
  std::vector<uint64_t> primes;
  std::vector<FpPoly> moduli;
  std::vector<double> prob;
  bool exact = false;
  std::vector<mpz_class> numer;  // when exact: prob = numer / denom
  mpz_class denom;
  std::string method;

  std::size_t size() const { return prob.size(); }
  uint64_t encode(const std::vector<FpPoly>& residues) const;
  std::vector<FpPoly> decode(uint64_t index) const;
  ResidueDistribution marginal(std::size_t component) const;
};

double total_variation(const ResidueDistribution& a, const ResidueDistribution& b);

enum class DistMethod { Dp, Fourier };

ResidueDistribution residue_distribution(const MeasureSequence& mus, unsigned n, const std::vector<FpPoly>& moduli,
                                         DistMethod method, uint64_t cap = 10'000'000);

struct DeltaRow {
  std::vector<FpPoly> moduli;
  double discrepancy = 0;
  mpq_class exact_discrepancy;
};

struct DeltaResult {
  unsigned n = 0, m = 0;
  std::vector<uint64_t> primes;
  bool exact = false;
  mpq_class value;      // when exact
  double value_d = 0;
  double error_bound = 0;  // float path
  std::size_t tuples = 0;
  std::vector<DeltaRow> rows;
};

// Delta for one (n, m). Rows are kept when keep_rows is set.
DeltaResult delta(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes, unsigned m,
                  bool keep_rows = false, unsigned threads = 1, uint64_t cap = 10'000'000);

// Delta(n; m) for all 1 <= n <= n_max and 0 <= m <= m_max: result[n-1][m].
std::vector<std::vector<DeltaResult>> delta_table(const MeasureSequence& mus, unsigned n_max,
                                                  const PrimeModulusSet& primes, unsigned m_max,
                                                  unsigned threads = 1, uint64_t cap = 10'000'000);

// One G_p/H_p per prime (H_p = 1, G_p = 0 for a trivial component).
struct LaurentPhase {
  std::vector<FpPoly> G;
  std::vector<FpPoly> H;
  void validate(const PrimeModulusSet& primes) const;
};

// res(T^j G/H) for j = 0..count-1.
std::vector<uint64_t> residue_sequence(const FpPoly& G, const FpPoly& H, unsigned count);

struct SValue {
  CertifiedInterval value;
  bool linf_applicable = false;
  CertifiedInterval linf_bound;  // beta^floor(n / l_q) with the smallest l_q >= 1
  bool linf_ok = true;
};
SValue s_value(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes, const LaurentPhase& phase);

struct DeltaEll {
  std::vector<unsigned> ell;
  CertifiedInterval value;
  CertifiedInterval alpha, beta;
  CertifiedInterval bound_discrete_l1;
  CertifiedInterval bound_linf;       // (prod p^l_p) beta^floor(n / l_min)
  std::size_t terms = 0;
  double max_s = 0;
  bool pointwise_linf_ok = true;      // every term obeys S <= beta^floor(n/l_min)
  bool discrete_l1_ok = true;
};
DeltaEll delta_ell(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes,
                   const std::vector<unsigned>& ell, uint64_t cap = 10'000'000);

}  // namespace irrlab
