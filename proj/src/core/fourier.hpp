#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "interval.hpp"
#include "measure.hpp"

namespace irrlab {

struct RationalPhase {
  int64_t k = 0;
  int64_t Q = 1;

  // gcd(k, Q) = 1, 0 <= k < Q. Throws on Q == 0.
  RationalPhase reduced() const;
};

// Enclosure of sum_a mu(a) e(a k / Q).
ComplexInterval fourier(const Measure& mu, RationalPhase phase);

// |mu^(t/P)| for t = 0..P-1.
std::vector<CertifiedInterval> magnitude_table(const Measure& mu, int64_t P);
// Floating-point mu^(t/P) for t = 0..P-1 (no enclosure).
std::vector<std::complex<double>> fourier_table(const Measure& mu, int64_t P);

struct AlphaBeta {
  CertifiedInterval alpha;
  CertifiedInterval beta;
  int64_t alpha_Q = 0;    // split attaining the largest upper bound
  int64_t alpha_ell = 0;
  std::size_t alpha_index = 0;  // coefficient index attaining it
};

// Moduli splits P = Q R with Q > 1, with the index sets {(kR + lQ) mod P : k < Q}.
class SplitTable {
 public:
  explicit SplitTable(int64_t P);
  int64_t modulus() const { return P_; }
  AlphaBeta evaluate(const std::vector<CertifiedInterval>& magnitudes) const;

 private:
  struct Split {
    int64_t Q, R;
    CertifiedInterval sqrt_Q;
    std::vector<int32_t> points;  // R rows of Q entries
  };
  int64_t P_;
  std::vector<Split> splits_;
};

void require_squarefree_modulus(int64_t P);

// Maximum over coefficient indices [0, n) of the sequence.
AlphaBeta alpha_beta(const MeasureSequence& mus, int64_t P, std::size_t n = 1);
AlphaBeta alpha_beta(const Measure& mu, int64_t P);

struct BoxBound {
  CertifiedInterval value;
  bool below_one = false;
};
// (1/sqrt 2)(1 + (P - 1)/(H sin(pi/P))).
BoxBound uniform_box_bound(int64_t H, int64_t P);

struct SweepReport {
  int64_t H_lo = 0, H_hi = 0, P = 0;
  int64_t certified = 0;
  int64_t certified_analytic = 0;
  int64_t certified_direct = 0;
  std::vector<int64_t> failures;
  double max_direct_alpha_upper = 0;  // over directly certified H
  int64_t max_direct_alpha_H = 0;
  bool all_certified() const { return failures.empty(); }
};
// Certifies alpha(P) < 1 for uniform [1, H], H_lo <= H <= H_hi.
SweepReport certify_alpha_range(int64_t H_lo, int64_t H_hi, int64_t P, unsigned threads = 1);

struct ModulusPrimes {
  std::vector<uint64_t> primes;
  int64_t P = 1;
};
ModulusPrimes sth_power_modulus(int64_t s);

struct GoodModulus {
  ModulusPrimes best;
  AlphaBeta alpha;
  std::vector<uint64_t> window_primes;
  std::size_t candidates = 0;
};
// Products of four distinct primes from [x/2, x] (or from an explicit prime
// window [lo, hi] when given); returns the candidate with smallest alpha upper.
GoodModulus find_good_modulus(const MeasureSequence& mus, double x, std::size_t n = 1,
                              std::optional<std::pair<uint64_t, uint64_t>> window = std::nullopt);

}  // namespace irrlab
