#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "equidist.hpp"
#include "fpoly.hpp"
#include "measure.hpp"

namespace irrlab {

// 1 - (1 + log log 2) / log 2, the reference divisor-density exponent.
inline constexpr double kEta = 0.086071332055934;

// A_p = T^n + sum_{j<n} a_j T^j mod p with a_j drawn from the sequence.
FpPoly sample_reduction(const MeasureSequence& mus, unsigned n, uint64_t p, Stream& rng);

// Least-squares fit of log y = a - rate * x over the points with y > 0.
struct DecayFit {
  double rate = 0, intercept = 0;
  unsigned points = 0;  // rate is meaningful when points >= 2
};
DecayFit fit_exponential_decay(const std::vector<std::pair<unsigned, double>>& xy);

struct SmoothStats {
  unsigned n = 0, m = 0;
  uint64_t p = 2, samples = 0, seed = 0;
  std::vector<uint64_t> histogram;  // deg S(m), 0..n
  double mean = 0, stderr_mean = 0;
  mpq_class exact_mean;             // under the residue-uniform law
  bool exact_reference_applies = false;
  double z_score = 0;
  std::vector<std::pair<unsigned, double>> tail;  // (u, P(deg S > u m)), u = 2..8
  DecayFit decay;
};
SmoothStats smooth_degree_stats(const MeasureSequence& mus, unsigned n, uint64_t p, unsigned m, uint64_t samples,
                                uint64_t seed, unsigned threads = 1);

// Exact E deg S(m) for A uniform on M_p(n).
mpq_class smooth_degree_expectation(uint64_t p, unsigned n, unsigned m);

enum class AdditiveMode { Distinct, WithMultiplicity };

struct AdditiveTail {
  unsigned n = 0, m = 0;
  uint64_t p = 2, samples = 0, seed = 0;
  double t = 1;
  AdditiveMode mode = AdditiveMode::Distinct;
  mpq_class L;              // sum_{k <= m, f(k) = 1} pi'_p(k) / p^k
  double lower_tail = 0;    // P(value <= t L)
  double upper_tail = 0;    // P(value >= t L)
  double envelope = 0;      // exp(-(t log t - t + 1) L)
  double mean = 0, stderr_mean = 0;
  mpq_class exact_mean;
  bool exact_reference_applies = false;
  bool hypothesis_ok = true;  // m <= n / log n
  std::vector<uint64_t> histogram;
};
// f is indexed by degree (f[k] for k = 1..m; f[0] ignored).
AdditiveTail additive_tail(const MeasureSequence& mus, unsigned n, uint64_t p, const std::vector<bool>& f, unsigned m,
                           double t, AdditiveMode mode, uint64_t samples, uint64_t seed, unsigned threads = 1);
mpq_class additive_expectation(uint64_t p, unsigned n, const std::vector<bool>& f, unsigned m, AdditiveMode mode);

struct DivisorDensity {
  uint64_t p = 2;
  unsigned n = 0, k = 0;
  bool exact = false;
  uint64_t hits = 0, total = 0;
  double fraction = 0, stderr_fraction = 0;
  double reference = 0;  // k^-eta (log k)^-3/2, label only
};
DivisorDensity divisor_degree_density(uint64_t p, unsigned n, unsigned k, bool exact, uint64_t samples = 0,
                                      uint64_t seed = 0, unsigned threads = 1, uint64_t cap = 10'000'000);
// k^-eta (log k)^-3/2 for k >= 2, else 1.
double divisor_density_reference(unsigned k);
// hits[k] for every k = 0..n over all of M_p(n).
std::vector<uint64_t> divisor_degree_counts(uint64_t p, unsigned n, unsigned threads = 1,
                                            uint64_t cap = 10'000'000);

struct NormalEventRate {
  unsigned n = 0, m0 = 0;
  double eps = 0;
  std::vector<uint64_t> primes;
  std::vector<unsigned> checkpoints;
  uint64_t samples = 0, seed = 0, hits = 0;
  double rate = 0;
};
std::vector<unsigned> normal_checkpoints(unsigned n, unsigned m0);
NormalEventRate normal_event_rate(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes, double eps,
                                  unsigned m0, uint64_t samples, uint64_t seed, unsigned threads = 1);

}  // namespace irrlab
