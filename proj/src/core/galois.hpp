#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "measure.hpp"
#include "partition.hpp"
#include "zpoly.hpp"

namespace irrlab {

enum class GaloisOutcome { CertifiedAnOrSn, TransitiveOnly, NoCertificate, Reducible };
const char* outcome_name(GaloisOutcome o);

struct FrobeniusEvidence {
  uint64_t prime = 0;
  bool squarefree = false;
  std::optional<Partition> type;
  std::string conclusion_so_far;
};

struct FrobeniusCertificate {
  GaloisOutcome outcome = GaloisOutcome::NoCertificate;
  unsigned n = 0;
  uint64_t primes_examined = 0;
  uint64_t skipped_nonsquarefree = 0;
  uint64_t irreducible_reductions = 0;
  std::vector<FrobeniusEvidence> evidence;
  uint64_t transitive_prime = 0;
  std::string primitive_reason;
  uint64_t primitive_prime = 0;
  unsigned cycle_q = 0;          // prime q with a q-cycle among powers of a Frobenius
  uint64_t cycle_prime = 0;
  uint64_t cycle_exponent = 0;
};

// Scans the first `budget` primes. A prime-length cycle q counts toward A_n
// containment when q <= n - 3 (Jordan) or q is 2 or 3.
FrobeniusCertificate frobenius_certify(const ZPoly& a, uint64_t budget, unsigned threads = 1);

struct NuPair {
  unsigned k = 0, l = 0;
  double value = 0, stderr_value = 0, bound = 0;
  bool ok = true;
};
struct NuSubsetSum {
  unsigned k = 0;
  double value = 0, stderr_value = 0;
};
struct NuTail {
  unsigned m = 0;
  double t = 0, L = 0, value = 0, envelope = 0;
};

struct NuReport {
  unsigned n = 0;
  uint64_t p = 2;
  bool exhaustive = false;
  bool residue_uniform = false;
  uint64_t samples = 0;
  double total_mass = 0;
  std::map<Partition, double> distribution;
  std::vector<NuPair> pairs;
  std::vector<NuSubsetSum> subset_sums;
  std::vector<NuTail> tails;
  bool pairs_ok = true;
};

NuReport nu_checks(const MeasureSequence& mus, unsigned n, uint64_t p, bool exhaustive, uint64_t samples = 0,
                   uint64_t seed = 0, unsigned threads = 1, uint64_t cap = 10'000'000);

}  // namespace irrlab
