#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace irrlab {

// Multiset of positive integers, stored ascending.
struct Partition {
  std::vector<unsigned> parts;

  Partition() = default;
  explicit Partition(std::vector<unsigned> p);

  unsigned n() const;
  std::size_t size() const { return parts.size(); }
  std::string str() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;
};

// "1,1,2" or "(1,1,2)".
Partition parse_partition(const std::string& text);

// All partitions of n, each ascending, in lexicographic order.
std::vector<Partition> partitions_of(unsigned n);

bool is_y_merging(const Partition& sigma, const Partition& rho, unsigned y);
// Throws CapExceeded for more than 20 parts.
std::set<Partition> enumerate_mergings(const Partition& rho, unsigned y);

// Cycle type of g^m for g of cycle type sigma.
Partition cycle_power(const Partition& sigma, uint64_t m);

struct TransitivityVerdict {
  bool definitely_not = false;
  // Feasible block system, if any: number of blocks r and per-group block
  // cycle lengths r'_g with their member cycles.
  std::optional<unsigned> blocks;
  std::vector<std::pair<unsigned, std::vector<unsigned>>> grouping;
  // Power exponent whose support is small, if the primitive case is excluded.
  std::optional<uint64_t> small_power;
  unsigned small_support = 0;
  std::string witness;
};
TransitivityVerdict transitive_overapprox(const Partition& sigma, unsigned n);

struct LPParams {
  double C = 1.0;
  double t = 0.5;
  double kappa = 1.0;
  double delta = 0.1;
  double theta = 0.0;
  double alpha() const { return delta / 4 - theta / 2; }
  void validate() const;
};

struct PartitionEvents {
  bool e1 = false, e2 = false, e3 = false, e4 = false, e5 = false;
  bool e2_vacuous = false;  // no admissible r
  bool e3_window_empty = false;
  bool e5_window_empty = false;
  double gcd_threshold = 0;
};
PartitionEvents partition_events(const Partition& rho, unsigned n, const LPParams& params);

// Whether some sub-multiset of parts sums to target (bitset DP).
bool has_subset_sum(const std::vector<unsigned>& parts, unsigned target);

}  // namespace irrlab
