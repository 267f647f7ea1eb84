#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "zpoly.hpp"

namespace irrlab {

struct Proportion {
  uint64_t hits = 0, total = 0;
  double estimate = 0, lo = 0, hi = 0;  // Wilson 95% interval
  double stderr_estimate = 0;
};
Proportion proportion(uint64_t hits, uint64_t total);

struct McConfig {
  std::string measure;
  unsigned n = 0;
  uint64_t samples = 0;  // raw draws before conditioning on a_0 != 0
  uint64_t seed = 0;
  ZBudget budget;
};

struct McReport {
  McConfig config;
  uint64_t raw = 0, conditioned = 0, rejected = 0;
  Proportion irreducible, reducible, undecided;
  uint64_t stage0_reducible = 0, stage1_irreducible = 0, stage2_irreducible = 0, stage2_reducible = 0;
  Proportion root_at_minus_one, root_at_one;
  std::optional<int64_t> box_H;  // set when the measure is uniform on [1, H]
  double rivin_bound = 0;
  bool rivin_ok = true;          // reducible fraction <= bound + 5 sigma
};

McReport mc_irreducibility(const McConfig& config, unsigned threads = 1);

struct SubsetAlphaReport {
  int64_t H = 0;
  uint64_t N = 0, trials = 0, seed = 0;
  Proportion certified;     // alpha(210) <= 3/4 certified
  double reference = 0;     // 1 / sqrt(N)
  double min_alpha_upper = 0, max_alpha_upper = 0;
};
SubsetAlphaReport random_subset_alpha(int64_t H, uint64_t N, uint64_t trials, uint64_t seed, unsigned threads = 1);

}  // namespace irrlab
