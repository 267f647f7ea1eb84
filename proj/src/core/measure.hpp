#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "common.hpp"

namespace irrlab {

// A finitely supported probability measure on the integers.
class Measure {
 public:
  enum class Kind { Box, Uniform, Weighted };

  static Measure box(int64_t lo, int64_t hi);
  static Measure uniform(std::vector<int64_t> atoms);
  static Measure weighted(std::vector<int64_t> atoms, std::vector<mpq_class> weights);
  static Measure point(int64_t a) { return box(a, a); }

  Kind kind() const { return kind_; }
  uint64_t size() const;
  int64_t atom(uint64_t i) const;
  mpq_class weight(uint64_t i) const;
  int64_t min_atom() const;
  int64_t max_atom() const;
  int64_t box_lo() const { return lo_; }
  int64_t box_hi() const { return hi_; }

  // Integer weights w_i with w_i / weight_denominator() = weight(i).
  mpz_class int_weight(uint64_t i) const;
  mpz_class weight_denominator() const;

  mpq_class residue_mass(int64_t q, int64_t r) const;
  // Integer masses of each residue class mod q over weight_denominator().
  std::vector<mpz_class> residue_counts(int64_t q) const;
  bool residue_uniform(int64_t q) const;

  int64_t sample(Stream& rng) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Box;
  int64_t lo_ = 0, hi_ = 0;
  std::vector<int64_t> atoms_;
  std::vector<mpq_class> weights_;
  std::vector<mpz_class> int_weights_;
  mpz_class denom_ = 1;
  std::vector<double> cumulative_;
};

// Coefficient laws mu_0, mu_1, ...; indices past the explicit list use the
// default (last) measure.
class MeasureSequence {
 public:
  MeasureSequence() = default;
  explicit MeasureSequence(Measure m, std::string spec = {});
  MeasureSequence(std::vector<Measure> explicit_terms, Measure fallback, std::string spec = {});

  const Measure& at(std::size_t j) const;
  std::size_t explicit_count() const { return terms_.size(); }
  bool iid() const { return terms_.empty(); }
  const std::string& spec() const { return spec_; }
  // Indices in [0, n) grouped by measure: returns one representative index per
  // distinct measure object.
  std::vector<std::size_t> distinct_indices(std::size_t n) const;

 private:
  std::vector<std::shared_ptr<const Measure>> terms_;
  std::shared_ptr<const Measure> fallback_;
  std::string spec_;
};

// Measure-spec language:
//   box:LO..HI            uniform on the integers LO..HI
//   set:@PATH             uniform on the integers listed in PATH
//   powers:s=S,H=H        uniform on {k^S : 1 <= k <= H}
//   weighted:@PATH        lines "atom num/den"
//   delta:A               point mass
//   seq:S0|S1|...|SD      per-index measures, SD used for all later indices
Measure parse_measure(const std::string& spec);
MeasureSequence parse_measure_sequence(const std::string& spec);

}  // namespace irrlab

namespace irrlab {

// True when every mu_j, j < n, is uniform on the residues mod q.
bool residue_uniform_prefix(const MeasureSequence& mus, std::size_t n, int64_t q);

}  // namespace irrlab
