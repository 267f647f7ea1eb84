#include "experiments.hpp"

#include <cmath>
#include <set>

#include "common.hpp"
#include "fourier.hpp"
#include "measure.hpp"

namespace irrlab {

Proportion proportion(uint64_t hits, uint64_t total) {
  Proportion p;
  p.hits = hits;
  p.total = total;
  if (total == 0) return p;
  const double n = static_cast<double>(total);
  const double ph = static_cast<double>(hits) / n;
  const double z = 1.959963984540054;
  const double denom = 1 + z * z / n;
  const double center = (ph + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom;
  p.estimate = ph;
  p.lo = std::max(0.0, center - half);
  p.hi = std::min(1.0, center + half);
  p.stderr_estimate = std::sqrt(ph * (1 - ph) / n);
  return p;
}

namespace {

enum Outcome : uint8_t { kRejected, kStage0Red, kStage1Irr, kStage2Irr, kStage2Red, kUndecided };

struct SampleResult {
  Outcome outcome = kRejected;
  bool root_minus = false, root_plus = false;
};

}  // namespace

McReport mc_irreducibility(const McConfig& config, unsigned threads) {
  const MeasureSequence mus = parse_measure_sequence(config.measure);
  if (config.n < 1) throw DomainError("n must be >= 1");
  if (config.samples == 0) throw DomainError("sample count must be positive");
  McReport rep;
  rep.config = config;
  std::vector<SampleResult> results(config.samples);
  parallel_for(config.samples, threads, [&](std::size_t s) {
    Stream rng(config.seed, s);
    std::vector<int64_t> c(config.n + 1, 1);
    for (unsigned j = 0; j < config.n; ++j) c[j] = mus.at(j).sample(rng);
    SampleResult& r = results[s];
    if (c[0] == 0) return;
    const ZPoly a = ZPoly::from_ints(c);
    r.root_minus = sgn(a.eval(-1)) == 0;
    r.root_plus = sgn(a.eval(1)) == 0;
    const auto res = irreducible_over_Z(a, config.budget);
    switch (res.verdict) {
      case ZVerdict::Irreducible:
        r.outcome = res.stage == 2 ? kStage2Irr : kStage1Irr;
        break;
      case ZVerdict::Reducible:
        r.outcome = res.stage == 2 ? kStage2Red : kStage0Red;
        break;
      case ZVerdict::Undecided:
        r.outcome = kUndecided;
        break;
    }
  });
  uint64_t irr = 0, red = 0, und = 0, minus = 0, plus = 0;
  rep.raw = config.samples;
  for (auto& r : results) {
    switch (r.outcome) {
      case kRejected:
        ++rep.rejected;
        continue;
      case kStage0Red:
        ++rep.stage0_reducible;
        ++red;
        break;
      case kStage1Irr:
        ++rep.stage1_irreducible;
        ++irr;
        break;
      case kStage2Irr:
        ++rep.stage2_irreducible;
        ++irr;
        break;
      case kStage2Red:
        ++rep.stage2_reducible;
        ++red;
        break;
      case kUndecided:
        ++und;
        break;
    }
    ++rep.conditioned;
    minus += r.root_minus;
    plus += r.root_plus;
  }
  rep.irreducible = proportion(irr, rep.conditioned);
  rep.reducible = proportion(red, rep.conditioned);
  rep.undecided = proportion(und, rep.conditioned);
  rep.root_at_minus_one = proportion(minus, rep.conditioned);
  rep.root_at_one = proportion(plus, rep.conditioned);
  const Measure& m0 = mus.at(0);
  if (mus.iid() && m0.kind() == Measure::Kind::Box && m0.box_lo() == 1 && m0.box_hi() >= 2) {
    rep.box_H = m0.box_hi();
    const double H = static_cast<double>(m0.box_hi());
    rep.rivin_bound = config.n * (1 + std::log(H)) / H;
    const double b = std::min(rep.rivin_bound, 1.0);
    const double sigma =
        rep.conditioned ? std::sqrt(std::max(b * (1 - b), 1e-300) / static_cast<double>(rep.conditioned)) : 0;
    rep.rivin_ok = rep.reducible.estimate <= rep.rivin_bound + 5 * sigma;
  }
  return rep;
}

SubsetAlphaReport random_subset_alpha(int64_t H, uint64_t N, uint64_t trials, uint64_t seed, unsigned threads) {
  if (H < 1) throw DomainError("H must be >= 1");
  const uint64_t M = 2 * static_cast<uint64_t>(H) + 1;
  if (N < 1 || N > M) throw DomainError("N must lie in [1, 2H + 1]");
  if (trials == 0) throw DomainError("trial count must be positive");
  SubsetAlphaReport rep;
  rep.H = H;
  rep.N = N;
  rep.trials = trials;
  rep.seed = seed;
  rep.reference = 1 / std::sqrt(static_cast<double>(N));
  std::vector<double> alpha(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Stream rng(seed, t);
    // Floyd's sampling of an N-subset of [0, M).
    std::set<uint64_t> chosen;
    for (uint64_t j = M - N; j < M; ++j) {
      const uint64_t x = rng.below(j + 1);
      if (!chosen.insert(x).second) chosen.insert(j);
    }
    std::vector<int64_t> atoms;
    for (uint64_t x : chosen) atoms.push_back(static_cast<int64_t>(x) - H);
    alpha[t] = alpha_beta(Measure::uniform(std::move(atoms)), 210).alpha.upper();
  });
  uint64_t ok = 0;
  rep.min_alpha_upper = alpha[0];
  rep.max_alpha_upper = alpha[0];
  for (double a : alpha) {
    ok += a <= 0.75;
    rep.min_alpha_upper = std::min(rep.min_alpha_upper, a);
    rep.max_alpha_upper = std::max(rep.max_alpha_upper, a);
  }
  rep.certified = proportion(ok, trials);
  return rep;
}

}  // namespace irrlab
