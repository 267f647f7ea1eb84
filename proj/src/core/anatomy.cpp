#include "anatomy.hpp"

#include <cmath>

#include "common.hpp"
#include "numtheory.hpp"

namespace irrlab {
namespace {

mpz_class pow_ui(uint64_t p, unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), p, e);
  return out;
}

// pi_p(k) without the factor T.
mpz_class irreducibles_except_t(uint64_t p, unsigned k) { return count_irreducibles(p, k) - (k == 1 ? 1 : 0); }

void require_samples(uint64_t samples) {
  if (samples == 0) throw DomainError("sample count must be positive");
}

double stderr_of(double sum, double sum_sq, uint64_t count) {
  const double mean = sum / static_cast<double>(count);
  const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
  return std::sqrt(var / static_cast<double>(count));
}

double binomial_stderr(double ph, uint64_t count) {
  return std::sqrt(std::max(ph * (1 - ph), 0.0) / static_cast<double>(count));
}

}  // namespace

FpPoly sample_reduction(const MeasureSequence& mus, unsigned n, uint64_t p, Stream& rng) {
  std::vector<uint64_t> c(n + 1);
  for (unsigned j = 0; j < n; ++j)
    c[j] = static_cast<uint64_t>(floor_mod(mus.at(j).sample(rng), static_cast<int64_t>(p)));
  c[n] = 1;
  return FpPoly(p, std::move(c));
}

mpq_class smooth_degree_expectation(uint64_t p, unsigned n, unsigned m) {
  mpq_class total = 0;
  for (unsigned k = 1; k <= std::min(m, n); ++k) {
    mpq_class inner = 0;
    for (unsigned j = 1; j * k <= n; ++j) inner += mpq_class(mpz_class(1), pow_ui(p, j * k));
    total += irreducibles_except_t(p, k) * k * inner;
  }
  total.canonicalize();
  return total;
}

SmoothStats smooth_degree_stats(const MeasureSequence& mus, unsigned n, uint64_t p, unsigned m, uint64_t samples,
                                uint64_t seed, unsigned threads) {
  require_samples(samples);
  if (m > n) throw DomainError("m must not exceed n");
  if (!is_prime(p)) throw DomainError("p must be prime");
  std::vector<unsigned> degs(samples);
  parallel_for(samples, threads, [&](std::size_t s) {
    Stream rng(seed, s);
    const FpPoly a = sample_reduction(mus, n, p, rng);
    degs[s] = m == 0 ? 0 : static_cast<unsigned>(smooth_rough_split(a, m, seed).smooth.degree());
  });
  SmoothStats out;
  out.n = n;
  out.m = m;
  out.p = p;
  out.samples = samples;
  out.seed = seed;
  out.histogram.assign(n + 1, 0);
  double sum = 0, sum_sq = 0;
  for (unsigned d : degs) {
    ++out.histogram[d];
    sum += d;
    sum_sq += static_cast<double>(d) * d;
  }
  out.mean = sum / static_cast<double>(samples);
  out.stderr_mean = stderr_of(sum, sum_sq, samples);
  out.exact_mean = smooth_degree_expectation(p, n, m);
  out.exact_reference_applies = residue_uniform_prefix(mus, n, static_cast<int64_t>(p));
  const double diff = out.mean - out.exact_mean.get_d();
  out.z_score = out.stderr_mean > 0 ? diff / out.stderr_mean : (diff == 0 ? 0 : INFINITY);
  for (unsigned u = 2; u <= 8; ++u) {
    uint64_t above = 0;
    for (unsigned d : degs) above += d > u * m;
    out.tail.emplace_back(u, static_cast<double>(above) / static_cast<double>(samples));
  }
  out.decay = fit_exponential_decay(out.tail);
  return out;
}

DecayFit fit_exponential_decay(const std::vector<std::pair<unsigned, double>>& xy) {
  DecayFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : xy) {
    if (!(y > 0)) continue;
    const double ly = std::log(y);
    sx += x;
    sy += ly;
    sxx += static_cast<double>(x) * x;
    sxy += x * ly;
    ++fit.points;
  }
  if (fit.points == 0) return fit;
  const double k = fit.points;
  const double den = k * sxx - sx * sx;
  const double slope = fit.points >= 2 && den > 0 ? (k * sxy - sx * sy) / den : 0;
  fit.rate = -slope;
  fit.intercept = (sy - slope * sx) / k;
  return fit;
}

mpq_class additive_expectation(uint64_t p, unsigned n, const std::vector<bool>& f, unsigned m, AdditiveMode mode) {
  mpq_class total = 0;
  for (unsigned k = 1; k <= std::min(m, n); ++k) {
    if (k >= f.size() || !f[k]) continue;
    mpq_class inner = 0;
    if (mode == AdditiveMode::Distinct) {
      inner = mpq_class(mpz_class(1), pow_ui(p, k));
    } else {
      for (unsigned j = 1; j * k <= n; ++j) inner += mpq_class(mpz_class(1), pow_ui(p, j * k));
    }
    total += irreducibles_except_t(p, k) * inner;
  }
  total.canonicalize();
  return total;
}

AdditiveTail additive_tail(const MeasureSequence& mus, unsigned n, uint64_t p, const std::vector<bool>& f, unsigned m,
                           double t, AdditiveMode mode, uint64_t samples, uint64_t seed, unsigned threads) {
  require_samples(samples);
  if (m > n) throw DomainError("m must not exceed n");
  if (!(t > 0)) throw DomainError("t must be positive");
  AdditiveTail out;
  out.n = n;
  out.m = m;
  out.p = p;
  out.t = t;
  out.mode = mode;
  out.samples = samples;
  out.seed = seed;
  out.hypothesis_ok = n >= 2 && m <= static_cast<double>(n) / std::log(static_cast<double>(n));
  out.L = 0;
  for (unsigned k = 1; k <= m; ++k)
    if (k < f.size() && f[k]) out.L += mpq_class(irreducibles_except_t(p, k), pow_ui(p, k));
  out.L.canonicalize();
  const double L = out.L.get_d();

  std::vector<unsigned> values(samples);
  parallel_for(samples, threads, [&](std::size_t s) {
    Stream rng(seed, s);
    const FpPoly a = sample_reduction(mus, n, p, rng);
    unsigned v = 0;
    if (m > 0) {
      const FpPoly t_poly = FpPoly::monomial(p, 1);
      for (auto& [g, e] : factor(a, seed)) {
        const auto d = static_cast<unsigned>(g.degree());
        if (d > m || g == t_poly || d >= f.size() || !f[d]) continue;
        v += mode == AdditiveMode::Distinct ? 1 : e;
      }
    }
    values[s] = v;
  });
  out.histogram.assign(n + 1, 0);
  double sum = 0, sum_sq = 0;
  uint64_t low = 0, high = 0;
  for (unsigned v : values) {
    ++out.histogram[v];
    sum += v;
    sum_sq += static_cast<double>(v) * v;
    low += v <= t * L;
    high += v >= t * L;
  }
  out.lower_tail = static_cast<double>(low) / static_cast<double>(samples);
  out.upper_tail = static_cast<double>(high) / static_cast<double>(samples);
  out.envelope = std::exp(-(t * std::log(t) - t + 1) * L);
  out.mean = sum / static_cast<double>(samples);
  out.stderr_mean = stderr_of(sum, sum_sq, samples);
  out.exact_mean = additive_expectation(p, n, f, m, mode);
  out.exact_reference_applies = residue_uniform_prefix(mus, n, static_cast<int64_t>(p));
  return out;
}

std::vector<uint64_t> divisor_degree_counts(uint64_t p, unsigned n, unsigned threads, uint64_t cap) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  double total = 1;
  for (unsigned i = 0; i < n; ++i) total *= static_cast<double>(p);
  if (total > static_cast<double>(cap)) throw CapExceeded("p^n exceeds the enumeration cap");
  const auto count = static_cast<uint64_t>(total);
  const uint64_t chunk = 1024;
  const uint64_t chunks = (count + chunk - 1) / chunk;
  std::vector<std::vector<uint64_t>> partial(chunks, std::vector<uint64_t>(n + 1, 0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    for (uint64_t idx = c * chunk; idx < std::min(count, (c + 1) * chunk); ++idx) {
      const auto set = divisor_degree_set(FpPoly::monic_from_index(p, n, idx));
      for (unsigned k = 0; k <= n; ++k) partial[c][k] += set[k];
    }
  });
  std::vector<uint64_t> out(n + 1, 0);
  for (auto& part : partial)
    for (unsigned k = 0; k <= n; ++k) out[k] += part[k];
  return out;
}

double divisor_density_reference(unsigned k) {
  return k >= 2 ? std::pow(k, -kEta) * std::pow(std::log(static_cast<double>(k)), -1.5) : 1.0;
}

DivisorDensity divisor_degree_density(uint64_t p, unsigned n, unsigned k, bool exact, uint64_t samples,
                                      uint64_t seed, unsigned threads, uint64_t cap) {
  DivisorDensity out;
  out.p = p;
  out.n = n;
  out.k = k;
  out.exact = exact;
  out.reference = divisor_density_reference(k);
  if (k > n || k == 0 || k == n) {
    // Trivial cases need no enumeration.
    out.total = exact ? static_cast<uint64_t>(std::pow(static_cast<double>(p), n)) : samples;
    out.hits = k > n ? 0 : out.total;
    out.fraction = k > n ? 0.0 : 1.0;
    return out;
  }
  if (exact) {
    const auto counts = divisor_degree_counts(p, n, threads, cap);
    out.total = static_cast<uint64_t>(std::pow(static_cast<double>(p), n));
    out.hits = counts[k];
    out.fraction = static_cast<double>(out.hits) / static_cast<double>(out.total);
    return out;
  }
  require_samples(samples);
  std::vector<uint8_t> hit(samples);
  parallel_for(samples, threads, [&](std::size_t s) {
    Stream rng(seed, s);
    std::vector<uint64_t> c(n + 1);
    for (unsigned j = 0; j < n; ++j) c[j] = rng.below(p);
    c[n] = 1;
    hit[s] = divisor_degree_set(FpPoly(p, std::move(c)))[k];
  });
  out.total = samples;
  for (auto h : hit) out.hits += h;
  out.fraction = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.stderr_fraction = binomial_stderr(out.fraction, samples);
  return out;
}

std::vector<unsigned> normal_checkpoints(unsigned n, unsigned m0) {
  if (n < 3) throw DomainError("n must be >= 3");
  const auto top = static_cast<unsigned>(std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
  if (m0 < 1 || m0 > top) throw DomainError("m0 must lie in [1, n / log n]");
  std::vector<unsigned> out;
  for (uint64_t m = m0;; m *= 2) {
    if (m >= top) {
      out.push_back(top);
      break;
    }
    out.push_back(static_cast<unsigned>(m));
  }
  return out;
}

NormalEventRate normal_event_rate(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes, double eps,
                                  unsigned m0, uint64_t samples, uint64_t seed, unsigned threads) {
  require_samples(samples);
  if (!(eps > 0)) throw DomainError("eps must be positive");
  NormalEventRate out;
  out.n = n;
  out.m0 = m0;
  out.eps = eps;
  out.primes = primes.primes;
  out.checkpoints = normal_checkpoints(n, m0);
  out.samples = samples;
  out.seed = seed;
  std::vector<uint8_t> good(samples);
  parallel_for(samples, threads, [&](std::size_t s) {
    Stream rng(seed, s);
    std::vector<int64_t> coeffs(n + 1, 1);
    for (unsigned j = 0; j < n; ++j) coeffs[j] = mus.at(j).sample(rng);
    bool ok = true;
    for (uint64_t p : primes.primes) {
      const auto fac = factor(FpPoly::from_signed(p, coeffs), seed);
      const FpPoly t = FpPoly::monomial(p, 1);
      for (unsigned m : out.checkpoints) {
        double deg = 0, log_tau = 0;
        for (auto& [g, e] : fac) {
          if (static_cast<unsigned>(g.degree()) > m || g == t) continue;
          deg += static_cast<double>(g.degree()) * e;
          log_tau += std::log(static_cast<double>(e) + 1);
        }
        const double lm = std::log(static_cast<double>(m));
        if (deg > eps * m * lm || log_tau > (1 + eps) * std::log(2.0) * lm) ok = false;
      }
    }
    good[s] = ok;
  });
  for (auto g : good) out.hits += g;
  out.rate = static_cast<double>(out.hits) / static_cast<double>(samples);
  return out;
}

}  // namespace irrlab
