#include "fourier.hpp"

#include <cmath>
#include <numeric>

#include "numtheory.hpp"

namespace irrlab {
namespace {

constexpr double kUnit = 0x1.0p-53;

int64_t mod_mul(int64_t a, int64_t b, int64_t m) {
  __int128 r = static_cast<__int128>(a) * b % m;
  return static_cast<int64_t>(r < 0 ? r + m : r);
}

// Sum of nonnegative enclosures with one rounding-error bound for the whole
// accumulation instead of per-step outward rounding.
CertifiedInterval sum_nonnegative(const std::vector<CertifiedInterval>& v, const int32_t* idx, std::size_t count) {
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < count; ++i) {
    lo += v[idx[i]].lower();
    hi += v[idx[i]].upper();
  }
  const double g = static_cast<double>(count + 2) * kUnit;
  lo = std::nextafter(lo - g * lo, 0.0);
  hi = std::nextafter(hi + g * hi, INFINITY);
  return {std::max(lo, 0.0), hi};
}

struct Buckets {
  std::vector<int64_t> residues;
  std::vector<double> mass;
  std::vector<double> mass_err;
  std::vector<mpq_class> exact;
};

Buckets bucket(const Measure& mu, int64_t P) {
  Buckets b;
  const auto counts = mu.residue_counts(P);
  const mpz_class denom = mu.weight_denominator();
  for (int64_t r = 0; r < P; ++r) {
    if (sgn(counts[r]) == 0) continue;
    mpq_class q(counts[r], denom);
    q.canonicalize();
    b.residues.push_back(r);
    b.mass.push_back(q.get_d());
    b.mass_err.push_back(q.get_d() * 2 * kUnit);
    b.exact.push_back(q);
  }
  return b;
}

ComplexInterval box_fourier(const Measure& mu, int64_t k, int64_t Q) {
  const int64_t N = static_cast<int64_t>(mu.size());
  if (k == 0 || N == 1) return unit_root(mod_mul(mu.box_lo(), k, Q), Q);
  const int64_t nk = mod_mul(N, k, Q);
  if (nk == 0) return {CertifiedInterval(0.0), CertifiedInterval(0.0)};
  // e(lo k/Q) e((N-1)k/(2Q)) sin(pi N k/Q) / (N sin(pi k/Q))
  const int64_t twoQ = 2 * Q;
  const int64_t center = mod_mul(floor_mod(2 * floor_mod(mu.box_lo(), twoQ) + floor_mod(N - 1, twoQ), twoQ), k, twoQ);
  const auto ratio = sin_pi_ratio(mod_mul(N, k, twoQ), Q) /
                     (CertifiedInterval(static_cast<double>(N)) * sin_pi_ratio(k, Q));
  const auto rot = unit_root(center, twoQ);
  return {rot.re * ratio, rot.im * ratio};
}

std::vector<CertifiedInterval> box_magnitudes(int64_t N, int64_t P, const std::vector<CertifiedInterval>& sines) {
  std::vector<CertifiedInterval> out(static_cast<std::size_t>(P));
  out[0] = CertifiedInterval(1.0);
  const CertifiedInterval n(static_cast<double>(N));
  for (int64_t t = 1; t < P; ++t) {
    if (N == 1) {
      out[t] = CertifiedInterval(1.0);
      continue;
    }
    const int64_t r = mod_mul(N, t, P);
    out[t] = r == 0 ? CertifiedInterval(0.0) : sines[r] / (n * sines[t]);
    if (out[t].upper() > 1.0) out[t] = CertifiedInterval(std::min(out[t].lower(), 1.0), 1.0);
  }
  return out;
}

std::vector<CertifiedInterval> sine_table(int64_t P) {
  std::vector<CertifiedInterval> s(static_cast<std::size_t>(P));
  for (int64_t r = 0; r < P; ++r) s[r] = sin_pi_ratio(r, P);
  return s;
}

}  // namespace

RationalPhase RationalPhase::reduced() const {
  if (Q == 0) throw DomainError("phase has zero denominator");
  int64_t q = Q, kk = k;
  if (q < 0) {
    q = -q;
    kk = -kk;
  }
  kk = floor_mod(kk, q);
  const int64_t g = std::gcd(kk, q);
  return {kk / g, q / g};
}

ComplexInterval fourier(const Measure& mu, RationalPhase phase) {
  const auto ph = phase.reduced();
  if (ph.k == 0) return {CertifiedInterval(1.0), CertifiedInterval(0.0)};
  if (mu.kind() == Measure::Kind::Box) return box_fourier(mu, ph.k, ph.Q);
  const auto b = bucket(mu, ph.Q);
  if (b.residues.size() == 1) {
    const auto root = unit_root(mod_mul(b.residues[0], ph.k, ph.Q), ph.Q);
    return {root.re, root.im};
  }
  ErrorTrackedSum re, im;
  for (std::size_t i = 0; i < b.residues.size(); ++i) {
    const auto root = unit_root(mod_mul(b.residues[i], ph.k, ph.Q), ph.Q);
    const double w = b.mass[i];
    const double werr = b.mass_err[i] + 2 * kUnit * w;
    re.add(w * root.re.mid(), werr + w * root.re.width());
    im.add(w * root.im.mid(), werr + w * root.im.width());
  }
  return {re.enclosure(), im.enclosure()};
}

std::vector<CertifiedInterval> magnitude_table(const Measure& mu, int64_t P) {
  if (P < 1) throw DomainError("modulus must be positive");
  if (mu.kind() == Measure::Kind::Box) return box_magnitudes(static_cast<int64_t>(mu.size()), P, sine_table(P));
  const auto b = bucket(mu, P);
  std::vector<CertifiedInterval> out(static_cast<std::size_t>(P));
  out[0] = CertifiedInterval(1.0);
  if (b.residues.size() == 1) {
    for (int64_t t = 1; t < P; ++t) out[t] = CertifiedInterval(1.0);
    return out;
  }
  if (static_cast<double>(P) * static_cast<double>(b.residues.size()) > 4e9)
    throw CapExceeded("Fourier table of size P x support exceeds the work cap");
  std::vector<double> c(static_cast<std::size_t>(P)), s(static_cast<std::size_t>(P)), err(static_cast<std::size_t>(P));
  for (int64_t r = 0; r < P; ++r) {
    const auto root = unit_root(r, P);
    c[r] = root.re.mid();
    s[r] = root.im.mid();
    err[r] = std::max(root.re.width(), root.im.width());
  }
  for (int64_t t = 1; t < P; ++t) {
    ErrorTrackedSum re, im;
    for (std::size_t i = 0; i < b.residues.size(); ++i) {
      const int64_t r = mod_mul(b.residues[i], t, P);
      const double w = b.mass[i];
      const double werr = b.mass_err[i] + 2 * kUnit * w + w * err[r];
      re.add(w * c[r], werr);
      im.add(w * s[r], werr);
    }
    ComplexInterval z{re.enclosure(), im.enclosure()};
    auto m = z.magnitude();
    out[t] = m.upper() > 1.0 ? CertifiedInterval(std::min(m.lower(), 1.0), 1.0) : m;
  }
  return out;
}

std::vector<std::complex<double>> fourier_table(const Measure& mu, int64_t P) {
  std::vector<std::complex<double>> out(static_cast<std::size_t>(P));
  const auto b = bucket(mu, P);
  for (int64_t t = 0; t < P; ++t) {
    std::complex<double> z = 0;
    for (std::size_t i = 0; i < b.residues.size(); ++i) {
      const double angle = 2 * M_PI * static_cast<double>(mod_mul(b.residues[i], t, P)) / static_cast<double>(P);
      z += b.mass[i] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[t] = z;
  }
  return out;
}

void require_squarefree_modulus(int64_t P) {
  if (P <= 1) throw DomainError("modulus P must exceed 1");
  if (!is_squarefree(static_cast<uint64_t>(P))) throw DomainError("modulus P must be squarefree");
}

SplitTable::SplitTable(int64_t P) : P_(P) {
  require_squarefree_modulus(P);
  if (P > (1LL << 31)) throw CapExceeded("modulus too large for split tables");
  for (uint64_t q : divisors(static_cast<uint64_t>(P))) {
    if (q == 1) continue;
    Split sp{static_cast<int64_t>(q), P / static_cast<int64_t>(q), sqrt(CertifiedInterval(static_cast<double>(q))), {}};
    sp.points.reserve(static_cast<std::size_t>(P));
    for (int64_t ell = 0; ell < sp.R; ++ell)
      for (int64_t k = 0; k < sp.Q; ++k) sp.points.push_back(static_cast<int32_t>((k * sp.R + ell * sp.Q) % P));
    splits_.push_back(std::move(sp));
  }
}

AlphaBeta SplitTable::evaluate(const std::vector<CertifiedInterval>& mags) const {
  AlphaBeta out;
  bool first = true;
  for (const auto& sp : splits_) {
    for (int64_t ell = 0; ell < sp.R; ++ell) {
      const auto v = sum_nonnegative(mags, sp.points.data() + ell * sp.Q, static_cast<std::size_t>(sp.Q)) / sp.sqrt_Q;
      if (first || v.upper() > out.alpha.upper()) {
        out.alpha_Q = sp.Q;
        out.alpha_ell = ell;
      }
      out.alpha = first ? v : max(out.alpha, v);
      first = false;
    }
  }
  CertifiedInterval beta(0.0);
  for (int64_t t = 1; t < P_; ++t) beta = max(beta, mags[t]);
  out.beta = beta;
  return out;
}

AlphaBeta alpha_beta(const MeasureSequence& mus, int64_t P, std::size_t n) {
  if (n == 0) throw DomainError("index range is empty");
  SplitTable table(P);
  AlphaBeta best;
  bool first = true;
  for (std::size_t j : mus.distinct_indices(n)) {
    auto ab = table.evaluate(magnitude_table(mus.at(j), P));
    ab.alpha_index = j;
    if (first) {
      best = ab;
    } else {
      const bool take = ab.alpha.upper() > best.alpha.upper();
      const AlphaBeta prev = best;
      best.alpha = max(prev.alpha, ab.alpha);
      best.beta = max(prev.beta, ab.beta);
      if (take) {
        best.alpha_Q = ab.alpha_Q;
        best.alpha_ell = ab.alpha_ell;
        best.alpha_index = j;
      }
    }
    first = false;
  }
  return best;
}

AlphaBeta alpha_beta(const Measure& mu, int64_t P) { return alpha_beta(MeasureSequence(mu), P, 1); }

BoxBound uniform_box_bound(int64_t H, int64_t P) {
  if (H < 1) throw DomainError("uniform_box_bound needs H >= 1");
  if (P < 3) throw DomainError("uniform_box_bound needs P >= 3");
  const CertifiedInterval one(1.0);
  const auto v = (one + CertifiedInterval(static_cast<double>(P - 1)) /
                            (CertifiedInterval(static_cast<double>(H)) * sin_pi_ratio(1, P))) /
                 sqrt(CertifiedInterval(2.0));
  return {v, v.upper() < 1.0};
}

SweepReport certify_alpha_range(int64_t H_lo, int64_t H_hi, int64_t P, unsigned threads) {
  if (H_lo > H_hi) throw DomainError("sweep range is empty");
  if (H_lo < 1) throw DomainError("sweep needs H >= 1");
  SplitTable table(P);
  const auto sines = sine_table(P);
  const auto count = static_cast<std::size_t>(H_hi - H_lo + 1);
  // 0 = failed, 1 = analytic bound, 2 = direct evaluation.
  std::vector<char> verdict(count, 0);
  std::vector<double> upper(count, 0.0);
  parallel_for(count, threads, [&](std::size_t i) {
    const int64_t H = H_lo + static_cast<int64_t>(i);
    if (P >= 3 && uniform_box_bound(H, P).below_one) {
      verdict[i] = 1;
      return;
    }
    const auto ab = table.evaluate(box_magnitudes(H, P, sines));
    upper[i] = ab.alpha.upper();
    verdict[i] = ab.alpha.upper() < 1.0 ? 2 : 0;
  });
  SweepReport rep;
  rep.H_lo = H_lo;
  rep.H_hi = H_hi;
  rep.P = P;
  for (std::size_t i = 0; i < count; ++i) {
    const int64_t H = H_lo + static_cast<int64_t>(i);
    if (verdict[i] == 0) {
      rep.failures.push_back(H);
      continue;
    }
    ++rep.certified;
    if (verdict[i] == 1) {
      ++rep.certified_analytic;
    } else {
      ++rep.certified_direct;
      if (upper[i] > rep.max_direct_alpha_upper) {
        rep.max_direct_alpha_upper = upper[i];
        rep.max_direct_alpha_H = H;
      }
    }
  }
  return rep;
}

ModulusPrimes sth_power_modulus(int64_t s) {
  if (s < 1 || s % 2 == 0) throw DomainError("s must be a positive odd integer");
  ModulusPrimes out;
  for (uint64_t p = 2; out.primes.size() < 4; p = next_prime(p)) {
    if (std::gcd(p - 1, static_cast<uint64_t>(s)) == 1) {
      out.primes.push_back(p);
      out.P *= static_cast<int64_t>(p);
    }
  }
  return out;
}

GoodModulus find_good_modulus(const MeasureSequence& mus, double x, std::size_t n,
                              std::optional<std::pair<uint64_t, uint64_t>> window) {
  uint64_t lo, hi;
  if (window) {
    lo = window->first;
    hi = window->second;
  } else {
    if (!(x >= 2) || x > 1e7) throw DomainError("x must lie in [2, 1e7]");
    lo = static_cast<uint64_t>(std::ceil(x / 2));
    hi = static_cast<uint64_t>(std::floor(x));
  }
  GoodModulus out;
  for (uint64_t p : primes_up_to(hi))
    if (p >= lo) out.window_primes.push_back(p);
  const std::size_t k = out.window_primes.size();
  if (k < 4)
    throw DomainError("fewer than four primes in [" + std::to_string(lo) + "," + std::to_string(hi) + "] (found " +
                      std::to_string(k) + ")");
  const auto& w = out.window_primes;
  bool first = true;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c)
        for (std::size_t d = c + 1; d < k; ++d) {
          const unsigned __int128 prod = static_cast<unsigned __int128>(w[a]) * w[b] * w[c] * w[d];
          if (prod > (1u << 30)) throw CapExceeded("candidate modulus exceeds 2^30");
          if (++out.candidates > 2000) throw CapExceeded("more than 2000 candidate moduli");
          const auto P = static_cast<int64_t>(prod);
          const auto ab = alpha_beta(mus, P, n);
          if (first || ab.alpha.upper() < out.alpha.alpha.upper()) {
            out.alpha = ab;
            out.best = {{w[a], w[b], w[c], w[d]}, P};
            first = false;
          }
        }
  return out;
}

}  // namespace irrlab
