#include "galois.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anatomy.hpp"
#include "common.hpp"
#include "fpoly.hpp"
#include "numtheory.hpp"

namespace irrlab {

const char* outcome_name(GaloisOutcome o) {
  switch (o) {
    case GaloisOutcome::CertifiedAnOrSn:
      return "certified_An_or_Sn";
    case GaloisOutcome::TransitiveOnly:
      return "transitive_only";
    case GaloisOutcome::NoCertificate:
      return "no_certificate";
    case GaloisOutcome::Reducible:
      return "reducible";
  }
  return "no_certificate";
}

namespace {

struct Reduction {
  bool squarefree = false;
  Partition type;
};

Reduction reduce_at(const ZPoly& a, uint64_t p) {
  Reduction r;
  const FpPoly ap = a.reduce(p);
  if (!is_squarefree(ap)) return r;
  r.squarefree = true;
  std::vector<unsigned> parts;
  for (auto& [d, c] : distinct_degree_counts(ap))
    for (unsigned i = 0; i < c; ++i) parts.push_back(d);
  r.type = Partition(std::move(parts));
  return r;
}

// Exponent m with g^m a single q-cycle, if L/q works.
std::optional<uint64_t> prime_cycle_exponent(const Partition& type, unsigned q) {
  uint64_t L = 1;
  for (unsigned part : type.parts) {
    L = std::lcm(L, static_cast<uint64_t>(part));
    if (L > (1ULL << 62)) return std::nullopt;
  }
  if (L % q) return std::nullopt;
  const uint64_t m = L / q;
  const Partition pw = cycle_power(type, m);
  unsigned nontrivial = 0;
  for (unsigned part : pw.parts) {
    if (part == 1) continue;
    if (part != q) return std::nullopt;
    ++nontrivial;
  }
  if (nontrivial != 1) return std::nullopt;
  return m;
}

}  // namespace

FrobeniusCertificate frobenius_certify(const ZPoly& a, uint64_t budget, unsigned threads) {
  if (!a.is_monic()) throw DomainError("polynomial must be monic");
  if (a.degree() < 2) throw DomainError("polynomial must have degree >= 2");
  if (a.degree() > 400) throw CapExceeded("degree above 400");
  FrobeniusCertificate cert;
  const auto n = static_cast<unsigned>(a.degree());
  cert.n = n;
  if (sgn(a.coeff(0)) == 0) {
    cert.outcome = GaloisOutcome::Reducible;
    return cert;
  }
  bool transitive = false, primitive = n <= 3, certified = false;
  const bool n_prime = is_prime(n);

  uint64_t last = 1;
  const uint64_t batch = std::max<uint64_t>(8, 4ULL * std::max(1u, threads));
  while (cert.primes_examined < budget && !certified) {
    std::vector<uint64_t> ps;
    while (ps.size() < batch && cert.primes_examined + ps.size() < budget) ps.push_back(last = next_prime(last));
    std::vector<Reduction> red(ps.size());
    parallel_for(ps.size(), threads, [&](std::size_t i) { red[i] = reduce_at(a, ps[i]); });
    for (std::size_t i = 0; i < ps.size() && !certified; ++i) {
      ++cert.primes_examined;
      FrobeniusEvidence ev;
      ev.prime = ps[i];
      ev.squarefree = red[i].squarefree;
      if (!red[i].squarefree) {
        ++cert.skipped_nonsquarefree;
      } else {
        const Partition& type = red[i].type;
        ev.type = type;
        if (type.size() == 1) {
          ++cert.irreducible_reductions;
          if (!transitive) {
            transitive = true;
            cert.transitive_prime = ps[i];
          }
        }
        if (cert.primitive_reason.empty()) {
          if (n <= 3) {
            cert.primitive_reason = "degree at most 3";
          } else if (n_prime) {
            cert.primitive_reason = "prime degree";
          } else if (type.size() == 2 && type.parts[0] == 1) {
            cert.primitive_reason = "cycle type (1,n-1): doubly transitive";
            cert.primitive_prime = ps[i];
          } else {
            for (unsigned part : type.parts)
              if (2 * part > n && is_prime(part)) {
                cert.primitive_reason = "prime cycle length " + std::to_string(part) + " > n/2";
                cert.primitive_prime = ps[i];
                break;
              }
          }
        }
        if (cert.cycle_q == 0) {
          for (unsigned q = 2; q <= n; ++q) {
            if (!is_prime(q) || !(q <= 3 || q + 3 <= n)) continue;
            if (auto m = prime_cycle_exponent(type, q)) {
              cert.cycle_q = q;
              cert.cycle_prime = ps[i];
              cert.cycle_exponent = *m;
              break;
            }
          }
        }
      }
      primitive = transitive && !cert.primitive_reason.empty();
      certified = transitive && (n <= 3 || (primitive && cert.cycle_q != 0));
      ev.conclusion_so_far = certified ? "certified_An_or_Sn" : primitive ? "primitive" : transitive ? "transitive" : "none";
      cert.evidence.push_back(std::move(ev));
    }
  }
  cert.outcome = certified ? GaloisOutcome::CertifiedAnOrSn
                 : transitive ? GaloisOutcome::TransitiveOnly
                              : GaloisOutcome::NoCertificate;
  return cert;
}

NuReport nu_checks(const MeasureSequence& mus, unsigned n, uint64_t p, bool exhaustive, uint64_t samples,
                   uint64_t seed, unsigned threads, uint64_t cap) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!is_prime(p)) throw DomainError("p must be prime");
  NuReport rep;
  rep.n = n;
  rep.p = p;
  rep.exhaustive = exhaustive;
  rep.residue_uniform = residue_uniform_prefix(mus, n, static_cast<int64_t>(p));
  if (exhaustive) {
    double total = 1;
    for (unsigned i = 0; i < n; ++i) total *= static_cast<double>(p);
    if (total > static_cast<double>(cap)) throw CapExceeded("p^n exceeds the enumeration cap");
    // Per-index residue laws mod p.
    std::vector<std::vector<double>> law(n);
    for (unsigned j = 0; j < n; ++j) {
      const auto counts = mus.at(j).residue_counts(static_cast<int64_t>(p));
      const mpz_class den = mus.at(j).weight_denominator();
      for (auto& c : counts) law[j].push_back(mpq_class(c, den).get_d());
    }
    const auto count = static_cast<uint64_t>(total);
    const uint64_t chunk = 1024;
    const uint64_t chunks = (count + chunk - 1) / chunk;
    std::vector<std::map<Partition, double>> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
      for (uint64_t idx = c * chunk; idx < std::min(count, (c + 1) * chunk); ++idx) {
        const FpPoly a = FpPoly::monic_from_index(p, n, idx);
        double w = 1;
        if (rep.residue_uniform) {
          w = 1 / total;
        } else {
          for (unsigned j = 0; j < n; ++j) w *= law[j][a.coeff(j)];
        }
        if (w == 0) continue;
        partial[c][factorization_type(a).rho] += w;
      }
    });
    for (auto& part : partial)
      for (auto& [rho, w] : part) rep.distribution[rho] += w;
  } else {
    if (samples == 0) throw DomainError("sample count must be positive");
    rep.samples = samples;
    std::vector<Partition> types(samples);
    parallel_for(samples, threads, [&](std::size_t s) {
      Stream rng(seed, s);
      types[s] = factorization_type(sample_reduction(mus, n, p, rng)).rho;
    });
    for (auto& t : types) rep.distribution[t] += 1.0 / static_cast<double>(samples);
  }
  for (auto& [rho, w] : rep.distribution) rep.total_mass += w;

  auto se = [&](double v) {
    return exhaustive ? 0.0 : std::sqrt(std::max(v * (1 - v), 0.0) / static_cast<double>(samples));
  };
  auto mass_where = [&](auto&& pred) {
    double v = 0;
    for (auto& [rho, w] : rep.distribution)
      if (pred(rho)) v += w;
    return v;
  };
  for (unsigned k = 2; 4 * k <= n; ++k)
    for (unsigned l = k; 4 * l <= n; ++l) {
      NuPair pr;
      pr.k = k;
      pr.l = l;
      pr.value = mass_where([&](const Partition& rho) {
        const auto ck = std::count(rho.parts.begin(), rho.parts.end(), k);
        const auto cl = std::count(rho.parts.begin(), rho.parts.end(), l);
        return k == l ? ck >= 2 : (ck >= 1 && cl >= 1);
      });
      pr.stderr_value = se(pr.value);
      pr.bound = 2.0 / (static_cast<double>(k) * l);
      pr.ok = pr.value - 5 * pr.stderr_value <= pr.bound;
      rep.pairs_ok = rep.pairs_ok && pr.ok;
      rep.pairs.push_back(pr);
    }
  for (unsigned k = 1; k <= n; ++k) {
    NuSubsetSum s;
    s.k = k;
    s.value = mass_where([&](const Partition& rho) { return has_subset_sum(rho.parts, k); });
    s.stderr_value = se(s.value);
    rep.subset_sums.push_back(s);
  }
  if (n >= 3) {
    const auto top = static_cast<unsigned>(std::floor(n / std::log(static_cast<double>(n))));
    for (unsigned m = 1; m <= top; ++m) {
      double L = 0;
      for (unsigned k = 1; k <= m; ++k) L += 1.0 / k;
      for (double t : {0.25, 0.5, 0.75}) {
        NuTail tail;
        tail.m = m;
        tail.t = t;
        tail.L = L;
        tail.value = mass_where([&](const Partition& rho) {
          return static_cast<double>(std::count_if(rho.parts.begin(), rho.parts.end(),
                                                   [&](unsigned x) { return x <= m; })) <= t * L;
        });
        tail.envelope = std::exp(-(t * std::log(t) - t + 1) * L);
        rep.tails.push_back(tail);
      }
    }
  }
  return rep;
}

}  // namespace irrlab
