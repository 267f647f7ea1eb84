#include "sieve.hpp"

#include <algorithm>
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

// Squarefree products G of family members with omega(G) <= max_omega and
// deg G <= max_degree, with their omega.
void enumerate_products(const std::vector<FpPoly>& members, std::size_t start, const FpPoly& current,
                        unsigned omega, unsigned max_omega, int max_degree,
                        std::vector<std::pair<FpPoly, unsigned>>& out, std::size_t cap) {
  out.emplace_back(current, omega);
  if (out.size() > cap) throw CapExceeded("too many sieve divisors to enumerate");
  if (omega == max_omega) return;
  for (std::size_t i = start; i < members.size(); ++i) {
    if (current.degree() + members[i].degree() > max_degree) break;  // members sorted by degree
    enumerate_products(members, i + 1, current * members[i], omega + 1, max_omega, max_degree, out, cap);
  }
}

// #{B in M_p(N) : gcd(B, I) = 1 for all I in the family}, from
// prod (1 - u^deg I) / (1 - p u).
mpz_class coprime_count(const IrreducibleFamily& fam, unsigned N) {
  std::vector<mpz_class> poly(N + 1, 0);
  poly[0] = 1;
  for (const auto& I : fam.members) {
    const auto d = static_cast<unsigned>(I.degree());
    for (unsigned k = N + 1; k-- > d;) poly[k] -= poly[k - d];
  }
  mpz_class acc = 0;
  for (unsigned k = 0; k <= N; ++k) acc += poly[k] * pow_ui(fam.p, N - k);
  return acc;
}

}  // namespace

IrreducibleFamily IrreducibleFamily::all_up_to(uint64_t p, unsigned m) {
  IrreducibleFamily fam;
  fam.p = p;
  fam.m = m;
  const FpPoly t = FpPoly::monomial(p, 1);
  for (unsigned k = 1; k <= m; ++k)
    for (auto& f : monic_irreducibles(p, k))
      if (f != t) fam.members.push_back(f);
  return fam;
}

void IrreducibleFamily::validate() const {
  if (!is_prime(p)) throw DomainError("family prime is not prime");
  const FpPoly t = FpPoly::monomial(p, 1);
  auto sorted = members;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const FpPoly& f = sorted[i];
    if (f.p() != p) throw DomainError("family member over the wrong prime");
    if (f == t) throw DomainError("family must not contain T");
    if (!f.is_monic() || f.degree() < 1 || !is_irreducible(f))
      throw DomainError("family member " + f.str() + " is not a monic irreducible");
    if (static_cast<unsigned>(f.degree()) > m) throw DomainError("family member exceeds the degree bound");
    if (i && sorted[i - 1] == f) throw DomainError("family members must be distinct");
  }
}

unsigned default_truncation(unsigned m) {
  const double l = std::max(1u, m);
  return static_cast<unsigned>(std::ceil(1.5 + 2 * std::log(l)));
}

BonferroniSums bonferroni_sums(const IrreducibleFamily& family, unsigned v) {
  const std::size_t K = std::min<std::size_t>(family.members.size(), 2 * v + 1);
  std::vector<mpq_class> e(K + 1, 0);
  e[0] = 1;
  BonferroniSums out;
  out.full = 1;
  for (const auto& I : family.members) {
    const mpq_class x(mpz_class(1), pow_ui(family.p, static_cast<unsigned long>(I.degree())));
    for (std::size_t k = K; k >= 1; --k) e[k] += e[k - 1] * x;
    out.full *= 1 - x;
  }
  out.lower = 0;
  out.upper = 0;
  for (std::size_t k = 0; k <= K; ++k) {
    const mpq_class term = (k % 2 ? -1 : 1) * e[k];
    if (k <= 2 * v + 1) out.lower += term;
    if (k <= 2 * v) out.upper += term;
  }
  return out;
}

BrunResult brun_upper_bound(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes,
                            const std::vector<FpPoly>& D, const std::vector<IrreducibleFamily>& families,
                            std::optional<std::vector<unsigned>> truncation, uint64_t seed, uint64_t samples,
                            uint64_t cap) {
  const std::size_t np = primes.primes.size();
  if (D.size() != np || families.size() != np) throw DomainError("one D_p and one family per prime");
  for (std::size_t i = 0; i < np; ++i) {
    families[i].validate();
    if (families[i].p != primes.primes[i] || D[i].p() != primes.primes[i])
      throw DomainError("D_p or family over the wrong prime");
    if (!D[i].is_monic()) throw DomainError("D_p must be monic");
  }
  BrunResult r;
  r.truncation = truncation ? *truncation : std::vector<unsigned>{};
  if (!truncation)
    for (auto& f : families) r.truncation.push_back(default_truncation(f.m));
  if (r.truncation.size() != np) throw DomainError("one truncation level per prime");

  r.norm_D = 1;
  r.main_term = 1;
  r.truncated_main = 1;
  mpq_class all_terms = 1;  // sum over every tuple with omega <= 2 v_p of 1/|DG|
  std::vector<std::vector<std::pair<FpPoly, unsigned>>> lists(np);
  for (std::size_t i = 0; i < np; ++i) {
    const uint64_t p = primes.primes[i];
    r.norm_D *= pow_ui(p, static_cast<unsigned long>(D[i].degree()));
    if (families[i].m < 11) r.degree_hypothesis = false;
    const unsigned v = r.truncation[i];
    r.sums.push_back(bonferroni_sums(families[i], v));
    r.main_term *= 2 * r.sums.back().full;
    r.truncated_main *= r.sums.back().upper;

    // Unsigned truncated sum: sum_{k <= 2v} e_k.
    IrreducibleFamily fam = families[i];
    std::sort(fam.members.begin(), fam.members.end());
    const std::size_t K = std::min<std::size_t>(fam.members.size(), 2 * v);
    std::vector<mpq_class> e(K + 1, 0);
    e[0] = 1;
    for (const auto& I : fam.members) {
      const mpq_class x(mpz_class(1), pow_ui(p, static_cast<unsigned long>(I.degree())));
      for (std::size_t k = K; k >= 1; --k) e[k] += e[k - 1] * x;
    }
    mpq_class s = 0;
    for (auto& x : e) s += x;
    all_terms *= s / pow_ui(p, static_cast<unsigned long>(D[i].degree()));

    const int room = static_cast<int>(n) - D[i].degree();
    if (room >= 0) enumerate_products(fam.members, 0, FpPoly::one(p), 0, 2 * v, room, lists[i], 2'000'000);
  }
  r.main_term /= r.norm_D;
  r.truncated_main /= r.norm_D;

  // Tuples with every deg(D_p G_p) <= n need the actual divisibility law;
  // the rest have P(DG | A) = 0 and contribute 1/|DG|.
  const bool uniform = residue_uniform_prefix(mus, n, primes.P);
  double tuple_count = 1;
  for (auto& l : lists) tuple_count *= static_cast<double>(l.size());
  if (tuple_count > 5e6) throw CapExceeded("too many remainder tuples");
  mpq_class covered = 0, deviation = 0;
  std::vector<std::size_t> pick(np, 0);
  if (tuple_count > 0) {
    while (true) {
      mpq_class inv(1);
      std::vector<FpPoly> moduli;
      std::vector<uint64_t> mod_primes;
      for (std::size_t i = 0; i < np; ++i) {
        const FpPoly DG = D[i] * lists[i][pick[i]].first;
        inv /= pow_ui(primes.primes[i], static_cast<unsigned long>(DG.degree()));
        if (DG.degree() >= 1) moduli.push_back(DG);
      }
      covered += inv;
      ++r.remainder_terms;
      if (!uniform && !moduli.empty()) {
        const auto dist = residue_distribution(mus, n, moduli, DistMethod::Dp, cap);
        mpq_class prob = dist.exact ? mpq_class(dist.numer[0], dist.denom) : mpq_class(dist.prob[0]);
        prob.canonicalize();
        deviation += abs(prob - inv);
      }
      std::size_t i = 0;
      while (i < np && ++pick[i] == lists[i].size()) pick[i++] = 0;
      if (i == np) break;
    }
  }
  r.remainder = deviation + (all_terms - covered);
  r.bound = r.main_term + r.remainder;
  r.truncated_bound = r.truncated_main + r.remainder;

  // Reference probability.
  std::vector<FpPoly> fam_products;
  for (auto& f : families) {
    FpPoly prod = FpPoly::one(f.p);
    for (auto& I : f.members) prod = prod * I;
    fam_products.push_back(prod);
  }
  auto event = [&](const std::vector<FpPoly>& reductions) {
    for (std::size_t i = 0; i < np; ++i) {
      FpPoly q, rem;
      reductions[i].divmod(D[i], q, rem);
      if (!rem.is_zero()) return false;
      if (!gcd(q, fam_products[i]).is_one()) return false;
    }
    return true;
  };
  double support = 1;
  for (unsigned j = 0; j < n; ++j) support *= static_cast<double>(mus.at(j).size());
  if (uniform) {
    r.exact_available = true;
    r.exact = 1;
    for (std::size_t i = 0; i < np; ++i) {
      const int N = static_cast<int>(n) - D[i].degree();
      if (N < 0) {
        r.exact = 0;
        break;
      }
      r.exact *= mpq_class(coprime_count(families[i], static_cast<unsigned>(N)), pow_ui(primes.primes[i], n));
    }
    r.exact.canonicalize();
  } else if (support <= static_cast<double>(cap)) {
    r.exact_available = true;
    mpz_class hit = 0, total = 1;
    for (unsigned j = 0; j < n; ++j) total *= mus.at(j).weight_denominator();
    std::vector<uint64_t> idx(n, 0);
    while (true) {
      mpz_class w = 1;
      std::vector<int64_t> coeffs(n + 1, 1);
      for (unsigned j = 0; j < n; ++j) {
        w *= mus.at(j).int_weight(idx[j]);
        coeffs[j] = mus.at(j).atom(idx[j]);
      }
      std::vector<FpPoly> red;
      for (uint64_t p : primes.primes) red.push_back(FpPoly::from_signed(p, coeffs));
      if (event(red)) hit += w;
      unsigned j = 0;
      while (j < n && ++idx[j] == mus.at(j).size()) idx[j++] = 0;
      if (j == n) break;
    }
    r.exact = mpq_class(hit, total);
    r.exact.canonicalize();
  } else {
    r.mc_used = true;
    uint64_t hits = 0;
    for (uint64_t s = 0; s < samples; ++s) {
      Stream rng(seed, s);
      std::vector<int64_t> coeffs(n + 1, 1);
      for (unsigned j = 0; j < n; ++j) coeffs[j] = mus.at(j).sample(rng);
      std::vector<FpPoly> red;
      for (uint64_t p : primes.primes) red.push_back(FpPoly::from_signed(p, coeffs));
      hits += event(red);
    }
    const double ph = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0;
    r.mc_estimate = ph;
    r.mc_stderr = samples ? std::sqrt(std::max(ph * (1 - ph), 1.0 / static_cast<double>(samples)) /
                                      static_cast<double>(samples))
                          : 0;
  }
  if (r.exact_available)
    r.ok = r.exact <= r.truncated_bound && r.exact <= r.bound;
  else if (r.mc_used)
    r.ok = r.mc_estimate - 5 * r.mc_stderr <= r.truncated_bound.get_d();
  return r;
}

mpq_class rough_fraction_exact(uint64_t p, unsigned n, unsigned m) {
  // Coefficient of u^n in (m >= 1 ? 1/(1-u) : 1) * prod_{k > m} (1 - u^k)^(-pi_p(k)).
  std::vector<mpz_class> poly(n + 1, 0);
  if (m >= 1) {
    for (auto& c : poly) c = 1;
  } else {
    poly[0] = 1;
  }
  for (unsigned k = std::max(m + 1, 1u); k <= n; ++k) {
    const mpz_class pi = count_irreducibles(p, k);
    // Multiply by sum_j C(pi + j - 1, j) u^{jk}.
    std::vector<mpz_class> next(poly);
    mpz_class binom = 1;
    for (unsigned j = 1; j * k <= n; ++j) {
      binom = binom * (pi + j - 1) / j;
      for (unsigned a = 0; a + j * k <= n; ++a) next[a + j * k] += binom * poly[a];
    }
    poly = std::move(next);
  }
  mpq_class out(poly[n], pow_ui(p, n));
  out.canonicalize();
  return out;
}

EulerProduct euler_product(uint64_t p, unsigned m) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  EulerProduct out;
  const mpq_class target(2, m + 1);
  double bits = 0;
  std::vector<mpz_class> counts;
  for (unsigned k = 1; k <= m; ++k) {
    counts.push_back(count_irreducibles(p, k) - (k == 1 ? 1 : 0));
    bits += counts.back().get_d() * k * std::log2(static_cast<double>(p));
  }
  if (bits <= 2e5) {
    out.exact = true;
    mpz_class num = 1, den = 1;
    for (unsigned k = 1; k <= m; ++k) {
      const mpz_class pk = pow_ui(p, k);
      const unsigned long e = counts[k - 1].get_ui();
      mpz_class a, b;
      mpz_pow_ui(a.get_mpz_t(), mpz_class(pk - 1).get_mpz_t(), e);
      mpz_pow_ui(b.get_mpz_t(), pk.get_mpz_t(), e);
      num *= a;
      den *= b;
    }
    out.value = mpq_class(num, den);
    out.value.canonicalize();
    const double d = out.value.get_d();
    out.enclosure = CertifiedInterval::around(d, std::abs(d) * 0x1.0p-50);
    out.bound_ok = out.value <= target;
    return out;
  }
  CertifiedInterval log_sum(0.0);
  for (unsigned k = 1; k <= m; ++k) {
    const double c = counts[k - 1].get_d();
    const CertifiedInterval count = CertifiedInterval::around(c, c * 0x1.0p-52);
    const CertifiedInterval x = CertifiedInterval(1.0) / pow(CertifiedInterval(static_cast<double>(p)), k);
    log_sum += count * log1p(-x);
  }
  out.enclosure = exp(log_sum);
  out.bound_ok = out.enclosure.upper() <= (CertifiedInterval(2.0) / CertifiedInterval(static_cast<double>(m + 1))).lower();
  return out;
}

}  // namespace irrlab
