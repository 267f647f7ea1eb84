#include "equidist.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>

#include "common.hpp"
#include "fourier.hpp"
#include "numtheory.hpp"

namespace irrlab {
namespace {

constexpr double kUnit = 0x1.0p-53;

// F_p[T]/(D) encoded as base-p integers; digit-wise addition through
// lookup tables on chunks of digits.
class Component {
 public:
  Component(uint64_t p, FpPoly D) : p_(p), D_(std::move(D)), d_(static_cast<unsigned>(D_.degree())) {
    if (D_.is_zero() || !D_.is_monic()) throw DomainError("moduli must be monic");
    size_ = 1;
    for (unsigned i = 0; i < d_; ++i) size_ *= p_;
    top_ = size_ / p_ ? size_ / p_ : 1;
    chunk_ = 1;
    while (chunk_ < d_) {
      uint64_t sq = 1;
      for (unsigned i = 0; i < 2 * (chunk_ + 1); ++i) sq *= p_;
      if (sq > 65536) break;
      ++chunk_;
    }
    chunk_size_ = 1;
    for (unsigned i = 0; i < chunk_; ++i) chunk_size_ *= p_;
    table_.resize(chunk_size_ * chunk_size_);
    for (uint64_t a = 0; a < chunk_size_; ++a)
      for (uint64_t b = 0; b < chunk_size_; ++b) {
        uint64_t x = a, y = b, out = 0, place = 1;
        for (unsigned i = 0; i < chunk_; ++i) {
          out += ((x % p_ + y % p_) % p_) * place;
          x /= p_;
          y /= p_;
          place *= p_;
        }
        table_[a * chunk_size_ + b] = static_cast<uint16_t>(out);
      }
  }

  uint64_t p() const { return p_; }
  unsigned degree() const { return d_; }
  uint64_t size() const { return size_; }
  const FpPoly& modulus() const { return D_; }

  uint64_t add(uint64_t x, uint64_t y) const {
    if (p_ == 2) return x ^ y;
    uint64_t out = 0, place = 1;
    while (x || y) {
      out += table_[(x % chunk_size_) * chunk_size_ + y % chunk_size_] * place;
      x /= chunk_size_;
      y /= chunk_size_;
      place *= chunk_size_;
    }
    return out;
  }

  uint64_t encode(const FpPoly& r) const {
    const FpPoly red = r.degree() >= static_cast<int>(d_) ? r % D_ : r;
    uint64_t x = 0;
    for (int i = static_cast<int>(d_) - 1; i >= 0; --i) x = x * p_ + red.coeff(static_cast<std::size_t>(i));
    return x;
  }

  FpPoly decode(uint64_t x) const {
    std::vector<uint64_t> c(d_);
    for (unsigned i = 0; i < d_; ++i) {
      c[i] = x % p_;
      x /= p_;
    }
    return FpPoly(p_, std::move(c));
  }

  // Coefficient of T^(d-1): res(R/D) for deg R < d.
  uint64_t top(uint64_t x) const { return d_ == 0 ? 0 : x / top_; }

  // Codes of T^j mod D for j = 0..count-1.
  std::vector<uint64_t> powers_of_t(unsigned count) const {
    std::vector<uint64_t> out;
    FpPoly x = FpPoly::one(p_) % D_;
    const FpPoly t = FpPoly::monomial(p_, 1);
    for (unsigned j = 0; j < count; ++j) {
      out.push_back(encode(x));
      x = (x * t) % D_;
    }
    return out;
  }

  // Code of c * (code v).
  uint64_t scale(uint64_t v, uint64_t c) const {
    uint64_t out = 0, place = 1;
    while (v) {
      out += ((v % p_) * c % p_) * place;
      v /= p_;
      place *= p_;
    }
    return out;
  }

 private:
  uint64_t p_;
  FpPoly D_;
  unsigned d_;
  uint64_t size_ = 1, top_ = 1;
  unsigned chunk_ = 1;
  uint64_t chunk_size_ = 1;
  std::vector<uint16_t> table_;
};

class Ring {
 public:
  Ring(const std::vector<uint64_t>& primes, const std::vector<FpPoly>& moduli, uint64_t cap) {
    if (primes.size() != moduli.size()) throw DomainError("one modulus per prime is required");
    total_ = 1;
    P_ = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (moduli[i].p() != primes[i]) throw DomainError("modulus characteristic does not match its prime");
      // Size check before building tables.
      double sz = 1;
      for (int k = 0; k < moduli[i].degree(); ++k) sz *= static_cast<double>(primes[i]);
      if (sz * static_cast<double>(total_) > static_cast<double>(cap))
        throw CapExceeded("residue table would exceed the cap of " + std::to_string(cap) + " entries");
      comps_.emplace_back(primes[i], moduli[i]);
      strides_.push_back(total_);
      total_ *= comps_.back().size();
      P_ *= static_cast<int64_t>(primes[i]);
    }
  }

  const std::vector<Component>& comps() const { return comps_; }
  uint64_t stride(std::size_t i) const { return strides_[i]; }
  uint64_t size() const { return total_; }
  int64_t P() const { return P_; }

  uint64_t component_code(uint64_t index, std::size_t i) const { return index / strides_[i] % comps_[i].size(); }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t out = 0;
    for (std::size_t i = 0; i < comps_.size(); ++i)
      out += comps_[i].add(component_code(a, i), component_code(b, i)) * strides_[i];
    return out;
  }

 private:
  std::vector<Component> comps_;
  std::vector<uint64_t> strides_;
  uint64_t total_ = 1;
  int64_t P_ = 1;
};

// Integer class weights of the coefficient laws mod P, per distinct measure.
struct CoefficientLaws {
  std::vector<const Measure*> at;            // per index j
  std::map<const Measure*, std::vector<std::pair<int64_t, mpz_class>>> classes;  // (r mod P, weight)
  std::map<const Measure*, mpz_class> total;
  std::vector<mpz_class> prefix_total;       // prod_{i<n} W_i for n = 0..n_max

  CoefficientLaws(const MeasureSequence& mus, unsigned n_max, int64_t P) {
    prefix_total.push_back(1);
    for (unsigned j = 0; j < n_max; ++j) {
      const Measure* m = &mus.at(j);
      at.push_back(m);
      if (!classes.count(m)) {
        auto counts = m->residue_counts(P);
        std::vector<std::pair<int64_t, mpz_class>> cl;
        for (int64_t r = 0; r < P; ++r)
          if (sgn(counts[r]) != 0) cl.emplace_back(r, counts[r]);
        classes[m] = std::move(cl);
        total[m] = m->weight_denominator();
      }
      prefix_total.push_back(prefix_total.back() * total[m]);
    }
  }
};

using u128 = unsigned __int128;

inline void addmul(u128& acc, const u128& w, const u128& v) { acc += w * v; }
inline void addmul(mpz_class& acc, const mpz_class& w, const mpz_class& v) {
  mpz_addmul(acc.get_mpz_t(), w.get_mpz_t(), v.get_mpz_t());
}
inline void addmul(double& acc, const double& w, const double& v) { acc += w * v; }

template <class Num>
Num convert_weight(const mpz_class& w, const mpz_class& total);
template <>
u128 convert_weight<u128>(const mpz_class& w, const mpz_class&) {
  u128 out = 0;
  mpz_class x = w;
  u128 place = 1;
  while (sgn(x) != 0) {
    out += place * static_cast<u128>(mpz_class(x & mpz_class(0xffffffffUL)).get_ui());
    x >>= 32;
    place <<= 32;
  }
  return out;
}
template <>
mpz_class convert_weight<mpz_class>(const mpz_class& w, const mpz_class&) {
  return w;
}
template <>
double convert_weight<double>(const mpz_class& w, const mpz_class& total) {
  return mpq_class(w, total).get_d();
}

mpz_class to_mpz(u128 v) {
  mpz_class out = 0;
  for (int shift = 96; shift >= 0; shift -= 32) {
    out <<= 32;
    out += static_cast<unsigned long>((v >> shift) & 0xffffffffu);
  }
  return out;
}
mpz_class to_mpz(const mpz_class& v) { return v; }

// Runs the law of sum_{j<n} a_j T^j through the ring, calling visit(n, law)
// after each step n = 1..n_max.
template <class Num, class Visit>
void run_dp(const Ring& ring, const CoefficientLaws& laws, unsigned n_max, Visit&& visit) {
  const std::size_t nc = ring.comps().size();
  std::vector<std::vector<uint64_t>> tpow(nc);
  for (std::size_t i = 0; i < nc; ++i) tpow[i] = ring.comps()[i].powers_of_t(n_max);
  std::map<const Measure*, std::vector<std::pair<int64_t, Num>>> weights;
  for (auto& [m, cl] : laws.classes) {
    auto& w = weights[m];
    for (auto& [r, c] : cl) w.emplace_back(r, convert_weight<Num>(c, laws.total.at(m)));
  }
  const uint64_t S = ring.size();
  std::vector<Num> cur(S, Num(0)), next(S, Num(0));
  cur[0] = Num(1);
  std::vector<std::vector<uint64_t>> perm(nc);
  for (unsigned j = 0; j < n_max; ++j) {
    std::fill(next.begin(), next.end(), Num(0));
    for (auto& [r, w] : weights.at(laws.at[j])) {
      for (std::size_t i = 0; i < nc; ++i) {
        const auto& comp = ring.comps()[i];
        const uint64_t shift = comp.scale(tpow[i][j], static_cast<uint64_t>(r) % comp.p());
        perm[i].resize(comp.size());
        for (uint64_t x = 0; x < comp.size(); ++x) perm[i][x] = comp.add(x, shift);
      }
      if (nc == 1) {
        const auto& pm = perm[0];
        for (uint64_t x = 0; x < S; ++x) addmul(next[pm[x]], w, cur[x]);
      } else {
        // Recursive walk over components, innermost = component 0 (stride 1).
        auto walk = [&](auto&& self, std::size_t ci, uint64_t src, uint64_t dst) -> void {
          const auto& pm = perm[ci];
          const uint64_t st = ring.stride(ci);
          if (ci == 0) {
            for (uint64_t x = 0; x < pm.size(); ++x) addmul(next[dst + pm[x]], w, cur[src + x]);
            return;
          }
          for (uint64_t x = 0; x < pm.size(); ++x) self(self, ci - 1, src + x * st, dst + pm[x] * st);
        };
        walk(walk, nc - 1, 0, 0);
      }
    }
    std::swap(cur, next);
    visit(j + 1, cur);
  }
}

enum class Arith { U128, Mpz, Float };

Arith choose_arith(const CoefficientLaws& laws, unsigned n_max, uint64_t table_size, double work) {
  const mpz_class bound = laws.prefix_total[n_max] * static_cast<unsigned long>(table_size);
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) <= 125) return Arith::U128;
  if (work <= 3e8) return Arith::Mpz;
  return Arith::Float;
}

std::vector<FpPoly> coprime_to_t_moduli(uint64_t p, unsigned m) {
  std::vector<FpPoly> out{FpPoly::one(p)};
  for (unsigned d = 1; d <= m; ++d) {
    double cnt = 1;
    for (unsigned i = 0; i < d; ++i) cnt *= static_cast<double>(p);
    if (cnt > 1e7) throw CapExceeded("too many moduli to enumerate");
    for (uint64_t idx = 0; idx < static_cast<uint64_t>(cnt); ++idx) {
      if (idx % p == 0) continue;  // constant term zero means T | D
      out.push_back(FpPoly::monic_from_index(p, d, idx));
    }
  }
  return out;
}

struct TupleProfile {
  std::vector<FpPoly> moduli;
  unsigned max_degree = 0;
  std::vector<mpq_class> exact;   // per n = 1..n_max
  std::vector<double> approx;
};

struct TupleRun {
  std::vector<TupleProfile> tuples;
  bool exact = true;
  double error_per_tuple = 0;
};

TupleRun run_tuples(const MeasureSequence& mus, unsigned n_max, const PrimeModulusSet& primes, unsigned m_max,
                    unsigned threads, uint64_t cap) {
  if (n_max == 0) throw DomainError("n must be >= 1");
  const int64_t P = primes.P;
  CoefficientLaws laws(mus, n_max, P);

  std::vector<std::vector<FpPoly>> per_prime;
  for (uint64_t p : primes.primes) per_prime.push_back(coprime_to_t_moduli(p, m_max));
  double tuple_count = 1;
  for (auto& list : per_prime) tuple_count *= static_cast<double>(list.size());
  if (tuple_count > 2'000'000) throw CapExceeded("too many modulus tuples");
  // Cartesian product ordered by total degree, then by the per-prime order.
  std::vector<std::vector<std::size_t>> tuples{{}};
  for (auto& list : per_prime) {
    std::vector<std::vector<std::size_t>> grown;
    for (auto& t : tuples)
      for (std::size_t i = 0; i < list.size(); ++i) {
        grown.push_back(t);
        grown.back().push_back(i);
      }
    tuples = std::move(grown);
  }
  auto total_degree = [&](const std::vector<std::size_t>& t) {
    int s = 0;
    for (std::size_t i = 0; i < t.size(); ++i) s += per_prime[i][t[i]].degree();
    return s;
  };
  std::stable_sort(tuples.begin(), tuples.end(),
                   [&](const auto& a, const auto& b) { return total_degree(a) < total_degree(b); });

  double max_size = 1, work = 0;
  std::size_t max_classes = 1;
  for (auto& [m, cl] : laws.classes) max_classes = std::max(max_classes, cl.size());
  for (auto& t : tuples) {
    double sz = 1;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (int k = 0; k < per_prime[i][t[i]].degree(); ++k) sz *= static_cast<double>(primes.primes[i]);
    if (sz > static_cast<double>(cap)) throw CapExceeded("residue table would exceed the cap");
    max_size = std::max(max_size, sz);
    work += sz * n_max * static_cast<double>(max_classes);
  }
  if (work > 2e10) throw CapExceeded("delta enumeration exceeds the work cap");
  const Arith arith = choose_arith(laws, n_max, static_cast<uint64_t>(max_size), work);

  TupleRun run;
  run.exact = arith != Arith::Float;
  run.error_per_tuple = 2 * (static_cast<double>(n_max) * static_cast<double>(max_classes + 1) + 2) * kUnit;
  run.tuples.resize(tuples.size());
  parallel_for(tuples.size(), threads, [&](std::size_t ti) {
    TupleProfile& prof = run.tuples[ti];
    for (std::size_t i = 0; i < tuples[ti].size(); ++i) {
      prof.moduli.push_back(per_prime[i][tuples[ti][i]]);
      prof.max_degree = std::max(prof.max_degree, static_cast<unsigned>(prof.moduli.back().degree()));
    }
    prof.exact.assign(n_max, mpq_class(0));
    prof.approx.assign(n_max, 0.0);
    if (prof.max_degree == 0) return;  // all-ones tuple contributes nothing
    Ring ring(primes.primes, prof.moduli, cap);
    const uint64_t S = ring.size();
    if (arith == Arith::Float) {
      run_dp<double>(ring, laws, n_max, [&](unsigned n, const std::vector<double>& law) {
        double worst = 0;
        const double u = 1.0 / static_cast<double>(S);
        for (double v : law) worst = std::max(worst, std::abs(v - u));
        prof.approx[n - 1] = worst;
      });
      return;
    }
    auto finish = [&](unsigned n, const mpz_class& worst) {
      mpq_class q(worst, laws.prefix_total[n] * static_cast<unsigned long>(S));
      q.canonicalize();
      prof.exact[n - 1] = q;
      prof.approx[n - 1] = q.get_d();
    };
    if (arith == Arith::U128) {
      run_dp<u128>(ring, laws, n_max, [&](unsigned n, const std::vector<u128>& law) {
        const u128 den = convert_weight<u128>(laws.prefix_total[n], 1);
        u128 worst = 0;
        for (const u128& v : law) {
          const u128 scaled = v * S;
          const u128 diff = scaled > den ? scaled - den : den - scaled;
          worst = std::max(worst, diff);
        }
        finish(n, to_mpz(worst));
      });
    } else {
      run_dp<mpz_class>(ring, laws, n_max, [&](unsigned n, const std::vector<mpz_class>& law) {
        const mpz_class& den = laws.prefix_total[n];
        mpz_class worst = 0;
        for (const auto& v : law) {
          mpz_class diff = abs(v * static_cast<unsigned long>(S) - den);
          if (diff > worst) worst = diff;
        }
        finish(n, worst);
      });
    }
  });
  return run;
}

}  // namespace

PrimeModulusSet PrimeModulusSet::of(std::vector<uint64_t> primes) {
  if (primes.empty()) throw DomainError("prime set is empty");
  std::sort(primes.begin(), primes.end());
  PrimeModulusSet s;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) throw DomainError(std::to_string(primes[i]) + " is not prime");
    if (i && primes[i] == primes[i - 1]) throw DomainError("primes must be distinct");
    if (static_cast<double>(s.P) * static_cast<double>(primes[i]) > 1e9) throw CapExceeded("prime product too large");
    s.P *= static_cast<int64_t>(primes[i]);
  }
  s.primes = std::move(primes);
  return s;
}

std::size_t PrimeModulusSet::index_of(uint64_t p) const {
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (primes[i] == p) return i;
  throw DomainError("prime not in set");
}

uint64_t ResidueDistribution::encode(const std::vector<FpPoly>& residues) const {
  uint64_t index = 0, stride = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const FpPoly r = residues.at(i) % moduli[i];
    uint64_t code = 0;
    for (int k = moduli[i].degree() - 1; k >= 0; --k) code = code * primes[i] + r.coeff(static_cast<std::size_t>(k));
    index += code * stride;
    for (int k = 0; k < moduli[i].degree(); ++k) stride *= primes[i];
  }
  return index;
}

std::vector<FpPoly> ResidueDistribution::decode(uint64_t index) const {
  std::vector<FpPoly> out;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    std::vector<uint64_t> c(static_cast<std::size_t>(moduli[i].degree()));
    for (auto& x : c) {
      x = index % primes[i];
      index /= primes[i];
    }
    out.emplace_back(primes[i], std::move(c));
  }
  return out;
}

ResidueDistribution ResidueDistribution::marginal(std::size_t component) const {
  ResidueDistribution out;
  out.primes = {primes.at(component)};
  out.moduli = {moduli.at(component)};
  out.method = method;
  out.exact = exact;
  uint64_t stride = 1, size = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    uint64_t s = 1;
    for (int k = 0; k < moduli[i].degree(); ++k) s *= primes[i];
    if (i < component) stride *= s;
    if (i == component) size = s;
  }
  out.prob.assign(size, 0.0);
  if (exact) {
    out.numer.assign(size, 0);
    out.denom = denom;
  }
  for (uint64_t x = 0; x < prob.size(); ++x) {
    const uint64_t c = x / stride % size;
    out.prob[c] += prob[x];
    if (exact) out.numer[c] += numer[x];
  }
  return out;
}

double total_variation(const ResidueDistribution& a, const ResidueDistribution& b) {
  if (a.size() != b.size()) throw DomainError("distributions over different tables");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.prob[i] - b.prob[i]);
  return s / 2;
}

ResidueDistribution residue_distribution(const MeasureSequence& mus, unsigned n, const std::vector<FpPoly>& moduli,
                                         DistMethod method, uint64_t cap) {
  if (n == 0) throw DomainError("n must be >= 1");
  std::vector<uint64_t> primes;
  for (auto& D : moduli) {
    if (D.is_zero() || !D.is_monic()) throw DomainError("moduli must be monic");
    if (D.degree() < 1) throw DomainError("moduli must have degree >= 1");
    primes.push_back(D.p());
  }
  auto sorted = primes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DomainError("one modulus per prime");
  Ring ring(primes, moduli, cap);
  const uint64_t S = ring.size();
  ResidueDistribution out;
  out.primes = primes;
  out.moduli = moduli;
  out.prob.assign(S, 0.0);

  // Residue of T^n in the ring: the class of A is (sum_{j<n} a_j T^j) + T^n.
  uint64_t tn = 0;
  for (std::size_t i = 0; i < ring.comps().size(); ++i)
    tn += ring.comps()[i].powers_of_t(n + 1)[n] * ring.stride(i);

  if (method == DistMethod::Dp) {
    out.method = "dp";
    CoefficientLaws laws(mus, n, ring.P());
    std::size_t max_classes = 1;
    for (auto& [m, cl] : laws.classes) max_classes = std::max(max_classes, cl.size());
    const double work = static_cast<double>(S) * n * static_cast<double>(max_classes);
    const Arith arith = choose_arith(laws, n, S, work);
    const mpz_class& den = laws.prefix_total[n];
    auto store_exact = [&](const auto& law) {
      out.exact = true;
      out.denom = den;
      out.numer.assign(S, 0);
      for (uint64_t x = 0; x < S; ++x) {
        const uint64_t c = ring.add(x, tn);
        out.numer[c] = to_mpz(law[x]);
        out.prob[c] = mpq_class(out.numer[c], den).get_d();
      }
    };
    if (arith == Arith::U128) {
      run_dp<u128>(ring, laws, n, [&](unsigned k, const std::vector<u128>& law) {
        if (k == n) store_exact(law);
      });
    } else if (arith == Arith::Mpz) {
      run_dp<mpz_class>(ring, laws, n, [&](unsigned k, const std::vector<mpz_class>& law) {
        if (k == n) store_exact(law);
      });
    } else {
      run_dp<double>(ring, laws, n, [&](unsigned k, const std::vector<double>& law) {
        if (k != n) return;
        for (uint64_t x = 0; x < S; ++x) out.prob[ring.add(x, tn)] = law[x];
      });
    }
    return out;
  }

  out.method = "fourier";
  if (static_cast<double>(S) * static_cast<double>(S) > 1e8) throw CapExceeded("Fourier inversion table too large");
  const int64_t P = ring.P();
  const std::size_t nc = ring.comps().size();
  // psi of a code tuple: sum_p top_p / p = k / P.
  auto psi = [&](const std::vector<uint64_t>& tops) {
    int64_t k = 0;
    for (std::size_t i = 0; i < nc; ++i) k += static_cast<int64_t>(tops[i]) * (P / static_cast<int64_t>(ring.comps()[i].p()));
    return k % P;
  };
  std::map<const Measure*, std::vector<std::complex<double>>> tables;
  for (unsigned j = 0; j < n; ++j) {
    const Measure* m = &mus.at(j);
    if (!tables.count(m)) tables[m] = fourier_table(*m, P);
  }
  auto e = [&](int64_t k) {
    const double a = 2 * std::numbers::pi * static_cast<double>(floor_mod(k, P)) / static_cast<double>(P);
    return std::complex<double>(std::cos(a), std::sin(a));
  };
  // Per component: pairing[x][y] = top(x y mod D).
  std::vector<std::vector<uint8_t>> pairing(nc);
  std::vector<std::vector<FpPoly>> elems(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const auto& comp = ring.comps()[i];
    for (uint64_t x = 0; x < comp.size(); ++x) elems[i].push_back(comp.decode(x));
    pairing[i].resize(comp.size() * comp.size());
    for (uint64_t x = 0; x < comp.size(); ++x)
      for (uint64_t y = 0; y < comp.size(); ++y)
        pairing[i][x * comp.size() + y] = static_cast<uint8_t>(comp.top(comp.encode((elems[i][x] * elems[i][y]) % comp.modulus())));
  }
  std::vector<std::complex<double>> F(S);
  for (uint64_t b = 0; b < S; ++b) {
    std::vector<FpPoly> cur(nc);
    for (std::size_t i = 0; i < nc; ++i) cur[i] = elems[i][ring.component_code(b, i)];
    std::complex<double> prod = 1;
    std::vector<uint64_t> tops(nc);
    for (unsigned j = 0; j <= n; ++j) {
      for (std::size_t i = 0; i < nc; ++i) tops[i] = ring.comps()[i].top(ring.comps()[i].encode(cur[i]));
      const int64_t k = psi(tops);
      if (j == n) {
        prod *= e(k);
      } else {
        prod *= tables.at(&mus.at(j))[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < nc; ++i)
          cur[i] = cur[i].shifted(1) % ring.comps()[i].modulus();
      }
    }
    F[b] = prod;
  }
  for (uint64_t c = 0; c < S; ++c) {
    std::complex<double> acc = 0;
    for (uint64_t b = 0; b < S; ++b) {
      int64_t k = 0;
      for (std::size_t i = 0; i < nc; ++i) {
        const auto& comp = ring.comps()[i];
        k += static_cast<int64_t>(pairing[i][ring.component_code(c, i) * comp.size() + ring.component_code(b, i)]) *
             (P / static_cast<int64_t>(comp.p()));
      }
      acc += e(-k) * F[b];
    }
    out.prob[c] = acc.real() / static_cast<double>(S);
  }
  return out;
}

std::vector<std::vector<DeltaResult>> delta_table(const MeasureSequence& mus, unsigned n_max,
                                                  const PrimeModulusSet& primes, unsigned m_max, unsigned threads,
                                                  uint64_t cap) {
  const TupleRun run = run_tuples(mus, n_max, primes, m_max, threads, cap);
  std::vector<std::vector<DeltaResult>> out(n_max, std::vector<DeltaResult>(m_max + 1));
  for (unsigned n = 1; n <= n_max; ++n)
    for (unsigned m = 0; m <= m_max; ++m) {
      DeltaResult& r = out[n - 1][m];
      r.n = n;
      r.m = m;
      r.primes = primes.primes;
      r.exact = run.exact;
      r.value = 0;
      for (const auto& t : run.tuples) {
        if (t.max_degree > m) continue;
        ++r.tuples;
        if (run.exact) r.value += t.exact[n - 1];
        r.value_d += t.approx[n - 1];
      }
      if (run.exact) {
        r.value_d = r.value.get_d();
      } else {
        r.error_bound = static_cast<double>(r.tuples) * run.error_per_tuple;
      }
    }
  return out;
}

DeltaResult delta(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes, unsigned m, bool keep_rows,
                  unsigned threads, uint64_t cap) {
  const TupleRun run = run_tuples(mus, n, primes, m, threads, cap);
  DeltaResult r;
  r.n = n;
  r.m = m;
  r.primes = primes.primes;
  r.exact = run.exact;
  r.value = 0;
  for (const auto& t : run.tuples) {
    ++r.tuples;
    if (run.exact) r.value += t.exact[n - 1];
    r.value_d += t.approx[n - 1];
    if (keep_rows) r.rows.push_back({t.moduli, t.approx[n - 1], t.exact[n - 1]});
  }
  if (run.exact)
    r.value_d = r.value.get_d();
  else
    r.error_bound = static_cast<double>(r.tuples) * run.error_per_tuple;
  return r;
}

void LaurentPhase::validate(const PrimeModulusSet& primes) const {
  if (G.size() != primes.primes.size() || H.size() != primes.primes.size())
    throw DomainError("phase needs one G/H pair per prime");
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (H[i].p() != primes.primes[i] || G[i].p() != primes.primes[i]) throw DomainError("phase over the wrong prime");
    if (!H[i].is_monic()) throw DomainError("H must be monic");
    if (G[i].degree() >= H[i].degree()) throw DomainError("deg G must be below deg H");
    if (H[i].degree() >= 1 && !gcd(G[i], H[i]).is_one()) throw DomainError("G and H must be coprime");
  }
}

std::vector<uint64_t> residue_sequence(const FpPoly& G, const FpPoly& H, unsigned count) {
  std::vector<uint64_t> out(count, 0);
  if (H.degree() < 1) return out;
  const auto d = static_cast<std::size_t>(H.degree());
  FpPoly r = G % H;
  for (unsigned j = 0; j < count; ++j) {
    out[j] = r.coeff(d - 1);
    r = r.shifted(1) % H;
  }
  return out;
}

namespace {

struct MagnitudeCache {
  std::map<const Measure*, std::vector<CertifiedInterval>> tables;
  std::vector<const std::vector<CertifiedInterval>*> at;
  MagnitudeCache(const MeasureSequence& mus, unsigned n, int64_t P) {
    for (unsigned j = 0; j < n; ++j) {
      const Measure* m = &mus.at(j);
      if (!tables.count(m)) tables[m] = magnitude_table(*m, P);
      at.push_back(&tables[m]);
    }
  }
};

CertifiedInterval s_product(const MagnitudeCache& cache, const std::vector<std::vector<uint64_t>>& res,
                            const PrimeModulusSet& primes, unsigned n) {
  const int64_t P = primes.P;
  double lo = 1, hi = 1;
  for (unsigned j = 0; j < n; ++j) {
    int64_t k = 0;
    for (std::size_t i = 0; i < res.size(); ++i)
      k += static_cast<int64_t>(res[i][j]) * (P / static_cast<int64_t>(primes.primes[i]));
    const auto& m = (*cache.at[j])[static_cast<std::size_t>(k % P)];
    lo = std::nextafter(lo * m.lower(), 0.0);
    hi = std::nextafter(hi * m.upper(), INFINITY);
  }
  return {std::max(lo, 0.0), hi};
}

CertifiedInterval ipow(CertifiedInterval b, uint64_t e) { return pow(b, e); }

}  // namespace

SValue s_value(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes, const LaurentPhase& phase) {
  phase.validate(primes);
  MagnitudeCache cache(mus, n, primes.P);
  std::vector<std::vector<uint64_t>> res;
  unsigned lmin = 0;
  bool t_free = true;
  for (std::size_t i = 0; i < primes.primes.size(); ++i) {
    res.push_back(residue_sequence(phase.G[i], phase.H[i], n));
    const auto l = static_cast<unsigned>(std::max(0, phase.H[i].degree()));
    if (l >= 1 && (lmin == 0 || l < lmin)) lmin = l;
    if (phase.H[i].coeff(0) == 0 && l >= 1) t_free = false;
  }
  SValue out;
  out.value = s_product(cache, res, primes, n);
  if (lmin >= 1 && t_free) {
    out.linf_applicable = true;
    const auto ab = alpha_beta(mus, primes.P, n);
    out.linf_bound = ipow(ab.beta, n / lmin);
    out.linf_ok = !(out.value.lower() > out.linf_bound.upper());
  }
  return out;
}

DeltaEll delta_ell(const MeasureSequence& mus, unsigned n, const PrimeModulusSet& primes,
                   const std::vector<unsigned>& ell, uint64_t cap) {
  if (ell.size() != primes.primes.size()) throw DomainError("one l_p per prime is required");
  if (*std::max_element(ell.begin(), ell.end()) < 1) throw DomainError("at least one l_p must be >= 1");
  if (n == 0) throw DomainError("n must be >= 1");
  // Per prime: residue sequences for all coprime pairs (G, H), T not dividing H.
  std::vector<std::vector<std::vector<uint64_t>>> options(ell.size());
  double total = 1;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    const uint64_t p = primes.primes[i];
    if (ell[i] == 0) {
      options[i].push_back(std::vector<uint64_t>(n, 0));
      continue;
    }
    double cnt = 1;
    for (unsigned k = 0; k < ell[i]; ++k) cnt *= static_cast<double>(p);
    if (cnt * cnt > static_cast<double>(cap)) throw CapExceeded("too many (G, H) pairs");
    for (uint64_t hi = 0; hi < static_cast<uint64_t>(cnt); ++hi) {
      if (hi % p == 0) continue;
      const FpPoly H = FpPoly::monic_from_index(p, ell[i], hi);
      for (uint64_t gi = 1; gi < static_cast<uint64_t>(cnt); ++gi) {
        std::vector<uint64_t> c(ell[i]);
        uint64_t x = gi;
        for (auto& v : c) {
          v = x % p;
          x /= p;
        }
        const FpPoly G(p, std::move(c));
        if (!gcd(G, H).is_one()) continue;
        options[i].push_back(residue_sequence(G, H, n));
      }
    }
    total *= static_cast<double>(options[i].size());
  }
  if (total * n > static_cast<double>(cap) * 10) throw CapExceeded("delta_ell enumeration exceeds the cap");

  MagnitudeCache cache(mus, n, primes.P);
  const auto ab = alpha_beta(mus, primes.P, n);
  unsigned L = 0, lmin = 0;
  for (unsigned l : ell) {
    L = std::max(L, l);
    if (l >= 1 && (lmin == 0 || l < lmin)) lmin = l;
  }
  const CertifiedInterval pointwise = ipow(ab.beta, n / lmin);

  DeltaEll out;
  out.ell = ell;
  out.alpha = ab.alpha;
  out.beta = ab.beta;
  double lo = 0, hi = 0;
  std::vector<std::size_t> pick(ell.size(), 0);
  std::vector<std::vector<uint64_t>> res(ell.size());
  while (true) {
    for (std::size_t i = 0; i < ell.size(); ++i) res[i] = options[i][pick[i]];
    const auto s = s_product(cache, res, primes, n);
    lo += s.lower();
    hi += s.upper();
    out.max_s = std::max(out.max_s, s.upper());
    if (s.lower() > pointwise.upper()) out.pointwise_linf_ok = false;
    ++out.terms;
    std::size_t i = 0;
    while (i < ell.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
    if (i == ell.size()) break;
  }
  const double g = static_cast<double>(out.terms + 2) * kUnit;
  CertifiedInterval sum(std::max(0.0, std::nextafter(lo - g * lo, 0.0)), std::nextafter(hi + g * hi, INFINITY));
  CertifiedInterval norm(1.0);
  for (std::size_t i = 0; i < ell.size(); ++i)
    norm *= pow(CertifiedInterval(static_cast<double>(primes.primes[i])), ell[i]);
  out.value = sum / norm;

  // P^max(0, L - n/2) alpha^min(2L, n); L - n/2 may be a half-integer.
  CertifiedInterval bound = pow(ab.alpha, std::min<uint64_t>(2ULL * L, n));
  if (2 * L > n) {
    const CertifiedInterval Pint(static_cast<double>(primes.P));
    bound *= pow(Pint, (2 * L - n) / 2);
    if ((2 * L - n) % 2) bound *= sqrt(Pint);
  }
  out.bound_discrete_l1 = bound;
  out.bound_linf = norm * pointwise;
  out.discrete_l1_ok = !(out.value.lower() > out.bound_discrete_l1.upper());
  return out;
}

}  // namespace irrlab
