#include <algorithm>
#include <map>

#include "common.hpp"
#include "fpoly.hpp"

namespace irrlab {
namespace {

// Rows T^{ip} mod f, i < deg f: the matrix of h -> h^p on F_p[T]/(f).
class Frobenius {
 public:
  explicit Frobenius(const FpPoly& f) : f_(f), p_(f.p()), n_(static_cast<std::size_t>(f.degree())) {
    rows_.reserve(n_);
    FpPoly x = FpPoly::one(p_) % f_;
    const FpPoly tp = powmod(FpPoly::monomial(p_, 1), p_, f_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<uint64_t> row(x.coeffs());
      row.resize(n_, 0);
      rows_.push_back(std::move(row));
      if (i + 1 == n_) break;
      if (p_ <= n_) {
        for (uint64_t s = 0; s < p_; ++s) x = times_t(x);
      } else {
        x = (x * tp) % f_;
      }
    }
  }

  FpPoly apply(const FpPoly& h) const {
    std::vector<uint64_t> acc(n_, 0);
    if (p_ < (1ULL << 16)) {
      for (std::size_t i = 0; i < n_; ++i) {
        const uint64_t c = h.coeff(i);
        if (c == 0) continue;
        const auto& row = rows_[i];
        for (std::size_t j = 0; j < n_; ++j) acc[j] += c * row[j];
      }
      for (auto& a : acc) a %= p_;
    } else {
      for (std::size_t i = 0; i < n_; ++i) {
        const uint64_t c = h.coeff(i);
        if (c == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) acc[j] = (acc[j] + f_.mul(c, rows_[i][j])) % p_;
      }
    }
    return FpPoly(p_, std::move(acc));
  }

 private:
  FpPoly times_t(const FpPoly& x) const {
    // x has degree < n; T*x reduced by the monic f.
    std::vector<uint64_t> v(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) v[i + 1] = x.coeff(i);
    const uint64_t top = v[n_];
    if (top != 0) {
      for (std::size_t i = 0; i < n_; ++i) v[i] = (v[i] + f_.mul(p_ - top, f_.coeff(i))) % p_;
      v[n_] = 0;
    }
    return FpPoly(p_, std::move(v));
  }

  FpPoly f_;
  uint64_t p_;
  std::size_t n_;
  std::vector<std::vector<uint64_t>> rows_;
};

// (product of all irreducible factors of degree d, d) for squarefree monic f.
std::vector<std::pair<FpPoly, unsigned>> ddf(const FpPoly& f) {
  std::vector<std::pair<FpPoly, unsigned>> out;
  if (f.degree() <= 0) return out;
  const uint64_t p = f.p();
  const FpPoly t = FpPoly::monomial(p, 1);
  if (f.degree() == 1) {
    out.emplace_back(f, 1);
    return out;
  }
  const Frobenius frob(f);
  FpPoly rest = f;
  FpPoly h = t % f;
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(rest.degree()); ++d) {
    h = frob.apply(h);
    FpPoly g = gcd(rest, (h - t) % rest);
    if (!g.is_one()) {
      out.emplace_back(g, d);
      rest = rest / g;
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest, static_cast<unsigned>(rest.degree()));
  return out;
}

FpPoly pth_root(const FpPoly& f) {
  const uint64_t p = f.p();
  std::vector<uint64_t> v;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) v.push_back(f.coeffs()[i]);
  return FpPoly(p, std::move(v));
}

void squarefree_parts(const FpPoly& f, unsigned scale, std::vector<std::pair<FpPoly, unsigned>>& out) {
  if (f.degree() <= 0) return;
  const FpPoly d = f.derivative();
  if (d.is_zero()) {
    squarefree_parts(pth_root(f), scale * static_cast<unsigned>(f.p()), out);
    return;
  }
  FpPoly c = gcd(f, d);
  FpPoly w = f / c;
  unsigned i = 1;
  while (!w.is_one()) {
    const FpPoly y = gcd(w, c);
    const FpPoly fac = w / y;
    if (fac.degree() > 0) out.emplace_back(fac, i * scale);
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) squarefree_parts(pth_root(c), scale * static_cast<unsigned>(f.p()), out);
}

FpPoly random_below(const FpPoly& g, Stream& rng) {
  std::vector<uint64_t> v(static_cast<std::size_t>(g.degree()));
  for (auto& x : v) x = rng.below(g.p());
  return FpPoly(g.p(), std::move(v));
}

void edf(const FpPoly& g, unsigned d, Stream& rng, std::vector<FpPoly>& out) {
  if (static_cast<unsigned>(g.degree()) == d) {
    out.push_back(g);
    return;
  }
  const uint64_t p = g.p();
  while (true) {
    const FpPoly a = random_below(g, rng);
    if (a.degree() <= 0) continue;
    FpPoly b;
    if (p == 2) {
      FpPoly term = a;
      b = a;
      for (unsigned i = 1; i < d; ++i) {
        term = (term * term) % g;
        b = b + term;
      }
    } else {
      mpz_class e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, d);
      e = (e - 1) / 2;
      b = powmod(a, e, g) - FpPoly::one(p);
    }
    const FpPoly h = gcd(g, b);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      edf(h, d, rng, out);
      edf(g / h, d, rng, out);
      return;
    }
  }
}

void require_monic(const FpPoly& a) {
  if (a.is_zero()) throw DomainError("zero polynomial");
  if (!a.is_monic()) throw DomainError("polynomial must be monic");
}

}  // namespace

bool is_squarefree(const FpPoly& a) {
  if (a.degree() <= 0) return !a.is_zero();
  const FpPoly d = a.derivative();
  if (d.is_zero()) return false;
  return gcd(a, d).is_one();
}

std::vector<std::pair<unsigned, unsigned>> distinct_degree_counts(const FpPoly& a) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (auto& [g, d] : ddf(a.monic())) out.emplace_back(d, static_cast<unsigned>(g.degree()) / d);
  return out;
}

bool is_irreducible(const FpPoly& a) {
  require_monic(a);
  if (a.degree() < 1) throw DomainError("is_irreducible needs degree >= 1");
  if (a.degree() == 1) return true;
  if (!is_squarefree(a)) return false;
  const auto parts = ddf(a);
  return parts.size() == 1 && parts[0].second == static_cast<unsigned>(a.degree());
}

Factorization factor(const FpPoly& a, uint64_t seed) {
  require_monic(a);
  std::vector<std::pair<FpPoly, unsigned>> sqf;
  squarefree_parts(a, 1, sqf);
  std::map<FpPoly, unsigned> acc;
  Stream rng(seed, a.hash());
  for (auto& [part, mult] : sqf) {
    for (auto& [g, d] : ddf(part)) {
      std::vector<FpPoly> irr;
      edf(g, d, rng, irr);
      for (auto& f : irr) acc[f] += mult;
    }
  }
  Factorization out;
  for (auto& [f, m] : acc) out.push_back({f, m});
  return out;
}

FpPoly product(const Factorization& fac) {
  if (fac.empty()) return FpPoly::one(2);
  FpPoly r = FpPoly::one(fac.front().f.p());
  for (auto& [f, m] : fac)
    for (unsigned i = 0; i < m; ++i) r = r * f;
  return r;
}

SmoothRough smooth_rough_split(const Factorization& fac, uint64_t p, unsigned m) {
  SmoothRough out{FpPoly::one(p), FpPoly::one(p)};
  const FpPoly t = FpPoly::monomial(p, 1);
  for (auto& [f, e] : fac) {
    const bool smooth = static_cast<unsigned>(f.degree()) <= m && f != t;
    for (unsigned i = 0; i < e; ++i) (smooth ? out.smooth : out.rough) = (smooth ? out.smooth : out.rough) * f;
  }
  return out;
}

SmoothRough smooth_rough_split(const FpPoly& a, unsigned m, uint64_t seed) {
  return smooth_rough_split(factor(a, seed), a.p(), m);
}

std::vector<bool> divisor_degree_set(const Factorization& fac, unsigned n) {
  const std::size_t words = n / 64 + 1;
  std::vector<uint64_t> bits(words, 0);
  bits[0] = 1;
  auto shifted_or = [&](const std::vector<uint64_t>& src, unsigned shift, std::vector<uint64_t>& dst) {
    const std::size_t ws = shift / 64, bs = shift % 64;
    for (std::size_t i = words; i-- > ws;) {
      uint64_t v = src[i - ws] << bs;
      if (bs && i - ws >= 1) v |= src[i - ws - 1] >> (64 - bs);
      dst[i] |= v;
    }
  };
  for (auto& [f, e] : fac) {
    const auto d = static_cast<unsigned>(f.degree());
    std::vector<uint64_t> next = bits;
    for (unsigned j = 1; j <= e; ++j) {
      if (j * d > n) break;
      shifted_or(bits, j * d, next);
    }
    bits = std::move(next);
  }
  std::vector<bool> out(n + 1);
  for (unsigned k = 0; k <= n; ++k) out[k] = (bits[k / 64] >> (k % 64)) & 1;
  return out;
}

std::vector<bool> divisor_degree_set(const FpPoly& a, uint64_t seed) {
  return divisor_degree_set(factor(a, seed), static_cast<unsigned>(a.degree()));
}

FactorizationType factorization_type(const Factorization& fac) {
  FactorizationType out;
  out.tau = 1;
  std::vector<unsigned> parts;
  for (auto& [f, e] : fac) {
    for (unsigned i = 0; i < e; ++i) parts.push_back(static_cast<unsigned>(f.degree()));
    out.tau *= e + 1;
    ++out.omega;
  }
  out.rho = Partition(std::move(parts));
  return out;
}

FactorizationType factorization_type(const FpPoly& a, uint64_t seed) {
  if (a.degree() < 1) throw DomainError("factorization_type needs degree >= 1");
  return factorization_type(factor(a, seed));
}

std::vector<FpPoly> monic_irreducibles(uint64_t p, unsigned k) {
  double count = 1;
  for (unsigned i = 0; i < k; ++i) count *= static_cast<double>(p);
  if (count > 1e7) throw CapExceeded("too many polynomials to enumerate");
  std::vector<FpPoly> out;
  for (uint64_t idx = 0; idx < static_cast<uint64_t>(count); ++idx) {
    FpPoly f = FpPoly::monic_from_index(p, k, idx);
    if (is_irreducible(f)) out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace irrlab
