#pragma once

// Slow reference implementations used only as test oracles. They share no
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

// Dense polynomial over F_p, little-endian, trimmed.
using Poly = std::vector<int64_t>;

inline Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return trim(c);
}

inline int64_t inv(int64_t a, int64_t p) {
  for (int64_t x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

// Remainder of a modulo b (b nonzero).
inline Poly mod(Poly a, const Poly& b, int64_t p) {
  a = trim(a);
  const int64_t li = inv(b.back(), p);
  while (a.size() >= b.size()) {
    const int64_t c = a.back() * li % p;
    const std::size_t s = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = ((a[s + i] - c * b[i]) % p + p) % p;
    a = trim(a);
  }
  return a;
}

inline bool divides(const Poly& d, const Poly& a, int64_t p) { return mod(a, d, p).empty(); }

// Monic polynomial of degree n with lower coefficients the base-p digits of idx.
inline Poly monic(int64_t p, unsigned n, uint64_t idx) {
  Poly a(n + 1, 0);
  for (unsigned i = 0; i < n; ++i) {
    a[i] = static_cast<int64_t>(idx % p);
    idx /= p;
  }
  a[n] = 1;
  return a;
}

inline uint64_t ipow(uint64_t b, unsigned e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool irreducible(const Poly& a, int64_t p) {
  const unsigned n = static_cast<unsigned>(a.size() - 1);
  if (n == 0) return false;
  for (unsigned d = 1; 2 * d <= n; ++d)
    for (uint64_t i = 0; i < ipow(p, d); ++i)
      if (divides(monic(p, d, i), a, p)) return false;
  return true;
}

inline std::vector<Poly> irreducibles(int64_t p, unsigned k) {
  std::vector<Poly> out;
  for (uint64_t i = 0; i < ipow(p, k); ++i) {
    Poly f = monic(p, k, i);
    if (irreducible(f, p)) out.push_back(f);
  }
  return out;
}

// Degrees of monic divisors, by trying every monic polynomial of each degree.
inline std::vector<bool> divisor_degrees(const Poly& a, int64_t p) {
  const unsigned n = static_cast<unsigned>(a.size() - 1);
  std::vector<bool> out(n + 1, false);
  out[0] = out[n] = true;
  for (unsigned d = 1; d < n; ++d)
    for (uint64_t i = 0; i < ipow(p, d) && !out[d]; ++i)
      if (divides(monic(p, d, i), a, p)) out[d] = true;
  return out;
}

// Irreducible factor degrees with multiplicity, by repeated trial division.
inline std::vector<unsigned> factor_degrees(Poly a, int64_t p) {
  std::vector<unsigned> out;
  unsigned d = 1;
  while (a.size() > 1) {
    if (2 * d > a.size() - 1) {
      out.push_back(static_cast<unsigned>(a.size() - 1));
      break;
    }
    bool found = false;
    for (uint64_t i = 0; i < ipow(p, d); ++i) {
      const Poly f = monic(p, d, i);
      if (divides(f, a, p)) {
        // Exact division by long division.
        Poly q(a.size() - f.size() + 1, 0), r = a;
        for (std::size_t k = q.size(); k-- > 0;) {
          q[k] = r[k + f.size() - 1];
          for (std::size_t j = 0; j < f.size(); ++j) r[k + j] = ((r[k + j] - q[k] * f[j]) % p + p) % p;
        }
        a = trim(q);
        out.push_back(d);
        found = true;
        break;
      }
    }
    if (!found) ++d;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline int mobius(uint64_t n) {
  int r = 1;
  for (uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    r = -r;
  }
  return n > 1 ? -r : r;
}

// Gauss's formula (1/k) sum_{d | k} mu(d) p^(k/d), in floating point for comparison.
inline long double gauss_count(uint64_t p, unsigned k) {
  long double s = 0;
  for (unsigned d = 1; d <= k; ++d)
    if (k % d == 0) s += mobius(d) * std::pow(static_cast<long double>(p), static_cast<long double>(k / d));
  return s / k;
}

// |sum_a w(a) e(a t / P)| by direct summation.
inline long double fourier_abs(const std::vector<int64_t>& atoms, const std::vector<long double>& w, int64_t t,
                               int64_t P) {
  const long double two_pi = 6.283185307179586476925286766559L;
  long double re = 0, im = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const int64_t r = ((atoms[i] % P) * (t % P) % P + P) % P;
    re += w[i] * std::cos(two_pi * r / P);
    im += w[i] * std::sin(two_pi * r / P);
  }
  return std::sqrt(re * re + im * im);
}

// alpha(P) straight from the definition: max over Q R = P, Q > 1, and l mod R
// of Q^(-1/2) sum_{k mod Q} |mu^((k R + l Q)/P)|.
inline long double alpha(const std::vector<int64_t>& atoms, const std::vector<long double>& w, int64_t P) {
  long double best = 0;
  for (int64_t Q = 2; Q <= P; ++Q) {
    if (P % Q) continue;
    const int64_t R = P / Q;
    for (int64_t l = 0; l < R; ++l) {
      long double s = 0;
      for (int64_t k = 0; k < Q; ++k) s += fourier_abs(atoms, w, k * R + l * Q, P);
      best = std::max(best, s / std::sqrt(static_cast<long double>(Q)));
    }
  }
  return best;
}

inline long double beta(const std::vector<int64_t>& atoms, const std::vector<long double>& w, int64_t P) {
  long double best = 0;
  for (int64_t t = 1; t < P; ++t) best = std::max(best, fourier_abs(atoms, w, t, P));
  return best;
}

// Every set partition of {0..r-1}, as block-index vectors (restricted growth strings).
inline void set_partitions(std::size_t r, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> a(r, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int blocks) {
    if (i == r) {
      visit(a);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      a[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (r == 0) {
    visit(a);
    return;
  }
  rec(0, 0);
}

// All y-mergings of rho, by brute force over set partitions of its parts.
inline std::set<std::vector<unsigned>> mergings(const std::vector<unsigned>& rho, unsigned y) {
  std::set<std::vector<unsigned>> out;
  set_partitions(rho.size(), [&](const std::vector<int>& blk) {
    std::map<int, std::vector<unsigned>> blocks;
    for (std::size_t i = 0; i < rho.size(); ++i) blocks[blk[i]].push_back(rho[i]);
    std::vector<unsigned> sigma;
    for (auto& [b, parts] : blocks) {
      if (parts.size() > y) return;
      for (auto x : parts)
        if (x != parts[0]) return;
      sigma.push_back(std::accumulate(parts.begin(), parts.end(), 0u));
    }
    std::sort(sigma.begin(), sigma.end());
    out.insert(sigma);
  });
  return out;
}

// Cycle type of g^m for an explicit permutation g with cycle type sigma.
inline std::vector<unsigned> power_type(const std::vector<unsigned>& sigma, uint64_t m) {
  std::vector<unsigned> perm;
  unsigned base = 0;
  for (unsigned len : sigma) {
    for (unsigned i = 0; i < len; ++i) perm.push_back(base + (i + 1) % len);
    base += len;
  }
  const std::size_t n = perm.size();
  uint64_t order = 1;
  for (unsigned len : sigma) order = std::lcm(order, uint64_t{len});
  m %= order;
  std::vector<unsigned> pm(n);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned x = static_cast<unsigned>(i);
    for (uint64_t k = 0; k < m; ++k) x = perm[x];
    pm[i] = x;
  }
  std::vector<bool> seen(n, false);
  std::vector<unsigned> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    for (std::size_t x = i; !seen[x]; x = pm[x]) {
      seen[x] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All partitions of n, ascending parts.
inline std::vector<std::vector<unsigned>> partitions(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned left, unsigned minpart) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned x = minpart; x <= left; ++x) {
      cur.push_back(x);
      rec(left - x, x);
      cur.pop_back();
    }
  };
  rec(n, 1);
  return out;
}

}  // namespace oracle
