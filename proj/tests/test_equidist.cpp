#include <map>

#include "common.hpp"
#include "doctest.h"
#include "equidist.hpp"
#include "fourier.hpp"
#include "oracles.hpp"

using namespace irrlab;

namespace {

mpq_class frac(const mpz_class& a, const mpz_class& b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

oracle::Poly to_oracle(const FpPoly& f) {
  oracle::Poly out;
  for (auto c : f.coeffs()) out.push_back(static_cast<int64_t>(c));
  return out;
}

// Every coefficient vector in [lo, hi]^n with its probability (uniform box law).
template <class Fn>
void for_each_box_poly(int64_t lo, int64_t hi, unsigned n, Fn&& fn) {
  const int64_t w = hi - lo + 1;
  const uint64_t total = oracle::ipow(static_cast<uint64_t>(w), n);
  const mpq_class prob(1, mpz_class(std::to_string(total)));
  for (uint64_t idx = 0; idx < total; ++idx) {
    std::vector<int64_t> a(n + 1);
    uint64_t x = idx;
    for (unsigned j = 0; j < n; ++j) {
      a[j] = lo + static_cast<int64_t>(x % w);
      x /= w;
    }
    a[n] = 1;
    fn(a, prob);
  }
}

oracle::Poly reduce(const std::vector<int64_t>& a, int64_t p) {
  oracle::Poly r;
  for (auto c : a) r.push_back(((c % p) + p) % p);
  return oracle::trim(r);
}

// Law of (A mod D_i)_i by enumeration, keyed by the residue coefficient vectors.
std::map<std::vector<oracle::Poly>, mpq_class> brute_law(int64_t lo, int64_t hi, unsigned n,
                                                         const std::vector<FpPoly>& moduli) {
  std::map<std::vector<oracle::Poly>, mpq_class> law;
  for_each_box_poly(lo, hi, n, [&](const std::vector<int64_t>& a, const mpq_class& pr) {
    std::vector<oracle::Poly> key;
    for (auto& d : moduli) {
      const int64_t p = static_cast<int64_t>(d.p());
      key.push_back(oracle::mod(reduce(a, p), to_oracle(d), p));
    }
    law[key] += pr;
  });
  return law;
}

// Delta_P(n; m) straight from the definition.
mpq_class brute_delta(int64_t lo, int64_t hi, unsigned n, const std::vector<uint64_t>& primes, unsigned m) {
  std::vector<std::vector<FpPoly>> per_prime;
  for (auto p : primes) {
    std::vector<FpPoly> mods;
    for (unsigned d = 0; d <= m; ++d)
      for (uint64_t i = 0; i < oracle::ipow(p, d); ++i) {
        auto f = FpPoly::monic_from_index(p, d, i);
        if (f.coeff(0) != 0) mods.push_back(f);
      }
    per_prime.push_back(mods);
  }
  mpq_class total = 0;
  std::vector<std::size_t> pick(primes.size(), 0);
  while (true) {
    std::vector<FpPoly> tuple;
    mpz_class norm = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      tuple.push_back(per_prime[i][pick[i]]);
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), primes[i], static_cast<unsigned long>(tuple.back().degree()));
      norm *= pk;
    }
    const auto law = brute_law(lo, hi, n, tuple);
    const mpq_class target(1, norm);
    mpq_class worst = law.size() < norm ? target : mpq_class(0);  // classes never hit
    for (auto& [k, v] : law) worst = std::max(worst, mpq_class(abs(v - target)));
    total += worst;
    std::size_t i = 0;
    while (i < primes.size() && ++pick[i] == per_prime[i].size()) pick[i++] = 0;
    if (i == primes.size()) break;
  }
  return total;
}

}  // namespace

TEST_SUITE("equidist") {
  TEST_CASE("prime modulus sets") {
    const auto s = PrimeModulusSet::of({5, 2, 3});
    CHECK(s.primes == std::vector<uint64_t>{2, 3, 5});
    CHECK(s.P == 30);
    CHECK(s.index_of(3) == 1);
    CHECK_THROWS_AS(PrimeModulusSet::of({2, 4}), DomainError);
    CHECK_THROWS_AS(PrimeModulusSet::of({}), DomainError);
  }

  TEST_CASE("residue distribution examples") {
    const auto u = residue_distribution(parse_measure_sequence("box:1..3"), 4, {FpPoly(3, {2, 1})}, DistMethod::Dp);
    REQUIRE(u.size() == 3);
    for (auto& x : u.numer) CHECK(frac(x, u.denom) == mpq_class(1, 3));

    const auto pt =
        residue_distribution(parse_measure_sequence("delta:0"), 3, {FpPoly(2, {1, 1, 1})}, DistMethod::Dp);
    CHECK(pt.prob[pt.encode({FpPoly::one(2)})] == 1.0);
  }

  TEST_CASE("residue distribution matches enumeration") {
    Stream rng(2, 0);
    for (int trial = 0; trial < 30; ++trial) {
      const int64_t lo = static_cast<int64_t>(rng.below(5)) - 2;
      const int64_t hi = lo + static_cast<int64_t>(rng.below(3));
      const unsigned n = 1 + static_cast<unsigned>(rng.below(5));
      std::vector<FpPoly> moduli;
      for (uint64_t p : {2, 3}) {
        if (rng.below(3) == 0 && !moduli.empty()) continue;
        const unsigned d = 1 + static_cast<unsigned>(rng.below(2));
        moduli.push_back(FpPoly::monic_from_index(p, d, rng.below(oracle::ipow(p, d))));
      }
      const auto spec = "box:" + std::to_string(lo) + ".." + std::to_string(hi);
      const auto dist = residue_distribution(parse_measure_sequence(spec), n, moduli, DistMethod::Dp);
      REQUIRE(dist.exact);
      mpq_class sum = 0;
      for (auto& x : dist.numer) sum += frac(x, dist.denom);
      CHECK(sum == 1);
      const auto law = brute_law(lo, hi, n, moduli);
      std::size_t nonzero = 0;
      for (auto& x : dist.numer) nonzero += x != 0;
      CHECK(nonzero == law.size());
      for (auto& [key, v] : law) {
        std::vector<FpPoly> res;
        for (std::size_t i = 0; i < key.size(); ++i) {
          std::vector<uint64_t> c(key[i].begin(), key[i].end());
          res.push_back(FpPoly(moduli[i].p(), c));
        }
        CHECK(frac(dist.numer[dist.encode(res)], dist.denom) == v);
      }
    }
  }

  TEST_CASE("dp and fourier agree") {
    Stream rng(77, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const uint64_t p = std::array<uint64_t, 3>{2, 3, 5}[rng.below(3)];
      const unsigned n = 1 + static_cast<unsigned>(rng.below(8));
      const unsigned d = 1 + static_cast<unsigned>(rng.below(3));
      std::vector<FpPoly> moduli{FpPoly::monic_from_index(p, d, rng.below(oracle::ipow(p, d)))};
      if (trial == 0) moduli = {FpPoly(2, {1, 1, 1}), FpPoly(3, {1, 1})};
      const int64_t lo = static_cast<int64_t>(rng.below(7)) - 3;
      const auto mus = parse_measure_sequence("box:" + std::to_string(lo) + ".." + std::to_string(lo + static_cast<int64_t>(rng.below(6))));
      const auto a = residue_distribution(mus, n, moduli, DistMethod::Dp);
      const auto b = residue_distribution(mus, n, moduli, DistMethod::Fourier);
      CHECK(total_variation(a, b) <= 1e-9);
      double s = 0;
      for (double x : b.prob) s += x;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("marginal of a joint law is the single-prime law") {
    const auto mus = parse_measure_sequence("box:-1..3");
    const auto joint = residue_distribution(mus, 5, {FpPoly(2, {1, 1, 1}), FpPoly(3, {2, 0, 1})}, DistMethod::Dp);
    const auto m0 = residue_distribution(mus, 5, {FpPoly(2, {1, 1, 1})}, DistMethod::Dp);
    const auto m1 = residue_distribution(mus, 5, {FpPoly(3, {2, 0, 1})}, DistMethod::Dp);
    CHECK(total_variation(joint.marginal(0), m0) <= 1e-15);
    CHECK(total_variation(joint.marginal(1), m1) <= 1e-15);
    for (uint64_t i = 0; i < joint.size(); ++i) CHECK(joint.encode(joint.decode(i)) == i);
  }

  TEST_CASE("delta examples") {
    const auto d = delta(parse_measure_sequence("delta:0"), 3, PrimeModulusSet::of({2}), 1);
    REQUIRE(d.exact);
    CHECK(d.value == mpq_class(1, 2));
    CHECK(d.tuples == 2);
  }

  TEST_CASE("delta matches the definition") {
    struct Case {
      int64_t lo, hi;
      unsigned n;
      std::vector<uint64_t> primes;
      unsigned m;
    };
    for (const Case& c : {Case{0, 1, 4, {2}, 2}, Case{1, 3, 3, {2}, 2}, Case{0, 3, 3, {3}, 1}, Case{-1, 1, 4, {3}, 2},
                          Case{0, 2, 3, {2, 3}, 1}, Case{0, 0, 5, {2, 3}, 2}, Case{1, 2, 4, {5}, 1}}) {
      const auto spec = "box:" + std::to_string(c.lo) + ".." + std::to_string(c.hi);
      const auto d = delta(parse_measure_sequence(spec), c.n, PrimeModulusSet::of(c.primes), c.m);
      REQUIRE(d.exact);
      CHECK(d.value == brute_delta(c.lo, c.hi, c.n, c.primes, c.m));
    }
  }

  TEST_CASE("delta vanishes for residue-uniform laws") {
    for (uint64_t p : {2, 3, 5}) {
      const auto mus = parse_measure_sequence("box:1.." + std::to_string(p));
      const auto tab = delta_table(mus, 6, PrimeModulusSet::of({p}), p == 5 ? 3 : 4);
      for (auto& row : tab)
        for (auto& d : row) {
          CHECK(d.exact);
          if (d.m <= d.n)
            CHECK(d.value == 0);
          else
            CHECK(d.value > 0);
        }
    }
  }

  TEST_CASE("delta is nondecreasing in m") {
    const auto mus = parse_measure_sequence("box:0..2");
    const auto tab = delta_table(mus, 6, PrimeModulusSet::of({2}), 4);
    for (auto& row : tab)
      for (std::size_t m = 1; m < row.size(); ++m) CHECK(row[m].value >= row[m - 1].value);
  }

  TEST_CASE("delta cap") {
    CHECK_THROWS_AS(delta(parse_measure_sequence("box:0..2"), 30, PrimeModulusSet::of({5, 7}), 6, false, 1, 1000),
                    CapExceeded);
  }

  TEST_CASE("residue sequence matches remainders") {
    Stream rng(9, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const uint64_t p = std::array<uint64_t, 3>{2, 3, 5}[rng.below(3)];
      const unsigned h = 1 + static_cast<unsigned>(rng.below(4));
      const auto H = FpPoly::monic_from_index(p, h, rng.below(oracle::ipow(p, h)));
      const auto G = FpPoly::monic_from_index(p, h - 1, rng.below(oracle::ipow(p, h - 1)));
      const auto seq = residue_sequence(G, H, 12);
      for (unsigned j = 0; j < 12; ++j) {
        const auto r = oracle::mod(to_oracle(G * FpPoly::monomial(p, j)), to_oracle(H), static_cast<int64_t>(p));
        const uint64_t expect = r.size() >= h ? static_cast<uint64_t>(r[h - 1]) : 0;
        CHECK(seq[j] == expect);
      }
    }
  }

  TEST_CASE("s_value") {
    const auto primes = PrimeModulusSet::of({3});
    const auto mus = parse_measure_sequence("box:0..4");
    const auto zero = s_value(mus, 6, primes, {{FpPoly::zero(3)}, {FpPoly::one(3)}});
    CHECK(zero.value.contains(1.0));

    const auto uni = parse_measure_sequence("box:1..3");
    const auto s = s_value(uni, 6, primes, {{FpPoly(3, {1})}, {FpPoly(3, {1, 1})}});
    CHECK(s.value.upper() < 1e-12);

    Stream rng(12, 0);
    for (int trial = 0; trial < 50; ++trial) {
      const unsigned l = 1 + static_cast<unsigned>(rng.below(3));
      auto H = FpPoly::monic_from_index(3, l, rng.below(oracle::ipow(3, l)));
      if (H.coeff(0) == 0) continue;
      auto G = FpPoly(3, {1 + rng.below(2)});
      if (gcd(G, H).degree() > 0) continue;
      const auto r = s_value(mus, 8, primes, {{G}, {H}});
      CHECK(r.linf_applicable);
      CHECK(r.linf_ok);
      CHECK(r.value.lower() <= r.linf_bound.upper());
    }
  }

  TEST_CASE("delta_ell") {
    const auto uni = parse_measure_sequence("box:1..2");
    const auto z = delta_ell(uni, 6, PrimeModulusSet::of({2}), {2});
    CHECK(z.value.upper() < 1e-12);
    CHECK_THROWS_AS(delta_ell(uni, 6, PrimeModulusSet::of({2}), {0}), DomainError);
    for (uint64_t p : {2, 3})
      for (unsigned n = 2; n <= 10; n += 2)
        for (unsigned l = 1; l <= 3; ++l) {
          if (p == 3 && l == 3 && n > 6) continue;
          const auto r = delta_ell(parse_measure_sequence("box:0..3"), n, PrimeModulusSet::of({p}), {l});
          CHECK(r.discrete_l1_ok);
          CHECK(r.pointwise_linf_ok);
          CHECK(r.value.lower() <= r.bound_discrete_l1.upper());
        }
  }
}
