#include "common.hpp"
#include "doctest.h"
#include "fpoly.hpp"
#include "numtheory.hpp"
#include "oracles.hpp"

using namespace irrlab;

namespace {

FpPoly P(uint64_t p, std::vector<uint64_t> c) { return FpPoly(p, std::move(c)); }

oracle::Poly to_oracle(const FpPoly& f) {
  oracle::Poly out;
  for (auto c : f.coeffs()) out.push_back(static_cast<int64_t>(c));
  return out;
}

FpPoly random_monic(uint64_t p, unsigned n, Stream& rng) {
  std::vector<uint64_t> c(n + 1);
  for (unsigned i = 0; i < n; ++i) c[i] = rng.below(p);
  c[n] = 1;
  return FpPoly(p, std::move(c));
}

}  // namespace

TEST_SUITE("fpoly") {
  TEST_CASE("text format") {
    const auto f = parse_fpoly("2:1,1,0,1");
    CHECK(f.p() == 2);
    CHECK(f.degree() == 3);
    CHECK(f.str() == "2:1,1,0,1");
    CHECK(parse_fpoly("5:7,0,1").coeff(0) == 2);
    CHECK_THROWS_AS(parse_fpoly("4:1,1"), ParseError);
    CHECK_THROWS_AS(parse_fpoly("x"), ParseError);
    CHECK_THROWS_AS(parse_fpoly("3:1,a"), ParseError);
  }

  TEST_CASE("arithmetic matches the oracle") {
    Stream rng(3, 0);
    for (int i = 0; i < 200; ++i) {
      const uint64_t p = std::array<uint64_t, 4>{2, 3, 5, 13}[rng.below(4)];
      const auto a = random_monic(p, 1 + rng.below(12), rng);
      const auto b = random_monic(p, 1 + rng.below(6), rng);
      CHECK(to_oracle(a * b) == oracle::mul(to_oracle(a), to_oracle(b), p));
      CHECK(to_oracle(a % b) == oracle::mod(to_oracle(a), to_oracle(b), p));
      FpPoly q, r;
      a.divmod(b, q, r);
      CHECK(q * b + r == a);
      CHECK(gcd(a * b, b) == b);
    }
  }

  TEST_CASE("factor examples") {
    const auto f = factor(P(2, {0, 1, 1}));
    REQUIRE(f.size() == 2);
    CHECK(f[0].f == P(2, {0, 1}));
    CHECK(f[1].f == P(2, {1, 1}));

    const auto g = factor(P(2, {1, 1, 0, 0, 1}));
    REQUIRE(g.size() == 1);
    CHECK(g[0].mult == 1);
    CHECK(oracle::irreducible({1, 1, 0, 0, 1}, 2));

    const auto h = factor(P(3, {0, 2, 0, 1}));
    REQUIRE(h.size() == 3);
    for (auto& [fac, e] : h) {
      CHECK(fac.degree() == 1);
      CHECK(e == 1);
    }
    CHECK_THROWS_AS(factor(P(3, {1, 2})), DomainError);
  }

  TEST_CASE("is_irreducible examples and exhaustive agreement") {
    CHECK(is_irreducible(P(2, {1, 1, 1})));
    CHECK_FALSE(is_irreducible(P(2, {1, 0, 1})));
    CHECK(is_irreducible(P(5, {2, 0, 0, 0, 1})) == oracle::irreducible({2, 0, 0, 0, 1}, 5));
    for (uint64_t p : {2, 3}) {
      for (unsigned n = 1; n <= (p == 2 ? 9u : 6u); ++n)
        for (uint64_t i = 0; i < oracle::ipow(p, n); ++i) {
          const auto f = FpPoly::monic_from_index(p, n, i);
          CHECK(is_irreducible(f) == oracle::irreducible(oracle::monic(p, n, i), p));
        }
    }
  }

  TEST_CASE("factorization type against trial division") {
    Stream rng(8, 0);
    for (int i = 0; i < 300; ++i) {
      const uint64_t p = std::array<uint64_t, 3>{2, 3, 5}[rng.below(3)];
      const auto a = random_monic(p, 1 + rng.below(p == 2 ? 12 : 7), rng);
      const auto t = factorization_type(a);
      CHECK(t.rho.parts == oracle::factor_degrees(to_oracle(a), p));
      CHECK(t.tau >= (mpz_class(1) << t.omega));
      CHECK((t.tau == (mpz_class(1) << t.omega)) == is_squarefree(a));
    }
    const auto ex = factorization_type(P(2, {0, 1}) * P(2, {1, 1}) * P(2, {1, 1, 1}));
    CHECK(ex.rho.str() == "(1,1,2)");
    CHECK(ex.tau == 8);
    CHECK(ex.omega == 3);
    const auto cube = factorization_type(P(2, {1, 1}) * P(2, {1, 1}) * P(2, {1, 1}));
    CHECK(cube.rho.str() == "(1,1,1)");
    CHECK(cube.tau == 4);
    CHECK(cube.omega == 1);
  }

  TEST_CASE("count_irreducibles") {
    CHECK(count_irreducibles(2, 1) == 2);
    CHECK(count_irreducibles(2, 4) == 3);
    CHECK(count_irreducibles(3, 2) == 3);
    for (uint64_t p : {2, 3, 5})
      for (unsigned k = 1; k <= (p == 2 ? 8u : 4u); ++k)
        CHECK(count_irreducibles(p, k) == oracle::irreducibles(p, k).size());
    CHECK(monic_irreducibles(3, 3).size() == 8);
  }

  TEST_CASE("count_irreducibles brackets for p <= 13, k <= 16") {
    for (uint64_t p : {2, 3, 5, 7, 11, 13})
      for (unsigned k = 1; k <= 16; ++k) {
        const mpz_class c = count_irreducibles(p, k);
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
        CHECK(c * k <= pk);
        // k c >= p^k - 2 p^(k/2)  <=>  (p^k - k c)^2 <= 4 p^k when p^k >= k c.
        const mpz_class gap = pk - c * k;
        CHECK(gap * gap <= 4 * pk);
        const long double g = oracle::gauss_count(p, k);
        CHECK(std::fabs(static_cast<long double>(c.get_d()) - g) <= 1e-9L * g + 0.5L);
      }
  }

  TEST_CASE("factor round trip on random inputs") {
    Stream rng(21, 0);
    for (int i = 0; i < 2000; ++i) {
      const uint64_t p = std::array<uint64_t, 5>{2, 3, 5, 7, 13}[rng.below(5)];
      const auto a = random_monic(p, 1 + rng.below(64), rng);
      const auto fac = factor(a, i);
      CHECK(product(fac) == a);
      for (auto& [f, e] : fac) CHECK(is_irreducible(f));
    }
  }

  TEST_CASE("factorization is reproducible for a seed") {
    const auto a = FpPoly::monic_from_index(3, 30, 123456789);
    const auto f1 = factor(a, 9), f2 = factor(a, 9);
    REQUIRE(f1.size() == f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) CHECK(f1[i].f == f2[i].f);
  }

  TEST_CASE("smooth rough split") {
    const auto t = P(2, {0, 1}), t1 = P(2, {1, 1}), q = P(2, {1, 1, 1});
    auto s = smooth_rough_split(t * t1 * q, 1);
    CHECK(s.smooth == t1);
    CHECK(s.rough == t * q);
    s = smooth_rough_split(t1 * t1, 2);
    CHECK(s.smooth == t1 * t1);
    CHECK(s.rough.is_one());
    const auto t3 = FpPoly::monomial(3, 5);
    s = smooth_rough_split(t3, 5);
    CHECK(s.smooth.is_one());
    CHECK(s.rough == t3);

    Stream rng(4, 0);
    for (int i = 0; i < 200; ++i) {
      const auto a = random_monic(3, 1 + rng.below(20), rng);
      const unsigned m = static_cast<unsigned>(rng.below(6));
      const auto sr = smooth_rough_split(a, m);
      CHECK(sr.smooth * sr.rough == a);
      CHECK(sr.smooth.coeff(0) != 0);
      for (auto& [f, e] : factor(sr.smooth)) CHECK(static_cast<unsigned>(f.degree()) <= m);
      for (auto& [f, e] : factor(sr.rough))
        CHECK((static_cast<unsigned>(f.degree()) > m || f == FpPoly::monomial(3, 1)));
    }
  }

  TEST_CASE("divisor degree sets") {
    const auto t = P(2, {0, 1}), t1 = P(2, {1, 1}), q = P(2, {1, 1, 1});
    CHECK(divisor_degree_set(t * t1 * q) == std::vector<bool>{true, true, true, true, true});
    CHECK(divisor_degree_set(q * q) == std::vector<bool>{true, false, true, false, true});
    CHECK(divisor_degree_set(P(2, {1, 1, 0, 0, 1})) == std::vector<bool>{true, false, false, false, true});
  }

  TEST_CASE("divisor degree sets agree with enumeration for p=2, degree <= 14") {
    Stream rng(30, 0);
    for (unsigned n = 1; n <= 14; ++n) {
      const uint64_t count = n <= 8 ? oracle::ipow(2, n) : 60;
      for (uint64_t i = 0; i < count; ++i) {
        const uint64_t idx = n <= 8 ? i : rng.below(oracle::ipow(2, n));
        CHECK(divisor_degree_set(FpPoly::monic_from_index(2, n, idx)) ==
              oracle::divisor_degrees(oracle::monic(2, n, idx), 2));
      }
    }
  }

  TEST_CASE("distinct degree counts") {
    const auto a = P(2, {0, 1}) * P(2, {1, 1}) * P(2, {1, 1, 1}) * P(2, {1, 1, 0, 0, 1});
    const auto d = distinct_degree_counts(a);
    CHECK(d == std::vector<std::pair<unsigned, unsigned>>{{1, 2}, {2, 1}, {4, 1}});
  }

  TEST_CASE("number theory helpers") {
    CHECK(primes_up_to(30) == std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(next_prime(7) == 11);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(euler_phi(36) == 12);
    CHECK(is_prime(1000000007ULL));
    CHECK_FALSE(is_prime(1));
    for (uint64_t n = 1; n < 500; ++n) CHECK(mobius(n) == oracle::mobius(n));
  }
}
