#include <cmath>

#include "anatomy.hpp"
#include "common.hpp"
#include "doctest.h"
#include "numtheory.hpp"
#include "oracles.hpp"

using namespace irrlab;

namespace {

// Number of monic irreducibles of degree k other than T, by enumeration.
uint64_t irreducibles_without_t(int64_t p, unsigned k) {
  const auto v = oracle::irreducibles(p, k);
  return v.size() - (k == 1 ? 1 : 0);
}

// Under the uniform law, I^j | A with probability p^(-j deg I) whenever j deg I <= n.
mpq_class power_sum(int64_t p, unsigned n, unsigned k, bool with_multiplicity) {
  mpq_class s = 0;
  for (unsigned j = 1; j * k <= n; ++j) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, j * k);
    s += mpq_class(1, pk);
    if (!with_multiplicity) break;
  }
  return s;
}

}  // namespace

TEST_SUITE("anatomy") {
  TEST_CASE("exponential decay fit") {
    std::vector<std::pair<unsigned, double>> xy;
    for (unsigned u = 2; u <= 8; ++u) xy.emplace_back(u, 3.0 * std::exp(-0.7 * u));
    xy.emplace_back(9, 0.0);
    const auto f = fit_exponential_decay(xy);
    CHECK(f.points == 7);
    CHECK(f.rate == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fit_exponential_decay({{2, 0.5}}).points == 1);
    CHECK(fit_exponential_decay({{2, 0.0}}).points == 0);

    const auto s = smooth_degree_stats(parse_measure_sequence("box:0..1"), 60, 2, 3, 4000, 9);
    if (s.decay.points >= 2) CHECK(s.decay.rate > 0);
  }

  TEST_CASE("smooth degree with m = 0 is zero") {
    const auto s = smooth_degree_stats(parse_measure_sequence("box:0..4"), 12, 5, 0, 500, 1);
    CHECK(s.histogram[0] == 500);
    CHECK(s.mean == 0);
  }

  TEST_CASE("smooth degree expectation formula") {
    for (int64_t p : {2, 3})
      for (unsigned n : {6u, 10u})
        for (unsigned m = 1; m <= 4; ++m) {
          mpq_class expect = 0;
          for (unsigned k = 1; k <= m; ++k) expect += k * irreducibles_without_t(p, k) * power_sum(p, n, k, true);
          CHECK(smooth_degree_expectation(p, n, m) == expect);
        }
  }

  TEST_CASE("smooth degree exhaustive mean") {
    // Average deg S(m) over all of M_2(10), computed with trial division.
    const unsigned n = 10, m = 3;
    mpq_class total = 0;
    for (uint64_t i = 0; i < 1024; ++i) {
      oracle::Poly a = oracle::monic(2, n, i);
      unsigned deg = 0;
      for (unsigned k = 1; k <= m; ++k)
        for (const auto& I : oracle::irreducibles(2, k)) {
          if (k == 1 && I[0] == 0) continue;
          oracle::Poly power = I;
          while (power.size() <= a.size() && oracle::divides(power, a, 2)) {
            deg += k;
            power = oracle::mul(power, I, 2);
          }
        }
      total += deg;
    }
    CHECK(smooth_degree_expectation(2, n, m) == total / 1024);
  }

  TEST_CASE("smooth degree statistics against the exact mean") {
    const auto s = smooth_degree_stats(parse_measure_sequence("box:0..1"), 64, 2, 8, 20000, 42);
    CHECK(s.exact_reference_applies);
    CHECK(std::fabs(s.z_score) <= 5);
    for (std::size_t i = 1; i < s.tail.size(); ++i) CHECK(s.tail[i].second <= s.tail[i - 1].second);
  }

  TEST_CASE("smooth and rough degrees add up") {
    const auto mus = parse_measure_sequence("box:-3..9");
    for (uint64_t i = 0; i < 300; ++i) {
      Stream rng(5, i);
      const auto a = sample_reduction(mus, 20, 3, rng);
      CHECK(a.degree() == 20);
      const auto sr = smooth_rough_split(a, 2);
      CHECK(sr.smooth.degree() + sr.rough.degree() == 20);
    }
  }

  TEST_CASE("additive tails") {
    const auto mus = parse_measure_sequence("box:0..2");
    const auto zero = additive_tail(mus, 30, 3, std::vector<bool>(5, false), 4, 0.5, AdditiveMode::Distinct, 300, 1);
    CHECK(zero.L == 0);
    CHECK(zero.lower_tail == 1.0);

    std::vector<bool> f(5, true);
    const auto t1 = additive_tail(mus, 30, 3, f, 4, 1.0, AdditiveMode::Distinct, 3000, 2);
    CHECK(t1.lower_tail + t1.upper_tail >= 1.0);

    for (auto mode : {AdditiveMode::Distinct, AdditiveMode::WithMultiplicity}) {
      const bool mult = mode == AdditiveMode::WithMultiplicity;
      mpq_class expect = 0;
      for (unsigned k = 1; k <= 4; ++k) expect += irreducibles_without_t(3, k) * power_sum(3, 30, k, mult);
      CHECK(additive_expectation(3, 30, f, 4, mode) == expect);
      const auto r = additive_tail(mus, 30, 3, f, 4, 0.5, mode, 20000, 3);
      CHECK(r.exact_reference_applies);
      CHECK(std::fabs(r.mean - r.exact_mean.get_d()) <= 5 * r.stderr_mean + 1e-12);
    }
  }

  TEST_CASE("divisor density") {
    CHECK(divisor_degree_density(2, 12, 0, true).fraction == 1.0);
    CHECK(divisor_degree_density(2, 12, 13, true).fraction == 0.0);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < 4096; ++i) hits += oracle::divisor_degrees(oracle::monic(2, 12, i), 2)[4];
    const auto ex = divisor_degree_density(2, 12, 4, true);
    CHECK(ex.hits == hits);
    CHECK(ex.total == 4096);
    const auto mc = divisor_degree_density(2, 12, 4, false, 10000, 8);
    CHECK(std::fabs(mc.fraction - ex.fraction) <= 5 * mc.stderr_fraction);
  }

  TEST_CASE("divisor counts match enumeration for p = 2, n <= 10") {
    for (unsigned n = 1; n <= 10; ++n) {
      std::vector<uint64_t> expect(n + 1, 0);
      for (uint64_t i = 0; i < oracle::ipow(2, n); ++i) {
        const auto d = oracle::divisor_degrees(oracle::monic(2, n, i), 2);
        for (unsigned k = 0; k <= n; ++k) expect[k] += d[k];
      }
      CHECK(divisor_degree_counts(2, n) == expect);
    }
  }

  TEST_CASE("normal events") {
    CHECK(normal_checkpoints(64, 2) == std::vector<unsigned>{2, 4, 8, 15});
    const auto mus = parse_measure_sequence("box:0..1");
    const auto primes = PrimeModulusSet::of({2});
    CHECK(normal_event_rate(mus, 64, primes, 10, 2, 400, 1).rate == 1.0);
    CHECK_THROWS_AS(normal_event_rate(mus, 64, primes, 1, 2, 0, 1), DomainError);
    double prev = 1.0;
    for (double eps : {2.0, 1.0, 0.5, 0.25, 0.1}) {
      const double r = normal_event_rate(mus, 64, primes, eps, 2, 1000, 9).rate;
      CHECK(r <= prev);
      prev = r;
    }
  }

  TEST_CASE("sample streams do not depend on the thread count") {
    const auto mus = parse_measure_sequence("box:0..6");
    const auto a = smooth_degree_stats(mus, 30, 7, 3, 3000, 5, 1);
    const auto b = smooth_degree_stats(mus, 30, 7, 3, 3000, 5, 4);
    CHECK(a.histogram == b.histogram);
  }
}
