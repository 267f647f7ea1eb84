#include "common.hpp"
#include "doctest.h"
#include "numtheory.hpp"
#include "oracles.hpp"
#include "sieve.hpp"
#include "sieve_oracle.hpp"

using namespace irrlab;

namespace {

// prod_{k<=m} (1 - p^-k)^{N_k}, N_k = number of monic irreducibles of degree k other than T,
// with N_k from Gauss's formula evaluated in exact integers.
mpq_class euler_oracle(uint64_t p, unsigned m) {
  mpq_class out = 1;
  for (unsigned k = 1; k <= m; ++k) {
    mpz_class s = 0;
    for (unsigned d = 1; d <= k; ++d) {
      if (k % d) continue;
      mpz_class pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), p, k / d);
      s += oracle::mobius(d) * pw;
    }
    mpz_class count = s / k;
    if (k == 1) count -= 1;
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
    const mpq_class factor(pk - 1, pk);
    for (mpz_class i = 0; i < count; ++i) out *= factor;
  }
  return out;
}

}  // namespace

TEST_SUITE("sieve") {
  TEST_CASE("families") {
    const auto f = IrreducibleFamily::all_up_to(2, 3);
    CHECK(f.members.size() == 1 + 1 + 2);
    for (auto& I : f.members) CHECK(I != FpPoly::monomial(2, 1));
    IrreducibleFamily bad{2, 2, {FpPoly(2, {1, 0, 1})}};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK(default_truncation(0) == 2);
    CHECK(default_truncation(11) == static_cast<unsigned>(std::ceil(1.5 + 2 * std::log(11.0))));
  }

  TEST_CASE("bonferroni sandwich") {
    for (uint64_t p : {2, 3, 5})
      for (unsigned m = 1; m <= 3; ++m) {
        const auto fam = IrreducibleFamily::all_up_to(p, m);
        mpq_class full = 1;
        for (auto& I : fam.members) {
          mpz_class norm;
          mpz_ui_pow_ui(norm.get_mpz_t(), p, static_cast<unsigned long>(I.degree()));
          full *= 1 - mpq_class(1, norm);
        }
        for (unsigned v = 0; v <= 3; ++v) {
          const auto s = bonferroni_sums(fam, v);
          CHECK(s.full == full);
          CHECK(s.lower <= s.full);
          CHECK(s.full <= s.upper);
        }
      }
  }

  TEST_CASE("rough fraction examples") {
    CHECK(rough_fraction_exact(2, 3, 1) == mpq_class(1, 2));
    CHECK(rough_fraction_exact(3, 5, 0) == 1);
    CHECK(rough_fraction_exact(2, 4, 4) == mpq_class(1, 16));
    CHECK(rough_fraction_exact(3, 3, 7) == mpq_class(1, 27));
  }

  TEST_CASE("rough fraction matches enumeration") {
    for (int64_t p : {2, 3})
      for (unsigned n = 1; n <= (p == 2 ? 12u : 9u); ++n)
        for (unsigned m = 0; m <= 4; ++m) CHECK(rough_fraction_exact(p, n, m) == oracle::rough_fraction(p, n, m));
  }

  TEST_CASE("brun examples") {
    const auto set = PrimeModulusSet::of({2});
    const auto uni = parse_measure_sequence("box:0..1");
    IrreducibleFamily one{2, 1, {FpPoly(2, {1, 1})}};
    const auto r = brun_upper_bound(uni, 3, set, {FpPoly::one(2)}, {one});
    REQUIRE(r.exact_available);
    CHECK(r.exact == mpq_class(1, 2));
    CHECK(r.main_term == 1);
    CHECK(r.bound >= r.exact);

    IrreducibleFamily none{2, 0, {}};
    const auto e = brun_upper_bound(uni, 5, set, {FpPoly::one(2)}, {none});
    CHECK(e.main_term == 2);
    CHECK(e.exact == 1);
    CHECK(e.bound >= e.exact);
  }

  TEST_CASE("brun bound dominates exact probabilities") {
    for (uint64_t p : {2, 3}) {
      const auto set = PrimeModulusSet::of({p});
      const auto uni = parse_measure_sequence("box:0.." + std::to_string(p - 1));
      for (unsigned m = 0; m <= 4; ++m) {
        const auto fam = IrreducibleFamily::all_up_to(p, m);
        for (unsigned n = 1; n <= (p == 2 ? 12u : 8u); ++n) {
          const auto r = brun_upper_bound(uni, n, set, {FpPoly::one(p)}, {fam});
          REQUIRE(r.exact_available);
          CHECK(r.exact == oracle::rough_fraction(static_cast<int64_t>(p), n, m));
          CHECK(r.bound >= r.exact);
          CHECK(r.truncated_bound >= r.exact);
          CHECK(r.ok);
          CHECK_FALSE(r.degree_hypothesis);
        }
      }
    }
  }

  TEST_CASE("brun with a nontrivial D and a skewed law") {
    const auto set = PrimeModulusSet::of({3});
    const auto mus = parse_measure_sequence("box:0..4");
    const auto fam = IrreducibleFamily::all_up_to(3, 2);
    for (unsigned n = 3; n <= 7; ++n) {
      const auto r = brun_upper_bound(mus, n, set, {FpPoly(3, {1, 1})}, {fam});
      REQUIRE(r.exact_available);
      CHECK(r.bound >= r.exact);
    }
  }

  TEST_CASE("brun two primes") {
    const auto set = PrimeModulusSet::of({2, 3});
    const auto mus = parse_measure_sequence("box:0..5");
    const auto r = brun_upper_bound(mus, 5, set, {FpPoly::one(2), FpPoly::one(3)},
                                    {IrreducibleFamily::all_up_to(2, 2), IrreducibleFamily::all_up_to(3, 1)});
    REQUIRE(r.exact_available);
    CHECK(r.bound >= r.exact);
    CHECK(r.exact > 0);
  }

  TEST_CASE("euler product") {
    const auto e2 = euler_product(2, 2);
    REQUIRE(e2.exact);
    CHECK(e2.value == mpq_class(3, 8));
    CHECK(e2.bound_ok);
    const auto e0 = euler_product(5, 0);
    CHECK(e0.value == 1);
    CHECK(e0.bound_ok);
    const auto e7 = euler_product(7, 10);
    CHECK(e7.bound_ok);
    CHECK(e7.enclosure.upper() <= 2.0 / 11);
    for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
      double prev = 1.5;
      for (unsigned m = 0; m <= 20; ++m) {
        const auto e = euler_product(p, m);
        CHECK(e.bound_ok);
        CHECK(e.enclosure.upper() <= 2.0 / (m + 1));
        if (e.exact && m <= 6) CHECK(e.value == euler_oracle(p, m));
        CHECK(e.enclosure.upper() < prev);
        prev = e.enclosure.upper();
      }
    }
  }
}
