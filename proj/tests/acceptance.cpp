// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "anatomy.hpp"
#include "common.hpp"
#include "equidist.hpp"
#include "experiments.hpp"
#include "fourier.hpp"
#include "fpoly.hpp"
#include "galois.hpp"
#include "numtheory.hpp"
#include "oracles.hpp"
#include "partition.hpp"
#include "report.hpp"
#include "sieve.hpp"
#include "sieve_oracle.hpp"

using namespace irrlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome alpha_sweep() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto sweep = certify_alpha_range(35, 33729, 210, 1);
  const double secs = seconds_since(t0);
  const auto tail = uniform_box_bound(33730, 210);
  o.pass = sweep.all_certified() && sweep.certified == 33729 - 35 + 1 && secs <= 60 && tail.below_one;
  o.detail = std::to_string(sweep.certified) + " of 33695 certified in " + fmt("%.2f", secs) +
             " s; analytic bound at 33730 = " + fmt("%.9f", tail.value.upper());
  return o;
}

Outcome alpha_exact() {
  Outcome o;
  const double r2 = 1 / std::sqrt(2.0), s6 = std::sqrt(6.0);
  const auto full = alpha_beta(parse_measure("box:1..210"), 210).alpha;
  const auto point = alpha_beta(parse_measure("delta:5"), 6).alpha;
  o.pass = full.lower() >= r2 - 1e-10 && full.upper() <= r2 + 1e-10 && point.lower() >= s6 - 1e-12 &&
           point.upper() <= s6 + 1e-12;
  o.detail = "alpha(210) in " + full.str() + ", alpha(6) in " + point.str();
  return o;
}

// Delta for coefficients uniform mod p, by enumerating all monic A of degree n.
mpq_class uniform_delta_oracle(int64_t p, unsigned n, unsigned m) {
  const uint64_t total = oracle::ipow(p, n);
  mpq_class sum = 0;
  for (unsigned d = 1; d <= m; ++d)
    for (uint64_t di = 0; di < oracle::ipow(p, d); ++di) {
      const auto D = oracle::monic(p, d, di);
      if (D[0] == 0) continue;
      std::map<oracle::Poly, uint64_t> law;
      for (uint64_t ai = 0; ai < total; ++ai) ++law[oracle::mod(oracle::monic(p, n, ai), D, p)];
      const mpq_class target(1, oracle::ipow(p, d));
      mpq_class worst = law.size() < oracle::ipow(p, d) ? target : mpq_class(0);
      for (auto& [r, c] : law) {
        mpq_class freq(c, total);
        freq.canonicalize();
        const mpq_class diff = freq - target;
        worst = std::max(worst, mpq_class(abs(diff)));
      }
      sum += worst;
    }
  return sum;
}

Outcome delta_zero() {
  Outcome o;
  std::size_t zero_cases = 0, oracle_cases = 0;
  for (uint64_t p : {2, 3, 5})
    for (const std::string spec : {"box:1.." + std::to_string(p), "box:-" + std::to_string(p) + ".." + std::to_string(p - 1)}) {
      const auto tab = delta_table(parse_measure_sequence(spec), 10, PrimeModulusSet::of({p}), 5);
      for (auto& row : tab)
        for (auto& d : row) {
          bool ok;
          if (d.m <= d.n) {
            // Moduli of degree <= n see exactly uniform residues.
            ok = d.exact ? d.value == 0 : (std::fabs(d.value_d) + d.error_bound <= 1e-12);
            ++zero_cases;
          } else {
            // deg D > n: A mod D = A, so Delta is positive; compare with enumeration.
            ok = d.exact && d.value == uniform_delta_oracle(static_cast<int64_t>(p), d.n, d.m) && d.value > 0;
            ++oracle_cases;
          }
          if (!ok) {
            o.pass = false;
            o.detail = "mismatch at p=" + std::to_string(p) + " n=" + std::to_string(d.n) + " m=" + std::to_string(d.m);
            return o;
          }
        }
    }
  o.detail = std::to_string(zero_cases) + " instances with m <= n are exactly 0; " + std::to_string(oracle_cases) +
             " instances with m > n match enumeration";
  return o;
}

Outcome dp_vs_fourier() {
  Outcome o;
  double worst = 0;
  bool joint = false;
  for (uint64_t i = 0; i < 100; ++i) {
    Stream rng(2024, i);
    std::vector<FpPoly> moduli;
    unsigned n;
    if (i == 0) {
      moduli = {FpPoly(2, {1, 1, 1}), FpPoly(5, {2, 1})};
      n = 6;
      joint = true;
    } else {
      const uint64_t p = std::array<uint64_t, 3>{2, 3, 5}[rng.below(3)];
      const unsigned d = 1 + static_cast<unsigned>(rng.below(3));
      moduli = {FpPoly::monic_from_index(p, d, rng.below(oracle::ipow(p, d)))};
      n = 1 + static_cast<unsigned>(rng.below(8));
    }
    const int64_t lo = static_cast<int64_t>(rng.below(9)) - 4;
    const auto mus = parse_measure_sequence("box:" + std::to_string(lo) + ".." + std::to_string(lo + 1 + static_cast<int64_t>(rng.below(6))));
    const auto a = residue_distribution(mus, n, moduli, DistMethod::Dp);
    const auto b = residue_distribution(mus, n, moduli, DistMethod::Fourier);
    worst = std::max(worst, total_variation(a, b));
  }
  o.pass = worst <= 1e-9 && joint;
  o.detail = "max total variation " + fmt("%.3e", worst) + " over 100 instances (one two-prime)";
  return o;
}

Outcome counting_and_factoring() {
  Outcome o;
  for (uint64_t p : {2, 3, 5, 7, 11, 13})
    for (unsigned k = 1; k <= 16; ++k) {
      mpz_class s = 0;
      for (unsigned d = 1; d <= k; ++d) {
        if (k % d) continue;
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), p, k / d);
        s += oracle::mobius(d) * pw;
      }
      const mpz_class c = count_irreducibles(p, k);
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
      const mpz_class gap = pk - c * k;
      // p^k/k - 2 p^(k/2)/k <= pi_p(k) <= p^k/k.
      if (c * k != s || gap < 0 || gap * gap > 4 * pk) {
        o.pass = false;
        o.detail = "count mismatch at p=" + std::to_string(p) + " k=" + std::to_string(k);
        return o;
      }
    }
  for (uint64_t i = 0; i < 10000; ++i) {
    Stream rng(555, i);
    const uint64_t p = std::array<uint64_t, 5>{2, 3, 5, 7, 13}[rng.below(5)];
    const unsigned n = 1 + static_cast<unsigned>(rng.below(64));
    std::vector<uint64_t> c(n + 1);
    for (unsigned j = 0; j < n; ++j) c[j] = rng.below(p);
    c[n] = 1;
    const FpPoly a(p, c);
    const auto fac = factor(a, i);
    bool ok = product(fac) == a;
    for (auto& [f, e] : fac) ok = ok && f.is_monic() && is_irreducible(f);
    if (!ok) {
      o.pass = false;
      o.detail = "round trip failed for " + a.str();
      return o;
    }
  }
  o.detail = "counts match the Moebius formula and brackets; 10000 factorizations round-trip";
  return o;
}

Outcome brun_and_euler() {
  Outcome o;
  std::size_t cases = 0;
  for (uint64_t p : {2, 3}) {
    const auto set = PrimeModulusSet::of({p});
    const auto uni = parse_measure_sequence("box:0.." + std::to_string(p - 1));
    for (unsigned m = 0; m <= 4; ++m) {
      const auto fam = IrreducibleFamily::all_up_to(p, m);
      for (unsigned n = 1; n <= 12; ++n) {
        const auto exact = oracle::rough_fraction(static_cast<int64_t>(p), n, m);
        const auto r = brun_upper_bound(uni, n, set, {FpPoly::one(p)}, {fam});
        ++cases;
        if (!(r.truncated_bound >= exact && r.bound >= exact)) {
          o.pass = false;
          o.detail = "bound below exact at p=" + std::to_string(p) + " n=" + std::to_string(n) + " m=" + std::to_string(m);
          return o;
        }
      }
    }
  }
  for (uint64_t p : {2, 3, 5, 7, 11, 13})
    for (unsigned m = 0; m <= 20; ++m) {
      const auto e = euler_product(p, m);
      if (!e.bound_ok || e.enclosure.upper() > 2.0 / (m + 1)) {
        o.pass = false;
        o.detail = "Euler product bound fails at p=" + std::to_string(p) + " m=" + std::to_string(m);
        return o;
      }
    }
  o.detail = std::to_string(cases) + " sieve instances dominate exhaustive counts; 126 Euler products <= 2/(m+1)";
  return o;
}

Outcome divisor_density() {
  Outcome o;
  for (unsigned n = 1; n <= 14; ++n) {
    // A has a degree-k divisor iff A = D B with D monic of degree k: mark all products.
    std::vector<uint64_t> expect(n + 1, 0);
    for (unsigned k = 0; k <= n; ++k) {
      std::vector<bool> hit(oracle::ipow(2, n), false);
      for (uint64_t d = 0; d < oracle::ipow(2, k); ++d)
        for (uint64_t b = 0; b < oracle::ipow(2, n - k); ++b) {
          const auto a = oracle::mul(oracle::monic(2, k, d), oracle::monic(2, n - k, b), 2);
          uint64_t idx = 0;
          for (unsigned j = n; j-- > 0;) idx = idx * 2 + static_cast<uint64_t>(a[j]);
          hit[idx] = true;
        }
      for (bool h : hit) expect[k] += h;
    }
    for (unsigned k = 0; k <= n; ++k) {
      const auto d = divisor_degree_density(2, n, k, true);
      if (d.hits != expect[k]) {
        o.pass = false;
        o.detail = "exact mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k);
        return o;
      }
    }
  }
  double worst_z = 0;
  for (unsigned k = 1; k < 14; ++k) {
    const auto ex = divisor_degree_density(2, 14, k, true);
    const auto mc = divisor_degree_density(2, 14, k, false, 10000, 100 + k);
    const double sigma = std::sqrt(ex.fraction * (1 - ex.fraction) / 10000);
    const double z = sigma > 0 ? std::fabs(mc.fraction - ex.fraction) / sigma : 0;
    worst_z = std::max(worst_z, z);
  }
  o.pass = worst_z <= 5;
  o.detail = "exact counts match enumeration for n <= 14; worst MC deviation " + fmt("%.2f", worst_z) + " sigma";
  return o;
}

Outcome merging() {
  Outcome o;
  const auto rho = parse_partition("1,1,2,2,2,3");
  const bool example = is_y_merging(parse_partition("1,1,2,3,4"), rho, 2) &&
                       is_y_merging(parse_partition("2,2,3,4"), rho, 2) &&
                       !is_y_merging(parse_partition("2,3,6"), rho, 2);
  std::size_t checked = 0;
  bool brute = true;
  for (unsigned n = 1; n <= 8; ++n)
    for (auto& r : oracle::partitions(n))
      for (unsigned y = 1; y <= 4; ++y) {
        std::set<std::vector<unsigned>> got;
        for (auto& s : enumerate_mergings(Partition(r), y)) got.insert(s.parts);
        brute = brute && got == oracle::mergings(r, y);
        ++checked;
      }
  o.pass = example && brute;
  o.detail = std::string("worked example ") + (example ? "reproduced" : "NOT reproduced") + "; " +
             std::to_string(checked) + " (rho, y) pairs " + (brute ? "match" : "differ from") + " brute force";
  return o;
}

Outcome galois() {
  Outcome o;
  for (unsigned n = 3; n <= 10; ++n) {
    const auto c = frobenius_certify(parse_zpoly("T^" + std::to_string(n) + " - T - 1"), 200);
    if (c.outcome != GaloisOutcome::CertifiedAnOrSn) {
      o.pass = false;
      o.detail = "T^" + std::to_string(n) + " - T - 1 gave " + outcome_name(c.outcome);
      return o;
    }
  }
  const auto t4 = frobenius_certify(parse_zpoly("T^4 + 1"), 10000);
  o.pass = t4.outcome == GaloisOutcome::NoCertificate && t4.irreducible_reductions == 0;
  o.detail = "T^n - T - 1 certified for n = 3..10; T^4 + 1: " + std::string(outcome_name(t4.outcome)) + " after " +
             std::to_string(t4.primes_examined) + " primes, " + std::to_string(t4.irreducible_reductions) +
             " irreducible reductions";
  return o;
}

Outcome nu_bound() {
  Outcome o;
  const auto rep = nu_checks(parse_measure_sequence("box:0..1"), 12, 2, true);
  // Independent pair probabilities from trial-division factor degrees.
  std::vector<std::vector<unsigned>> types;
  for (uint64_t i = 0; i < 4096; ++i) types.push_back(oracle::factor_degrees(oracle::monic(2, 12, i), 2));
  std::size_t seen = 0;
  for (auto& pr : rep.pairs) {
    if (pr.k < 2 || pr.k > 3 || pr.l < 2 || pr.l > 3) continue;
    ++seen;
    uint64_t hits = 0;
    for (auto& t : types) {
      const auto ck = std::count(t.begin(), t.end(), pr.k);
      const auto cl = std::count(t.begin(), t.end(), pr.l);
      hits += pr.k == pr.l ? ck >= 2 : (ck >= 1 && cl >= 1);
    }
    const double expect = hits / 4096.0;
    if (std::fabs(pr.value - expect) > 1e-12 || pr.value > 2.0 / (pr.k * pr.l)) {
      o.pass = false;
      o.detail = "pair (" + std::to_string(pr.k) + "," + std::to_string(pr.l) + ") = " + fmt("%.6f", pr.value);
      return o;
    }
    o.detail += "(" + std::to_string(pr.k) + "," + std::to_string(pr.l) + ")=" + fmt("%.5f", pr.value) + " ";
  }
  o.pass = seen == 3 && rep.residue_uniform;
  o.detail += "all within 2/(k l)";
  return o;
}

Outcome mc_irreducibility_trend() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Proportion> red;
  for (unsigned n : {10u, 20u, 40u}) {
    McConfig cfg{"box:1..35", n, 10000, 20240601, {}};
    red.push_back(mc_irreducibility(cfg, 1).reducible);
  }
  bool trend = true;
  for (std::size_t i = 1; i < red.size(); ++i) {
    const double slack = 5 * std::hypot(red[i].stderr_estimate, red[i - 1].stderr_estimate);
    trend = trend && red[i].estimate <= red[i - 1].estimate + slack;
  }
  McConfig wide{"box:1..1000000", 5, 100000, 20240601, {}};
  const auto w = mc_irreducibility(wide, 1);
  const double secs = seconds_since(t0);
  o.pass = trend && w.rivin_ok && secs <= 300;
  o.detail = "reducible fractions " + fmt("%.4f", red[0].estimate) + ", " + fmt("%.4f", red[1].estimate) + ", " +
             fmt("%.4f", red[2].estimate) + "; wide box " + fmt("%.2e", w.reducible.estimate) + " vs Rivin " +
             fmt("%.2e", w.rivin_bound) + "; " + fmt("%.1f", secs) + " s";
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::pair<std::string, Json>> tasks = {
      {"certify-alpha", {{"measure", "box:1..60"}, {"modulus", 210}}},
      {"certify-alpha", {{"sweep", "35..2000"}}},
      {"delta", {{"measure", "box:0..2"}, {"primes", "2,3"}, {"n", 6}, {"m", 2}}},
      {"delta", {{"measure", "box:0..3"}, {"primes", "3"}, {"n", 6}, {"ell", "2"}}},
      {"residue-distribution", {{"measure", "box:0..4"}, {"n", 7}, {"moduli", "2:1,1,1;3:1,0,1"}}},
      {"brun-check", {{"primes", "2,3"}, {"n_max", 8}, {"m_max", 3}}},
      {"euler-product", {{"m_max", 12}}},
      {"rough-fraction", {{"p", 3}, {"n", 9}, {"m", 3}}},
      {"anatomy", {{"stat", "smooth"}, {"measure", "box:0..1"}, {"n", 40}, {"p", 2}, {"m", 5}, {"samples", 3000}}},
      {"anatomy", {{"stat", "additive"}, {"measure", "box:0..2"}, {"n", 30}, {"p", 3}, {"m", 4}, {"samples", 3000}}},
      {"anatomy",
       {{"stat", "normal"}, {"measure", "box:0..5"}, {"n", 48}, {"primes", "2,3"}, {"eps", 0.5}, {"m0", 2}, {"samples", 1000}}},
      {"density", {{"p", 2}, {"n", 12}, {"mode", "mc"}, {"samples", 4000}}},
      {"merge", {{"rho", "1,1,2,2,2,3"}, {"y", 2}, {"enumerate", true}, {"transitive", true}}},
      {"galois-cert", {{"poly", "T^9 - T - 1"}, {"budget", 200}}},
      {"nu", {{"measure", "box:0..1"}, {"n", 12}, {"p", 2}}},
      {"nu", {{"measure", "box:0..4"}, {"n", 14}, {"p", 3}, {"exhaustive", false}, {"samples", 3000}}},
      {"irreducible", {{"poly", "T^8 + 1"}}},
      {"factor", {{"poly", "5:1,2,3,4,0,1,1,2,1"}}},
      {"count-irreducibles", {{"p", 13}, {"k", 9}}},
      {"mc-irr", {{"measure", "box:1..35"}, {"n", 16}, {"samples", 3000}}},
      {"random-subset", {{"H", 10000}, {"N", 100}, {"trials", 40}}},
  };
  std::size_t identical = 0;
  for (auto& [cmd, params] : tasks) {
    std::string first;
    for (unsigned threads : {1u, 4u, 8u}) {
      TaskOptions opts;
      opts.threads = threads;
      opts.seed = 31337;
      std::string text;
      for (const char* format : {"json", "csv"}) text += render(run_task(cmd, params, opts), format);
      if (threads == 1) {
        first = text;
      } else if (text != first) {
        o.pass = false;
        o.detail = cmd + " differs at " + std::to_string(threads) + " threads";
        return o;
      }
    }
    ++identical;
  }
  o.detail = std::to_string(identical) + " reports byte-identical at 1, 4 and 8 workers";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"alpha certification sweep", alpha_sweep},
      {"exact alpha values", alpha_exact},
      {"equidistribution zero case", delta_zero},
      {"dp and fourier residue laws agree", dp_vs_fourier},
      {"irreducible counts and factor round trip", counting_and_factoring},
      {"sieve bound and Euler product", brun_and_euler},
      {"divisor density", divisor_density},
      {"partition merging", merging},
      {"Galois certifier", galois},
      {"partition measure pair bound", nu_bound},
      {"Monte Carlo irreducibility", mc_irreducibility_trend},
      {"determinism across worker counts", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("%s %2zu %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
