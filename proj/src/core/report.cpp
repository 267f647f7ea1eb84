#include "report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "anatomy.hpp"
#include "common.hpp"
#include "equidist.hpp"
#include "experiments.hpp"
#include "fourier.hpp"
#include "galois.hpp"
#include "numtheory.hpp"
#include "sieve.hpp"

namespace irrlab {
namespace {

// Parameter access.

template <class T>
T get(const Json& params, const char* key, T fallback) {
  if (!params.contains(key) || params[key].is_null()) return fallback;
  try {
    return params[key].get<T>();
  } catch (const Json::exception&) {
    throw ParseError(std::string("parameter '") + key + "' has the wrong type");
  }
}

template <class T>
T need(const Json& params, const char* key) {
  if (!params.contains(key) || params[key].is_null()) throw ParseError(std::string("missing parameter '") + key + "'");
  return get<T>(params, key, T{});
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

uint64_t to_u64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + ": not a nonnegative integer: '" + s + "'");
  }
}

// Accepts [2, 3] or "2,3".
std::vector<uint64_t> u64_list(const Json& params, const char* key) {
  if (!params.contains(key)) throw ParseError(std::string("missing parameter '") + key + "'");
  const Json& v = params[key];
  std::vector<uint64_t> out;
  if (v.is_string()) {
    for (auto& s : split(v.get<std::string>(), ',')) out.push_back(to_u64(s, key));
  } else if (v.is_array()) {
    for (auto& x : v) {
      if (!x.is_number_unsigned() && !x.is_number_integer()) throw ParseError(std::string(key) + ": expected integers");
      if (x.get<int64_t>() < 0) throw ParseError(std::string(key) + ": expected nonnegative integers");
      out.push_back(x.get<uint64_t>());
    }
  } else if (v.is_number_integer()) {
    out.push_back(v.get<uint64_t>());
  } else {
    throw ParseError(std::string(key) + ": expected a list");
  }
  return out;
}

std::vector<std::string> string_list(const Json& params, const char* key) {
  std::vector<std::string> out;
  if (!params.contains(key)) return out;
  const Json& v = params[key];
  if (v.is_string()) return split(v.get<std::string>(), ';');
  if (!v.is_array()) throw ParseError(std::string(key) + ": expected a list of strings");
  for (auto& x : v) out.push_back(x.get<std::string>());
  return out;
}

std::pair<int64_t, int64_t> parse_range(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) throw ParseError("range must look like LO..HI: '" + s + "'");
  try {
    return {std::stoll(s.substr(0, pos)), std::stoll(s.substr(pos + 2))};
  } catch (const std::exception&) {
    throw ParseError("bad range '" + s + "'");
  }
}

uint64_t seed_of(const Json& params, const TaskOptions& opts) {
  return get<uint64_t>(params, "seed", opts.seed.value_or(0));
}

// Value encoders.

Json interval(const CertifiedInterval& x) { return Json{{"lo", x.lower()}, {"hi", x.upper()}}; }

Json rational(const mpq_class& q) { return Json{{"exact", q.get_str()}, {"value", q.get_d()}}; }

Json proportion_json(const Proportion& p) {
  return Json{{"hits", p.hits}, {"total", p.total}, {"estimate", p.estimate}, {"ci95", {p.lo, p.hi}},
              {"stderr", p.stderr_estimate}};
}

Json alpha_json(const AlphaBeta& ab) {
  return Json{{"alpha", interval(ab.alpha)},       {"beta", interval(ab.beta)},
              {"alpha_Q", ab.alpha_Q},             {"alpha_ell", ab.alpha_ell},
              {"alpha_index", ab.alpha_index},     {"alpha_below_one", ab.alpha.upper() < 1.0}};
}

Json poly_list(const std::vector<FpPoly>& v) {
  Json out = Json::array();
  for (auto& f : v) out.push_back(f.str());
  return out;
}

// Commands.

Json cmd_certify_alpha(const Json& params, const TaskOptions& opts) {
  const int64_t P = get<int64_t>(params, "modulus", 210);
  Json r;
  if (params.contains("sweep")) {
    const auto [lo, hi] = parse_range(need<std::string>(params, "sweep"));
    const auto rep = certify_alpha_range(lo, hi, P, opts.threads);
    r = {{"H_lo", rep.H_lo},
         {"H_hi", rep.H_hi},
         {"P", rep.P},
         {"certified", rep.certified},
         {"certified_analytic", rep.certified_analytic},
         {"certified_direct", rep.certified_direct},
         {"failures", rep.failures},
         {"all_certified", rep.all_certified()},
         {"max_direct_alpha_upper", rep.max_direct_alpha_upper},
         {"max_direct_alpha_H", rep.max_direct_alpha_H}};
    if (params.contains("analytic_H")) {
      const auto b = uniform_box_bound(need<int64_t>(params, "analytic_H"), P);
      r["analytic"] = {{"H", need<int64_t>(params, "analytic_H")}, {"bound", interval(b.value)}, {"below_one", b.below_one}};
    }
    return r;
  }
  const auto mus = parse_measure_sequence(need<std::string>(params, "measure"));
  const auto n = get<std::size_t>(params, "n", 1);
  if (params.contains("find_modulus_x") || params.contains("window")) {
    std::optional<std::pair<uint64_t, uint64_t>> window;
    if (params.contains("window")) {
      const auto [lo, hi] = parse_range(need<std::string>(params, "window"));
      window = std::make_pair(static_cast<uint64_t>(lo), static_cast<uint64_t>(hi));
    }
    const auto g = find_good_modulus(mus, get<double>(params, "find_modulus_x", 0.0), n, window);
    return {{"best_primes", g.best.primes}, {"best_P", g.best.P}, {"alpha", alpha_json(g.alpha)},
            {"window_primes", g.window_primes}, {"candidates", g.candidates}};
  }
  if (params.contains("s")) {
    const auto m = sth_power_modulus(need<int64_t>(params, "s"));
    r["sth_power_modulus"] = {{"primes", m.primes}, {"P", m.P}};
    r["alpha"] = alpha_json(alpha_beta(mus, m.P, n));
    return r;
  }
  r = alpha_json(alpha_beta(mus, P, n));
  r["P"] = P;
  r["n"] = n;
  return r;
}

Json cmd_delta(const Json& params, const TaskOptions& opts) {
  const auto mus = parse_measure_sequence(need<std::string>(params, "measure"));
  const auto primes = PrimeModulusSet::of(u64_list(params, "primes"));
  const auto n = need<unsigned>(params, "n");
  const auto cap = get<uint64_t>(params, "cap", 10'000'000);
  if (params.contains("ell")) {
    std::vector<unsigned> ell;
    for (auto v : u64_list(params, "ell")) ell.push_back(static_cast<unsigned>(v));
    const auto d = delta_ell(mus, n, primes, ell, cap);
    return {{"ell", d.ell},
            {"delta_ell", interval(d.value)},
            {"alpha", interval(d.alpha)},
            {"beta", interval(d.beta)},
            {"bound_discrete_l1", interval(d.bound_discrete_l1)},
            {"bound_linf", interval(d.bound_linf)},
            {"terms", d.terms},
            {"max_s", d.max_s},
            {"pointwise_linf_ok", d.pointwise_linf_ok},
            {"discrete_l1_ok", d.discrete_l1_ok}};
  }
  const auto m = need<unsigned>(params, "m");
  auto encode = [](const DeltaResult& d) {
    Json j = {{"n", d.n}, {"m", d.m}, {"exact", d.exact}, {"value", d.value_d}, {"tuples", d.tuples}};
    if (d.exact)
      j["value_exact"] = d.value.get_str();
    else
      j["error_bound"] = d.error_bound;
    return j;
  };
  if (get<bool>(params, "table", false)) {
    const auto tab = delta_table(mus, n, primes, m, opts.threads, cap);
    Json rows = Json::array();
    for (auto& row : tab)
      for (auto& d : row) rows.push_back(encode(d));
    return {{"primes", primes.primes}, {"rows", rows}};
  }
  const auto d = delta(mus, n, primes, m, true, opts.threads, cap);
  Json r = encode(d);
  r["primes"] = primes.primes;
  r["delta"] = d.value_d;
  // Comparison bounds with every component at degree m: L = k m, l_min = m.
  const auto ab = alpha_beta(mus, static_cast<int64_t>(primes.P), n);
  const unsigned L = static_cast<unsigned>(primes.primes.size()) * m;
  if (m >= 1) {
    const double excess = std::max(0.0, L - n / 2.0);
    const auto l1 = pow(ab.alpha, std::min<uint64_t>(2ULL * L, n)).upper() *
                    std::pow(static_cast<double>(primes.P), excess);
    r["bound_discreteL1"] = l1;
    r["bound_Linfty"] = pow(ab.beta, n / m).upper();
  } else {
    r["bound_discreteL1"] = nullptr;
    r["bound_Linfty"] = nullptr;
  }
  Json rows = Json::array();
  for (auto& row : d.rows) {
    std::string degs;
    for (auto& f : row.moduli) degs += (degs.empty() ? "" : " ") + std::to_string(f.degree());
    rows.push_back({{"moduli", poly_list(row.moduli)}, {"degrees", degs}, {"discrepancy", row.discrepancy},
                    {"exact", d.exact ? Json(row.exact_discrepancy.get_str()) : Json(nullptr)}});
  }
  rows.push_back({{"moduli", "total"}, {"degrees", ""}, {"discrepancy", d.value_d},
                  {"exact", d.exact ? Json(d.value.get_str()) : Json(nullptr)}});
  r["rows"] = rows;
  return r;
}

Json cmd_residue_distribution(const Json& params, const TaskOptions&) {
  const auto mus = parse_measure_sequence(need<std::string>(params, "measure"));
  std::vector<FpPoly> moduli;
  for (auto& s : string_list(params, "moduli")) moduli.push_back(parse_fpoly(s));
  if (moduli.empty()) throw ParseError("missing parameter 'moduli'");
  const auto method = get<std::string>(params, "method", "dp");
  if (method != "dp" && method != "fourier") throw ParseError("method must be dp or fourier");
  const auto d = residue_distribution(mus, need<unsigned>(params, "n"), moduli,
                                      method == "dp" ? DistMethod::Dp : DistMethod::Fourier,
                                      get<uint64_t>(params, "cap", 10'000'000));
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    Json row = {{"index", i}, {"prob", d.prob[i]}};
    if (d.exact) {
      mpq_class q(d.numer[i], d.denom);
      q.canonicalize();
      row["exact"] = q.get_str();
    }
    rows.push_back(row);
  }
  return {{"moduli", poly_list(d.moduli)}, {"method", d.method}, {"exact", d.exact}, {"rows", rows}};
}

Json cmd_brun_check(const Json& params, const TaskOptions& opts) {
  const auto primes = params.contains("primes") ? u64_list(params, "primes") : std::vector<uint64_t>{2, 3};
  const auto n_lo = get<unsigned>(params, "n_min", params.contains("n") ? need<unsigned>(params, "n") : 1);
  const auto n_hi = get<unsigned>(params, "n_max", params.contains("n") ? need<unsigned>(params, "n") : 12);
  const auto m_lo = get<unsigned>(params, "m_min", params.contains("m") ? need<unsigned>(params, "m") : 0);
  const auto m_hi = get<unsigned>(params, "m_max", params.contains("m") ? need<unsigned>(params, "m") : 4);
  const auto seed = seed_of(params, opts);
  std::optional<std::vector<unsigned>> truncation;
  if (params.contains("v")) truncation = std::vector<unsigned>{need<unsigned>(params, "v")};
  Json rows = Json::array();
  bool all_ok = true;
  for (uint64_t p : primes) {
    const auto set = PrimeModulusSet::of({p});
    const std::string spec = get<std::string>(params, "measure", "box:0.." + std::to_string(p - 1));
    const auto mus = parse_measure_sequence(spec);
    for (unsigned m = m_lo; m <= m_hi; ++m) {
      const auto fam = IrreducibleFamily::all_up_to(p, m);
      for (unsigned n = n_lo; n <= n_hi; ++n) {
        const auto r = brun_upper_bound(mus, n, set, {FpPoly::one(p)}, {fam}, truncation, seed);
        Json row = {{"p", p},
                    {"n", n},
                    {"m", m},
                    {"v", r.truncation[0]},
                    {"bound", r.bound.get_d()},
                    {"truncated_bound", r.truncated_bound.get_d()},
                    {"remainder", r.remainder.get_d()},
                    {"bonferroni_sandwich", r.sums[0].lower <= r.sums[0].full && r.sums[0].full <= r.sums[0].upper},
                    {"degree_hypothesis", r.degree_hypothesis},
                    {"ok", r.ok}};
        if (r.exact_available) {
          row["exact"] = r.exact.get_d();
          row["exact_rational"] = r.exact.get_str();
        } else {
          row["mc_estimate"] = r.mc_estimate;
          row["mc_stderr"] = r.mc_stderr;
        }
        all_ok = all_ok && r.ok;
        rows.push_back(row);
      }
    }
  }
  return {{"all_ok", all_ok}, {"rows", rows}};
}

Json cmd_euler_product(const Json& params, const TaskOptions&) {
  const auto primes = params.contains("primes") ? u64_list(params, "primes") : std::vector<uint64_t>{2, 3, 5, 7, 11, 13};
  const auto m_max = get<unsigned>(params, "m_max", 20);
  Json rows = Json::array();
  bool all_ok = true;
  for (uint64_t p : primes)
    for (unsigned m = 0; m <= m_max; ++m) {
      const auto e = euler_product(p, m);
      Json row = {{"p", p}, {"m", m}, {"value", interval(e.enclosure)}, {"bound", 2.0 / (m + 1)},
                  {"exact", e.exact}, {"ok", e.bound_ok}};
      if (e.exact) row["value_exact"] = e.value.get_str();
      all_ok = all_ok && e.bound_ok;
      rows.push_back(row);
    }
  return {{"all_ok", all_ok}, {"rows", rows}};
}

Json cmd_rough_fraction(const Json& params, const TaskOptions&) {
  return rational(rough_fraction_exact(need<uint64_t>(params, "p"), need<unsigned>(params, "n"), need<unsigned>(params, "m")));
}

Json cmd_anatomy(const Json& params, const TaskOptions& opts) {
  const auto stat = get<std::string>(params, "stat", "smooth");
  const auto mus = parse_measure_sequence(need<std::string>(params, "measure"));
  const auto n = need<unsigned>(params, "n");
  const auto samples = need<uint64_t>(params, "samples");
  const auto seed = seed_of(params, opts);
  if (stat == "smooth") {
    const auto s = smooth_degree_stats(mus, n, need<uint64_t>(params, "p"), need<unsigned>(params, "m"), samples, seed,
                                       opts.threads);
    Json tail = Json::array();
    for (auto& [u, v] : s.tail) tail.push_back({{"u", u}, {"prob", v}});
    Json rows = Json::array();
    for (std::size_t d = 0; d < s.histogram.size(); ++d) rows.push_back({{"degree", d}, {"count", s.histogram[d]}});
    return {{"stat", stat},
            {"mean", s.mean},
            {"stderr", s.stderr_mean},
            {"exact_mean", rational(s.exact_mean)},
            {"exact_reference_applies", s.exact_reference_applies},
            {"z_score", s.z_score},
            {"tail", tail},
            {"decay", {{"rate", s.decay.rate}, {"intercept", s.decay.intercept}, {"points", s.decay.points}}},
            {"rows", rows}};
  }
  if (stat == "additive") {
    const auto m = need<unsigned>(params, "m");
    std::vector<bool> f(m + 1, false);
    if (params.contains("degrees")) {
      for (auto k : u64_list(params, "degrees"))
        if (k >= 1 && k <= m) f[k] = true;
    } else {
      for (unsigned k = 1; k <= m; ++k) f[k] = true;
    }
    const auto mode_s = get<std::string>(params, "mode", "omega");
    if (mode_s != "omega" && mode_s != "Omega") throw ParseError("mode must be omega or Omega");
    const auto mode = mode_s == "omega" ? AdditiveMode::Distinct : AdditiveMode::WithMultiplicity;
    const auto a = additive_tail(mus, n, need<uint64_t>(params, "p"), f, m, get<double>(params, "t", 0.5), mode,
                                 samples, seed, opts.threads);
    Json rows = Json::array();
    for (std::size_t v = 0; v < a.histogram.size(); ++v) rows.push_back({{"value", v}, {"count", a.histogram[v]}});
    return {{"stat", stat},
            {"L", rational(a.L)},
            {"lower_tail", a.lower_tail},
            {"upper_tail", a.upper_tail},
            {"envelope", a.envelope},
            {"mean", a.mean},
            {"stderr", a.stderr_mean},
            {"exact_mean", rational(a.exact_mean)},
            {"exact_reference_applies", a.exact_reference_applies},
            {"hypothesis_ok", a.hypothesis_ok},
            {"rows", rows}};
  }
  if (stat == "normal") {
    const auto primes = PrimeModulusSet::of(u64_list(params, "primes"));
    const auto r = normal_event_rate(mus, n, primes, need<double>(params, "eps"), need<unsigned>(params, "m0"), samples,
                                     seed, opts.threads);
    return {{"stat", stat}, {"checkpoints", r.checkpoints}, {"hits", r.hits}, {"samples", r.samples}, {"rate", r.rate}};
  }
  throw ParseError("stat must be smooth, additive or normal");
}

Json cmd_density(const Json& params, const TaskOptions& opts) {
  const auto p = need<uint64_t>(params, "p");
  const auto n = need<unsigned>(params, "n");
  const auto mode = get<std::string>(params, "mode", "exact");
  if (mode != "exact" && mode != "mc") throw ParseError("mode must be exact or mc");
  const bool exact = mode == "exact";
  const auto samples = get<uint64_t>(params, "samples", exact ? 0 : 10000);
  const auto seed = seed_of(params, opts);
  std::vector<unsigned> ks;
  if (params.contains("k"))
    ks.push_back(need<unsigned>(params, "k"));
  else
    for (unsigned k = 0; k <= n; ++k) ks.push_back(k);
  Json rows = Json::array();
  std::vector<uint64_t> counts;
  if (exact && ks.size() > 1) counts = divisor_degree_counts(p, n, opts.threads);
  for (unsigned k : ks) {
    DivisorDensity d;
    if (!counts.empty() && k > 0 && k < n) {
      d = divisor_degree_density(p, n, n, true);  // trivial case: fills p, n, total
      d.k = k;
      d.hits = counts[k];
      d.fraction = static_cast<double>(d.hits) / static_cast<double>(d.total);
      d.reference = divisor_density_reference(k);
    } else {
      d = divisor_degree_density(p, n, k, exact, samples, seed, opts.threads);
    }
    rows.push_back({{"k", k}, {"hits", d.hits}, {"total", d.total}, {"fraction", d.fraction},
                    {"stderr", d.stderr_fraction}, {"reference", d.reference}});
  }
  return {{"p", p}, {"n", n}, {"mode", mode}, {"rows", rows}};
}

Json cmd_merge(const Json& params, const TaskOptions&) {
  const auto rho = parse_partition(need<std::string>(params, "rho"));
  Json r = {{"rho", rho.str()}};
  const auto y = get<unsigned>(params, "y", 1);
  if (params.contains("sigma")) {
    const auto sigma = parse_partition(need<std::string>(params, "sigma"));
    r["sigma"] = sigma.str();
    r["y"] = y;
    r["is_merging"] = is_y_merging(sigma, rho, y);
  }
  if (get<bool>(params, "enumerate", false)) {
    Json list = Json::array();
    for (auto& s : enumerate_mergings(rho, y)) list.push_back(s.str());
    r["y"] = y;
    r["mergings"] = list;
  }
  if (params.contains("power")) r["power"] = cycle_power(rho, need<uint64_t>(params, "power")).str();
  if (get<bool>(params, "transitive", false)) {
    const auto v = transitive_overapprox(rho, rho.n());
    r["transitive"] = {{"verdict", v.definitely_not ? "definitely_not" : "possibly"}, {"witness", v.witness}};
    if (v.blocks) r["transitive"]["blocks"] = *v.blocks;
    if (v.small_power) {
      r["transitive"]["small_power"] = *v.small_power;
      r["transitive"]["small_support"] = v.small_support;
    }
  }
  if (params.contains("events")) {
    const Json& e = params["events"];
    LPParams lp;
    lp.C = get<double>(e, "C", lp.C);
    lp.t = get<double>(e, "t", lp.t);
    lp.kappa = get<double>(e, "kappa", lp.kappa);
    lp.delta = get<double>(e, "delta", lp.delta);
    lp.theta = get<double>(e, "theta", lp.theta);
    const auto ev = partition_events(rho, rho.n(), lp);
    r["events"] = {{"E1", ev.e1}, {"E2", ev.e2}, {"E3", ev.e3}, {"E4", ev.e4}, {"E5", ev.e5},
                   {"E2_vacuous", ev.e2_vacuous}, {"E3_window_empty", ev.e3_window_empty},
                   {"E5_window_empty", ev.e5_window_empty}, {"gcd_threshold", ev.gcd_threshold}};
  }
  return r;
}

Json cmd_galois_cert(const Json& params, const TaskOptions& opts) {
  const auto a = parse_zpoly(need<std::string>(params, "poly"));
  const auto cert = frobenius_certify(a, get<uint64_t>(params, "budget", 200), opts.threads);
  Json ev = Json::array();
  for (auto& e : cert.evidence)
    ev.push_back({{"prime", e.prime},
                  {"squarefree", e.squarefree},
                  {"type", e.type ? Json(e.type->str()) : Json(nullptr)},
                  {"conclusion_so_far", e.conclusion_so_far}});
  Json r = {{"poly", a.pretty()},
            {"n", cert.n},
            {"outcome", outcome_name(cert.outcome)},
            {"primes_examined", cert.primes_examined},
            {"skipped_nonsquarefree", cert.skipped_nonsquarefree},
            {"irreducible_reductions", cert.irreducible_reductions},
            {"evidence", ev}};
  if (cert.transitive_prime) r["transitive_prime"] = cert.transitive_prime;
  if (!cert.primitive_reason.empty()) r["primitive_reason"] = cert.primitive_reason;
  if (cert.cycle_q) r["prime_cycle"] = {{"q", cert.cycle_q}, {"prime", cert.cycle_prime}, {"exponent", cert.cycle_exponent}};
  return r;
}

Json cmd_nu(const Json& params, const TaskOptions& opts) {
  const auto mus = parse_measure_sequence(need<std::string>(params, "measure"));
  const bool exhaustive = get<bool>(params, "exhaustive", true);
  const auto rep = nu_checks(mus, need<unsigned>(params, "n"), need<uint64_t>(params, "p"), exhaustive,
                             get<uint64_t>(params, "samples", exhaustive ? 0 : 10000), seed_of(params, opts),
                             opts.threads);
  Json pairs = Json::array(), sums = Json::array(), tails = Json::array();
  for (auto& p : rep.pairs)
    pairs.push_back({{"k", p.k}, {"l", p.l}, {"value", p.value}, {"stderr", p.stderr_value}, {"bound", p.bound}, {"ok", p.ok}});
  for (auto& s : rep.subset_sums) sums.push_back({{"k", s.k}, {"value", s.value}, {"stderr", s.stderr_value}});
  for (auto& t : rep.tails)
    tails.push_back({{"m", t.m}, {"t", t.t}, {"L", t.L}, {"value", t.value}, {"envelope", t.envelope}});
  Json dist = Json::array();
  for (auto& [rho, w] : rep.distribution) dist.push_back({{"type", rho.str()}, {"mass", w}});
  return {{"n", rep.n},           {"p", rep.p},          {"exhaustive", rep.exhaustive},
          {"residue_uniform", rep.residue_uniform},      {"total_mass", rep.total_mass},
          {"pairs", pairs},       {"pairs_ok", rep.pairs_ok}, {"subset_sums", sums},
          {"lower_tail", tails},  {"rows", dist}};
}

ZBudget budget_of(const Json& params) {
  ZBudget b;
  b.stage1_primes = get<unsigned>(params, "stage1_primes", b.stage1_primes);
  b.recombinations = get<uint64_t>(params, "recombinations", b.recombinations);
  b.max_stage2_degree = get<int>(params, "max_stage2_degree", b.max_stage2_degree);
  return b;
}

Json cmd_irreducible(const Json& params, const TaskOptions&) {
  const auto a = parse_zpoly(need<std::string>(params, "poly"));
  const auto r = irreducible_over_Z(a, budget_of(params));
  Json out = {{"poly", a.pretty()},       {"verdict", verdict_name(r.verdict)}, {"stage", r.stage},
              {"reason", r.reason},       {"stage1_primes", r.stage1_primes},  {"recombinations", r.recombinations}};
  if (r.verdict == ZVerdict::Reducible) out["witness"] = r.witness.pretty();
  return out;
}

Json cmd_factor(const Json& params, const TaskOptions& opts) {
  const auto a = parse_fpoly(need<std::string>(params, "poly"));
  const auto fac = factor(a, seed_of(params, opts));
  Json factors = Json::array();
  for (auto& [f, e] : fac) factors.push_back({{"factor", f.str()}, {"pretty", f.pretty()}, {"multiplicity", e}});
  const auto type = factorization_type(fac);
  const auto degs = divisor_degree_set(fac, static_cast<unsigned>(a.degree()));
  std::vector<unsigned> ds;
  for (unsigned k = 0; k < degs.size(); ++k)
    if (degs[k]) ds.push_back(k);
  return {{"poly", a.str()},       {"factors", factors},           {"type", type.rho.str()},
          {"tau", type.tau.get_str()}, {"omega", type.omega},      {"divisor_degrees", ds},
          {"irreducible", fac.size() == 1 && fac[0].mult == 1}};
}

Json cmd_count_irreducibles(const Json& params, const TaskOptions&) {
  const auto p = need<uint64_t>(params, "p");
  const auto k = need<unsigned>(params, "k");
  if (!is_prime(p)) throw DomainError("p must be prime");
  const auto c = count_irreducibles(p, k);
  mpz_class pk, half;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
  // p^k/k - 2 p^(k/2)/k <= pi <= p^k/k, checked as k pi >= p^k - 2 sqrt(p^k).
  const mpz_class kc = c * k;
  const bool upper = kc <= pk;
  const mpq_class lower_gap = mpq_class(pk - kc) / 2;
  const bool lower = lower_gap * lower_gap <= mpq_class(pk) || kc >= pk;
  return {{"p", p}, {"k", k}, {"count", c.get_str()}, {"bracket_ok", upper && lower}};
}

Json cmd_mc_irr(const Json& params, const TaskOptions& opts) {
  McConfig cfg;
  cfg.measure = need<std::string>(params, "measure");
  cfg.n = need<unsigned>(params, "n");
  cfg.samples = need<uint64_t>(params, "samples");
  cfg.seed = seed_of(params, opts);
  cfg.budget = budget_of(params);
  const auto r = mc_irreducibility(cfg, opts.threads);
  Json out = {{"raw", r.raw},
              {"conditioned", r.conditioned},
              {"rejected_a0_zero", r.rejected},
              {"irreducible", proportion_json(r.irreducible)},
              {"reducible", proportion_json(r.reducible)},
              {"undecided", proportion_json(r.undecided)},
              {"stages",
               {{"stage0_reducible", r.stage0_reducible},
                {"stage1_irreducible", r.stage1_irreducible},
                {"stage2_irreducible", r.stage2_irreducible},
                {"stage2_reducible", r.stage2_reducible}}},
              {"root_at_minus_one", proportion_json(r.root_at_minus_one)},
              {"root_at_one", proportion_json(r.root_at_one)}};
  if (r.box_H) {
    out["box_H"] = *r.box_H;
    out["rivin_bound"] = r.rivin_bound;
    out["rivin_ok"] = r.rivin_ok;
  }
  return out;
}

Json cmd_random_subset(const Json& params, const TaskOptions& opts) {
  const auto r = random_subset_alpha(need<int64_t>(params, "H"), need<uint64_t>(params, "N"),
                                     need<uint64_t>(params, "trials"), seed_of(params, opts), opts.threads);
  return {{"H", r.H},
          {"N", r.N},
          {"trials", r.trials},
          {"certified", proportion_json(r.certified)},
          {"reference_inv_sqrt_N", r.reference},
          {"min_alpha_upper", r.min_alpha_upper},
          {"max_alpha_upper", r.max_alpha_upper}};
}

using Handler = std::function<Json(const Json&, const TaskOptions&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"certify-alpha", cmd_certify_alpha},
      {"delta", cmd_delta},
      {"residue-distribution", cmd_residue_distribution},
      {"brun-check", cmd_brun_check},
      {"euler-product", cmd_euler_product},
      {"rough-fraction", cmd_rough_fraction},
      {"anatomy", cmd_anatomy},
      {"density", cmd_density},
      {"merge", cmd_merge},
      {"galois-cert", cmd_galois_cert},
      {"nu", cmd_nu},
      {"irreducible", cmd_irreducible},
      {"factor", cmd_factor},
      {"count-irreducibles", cmd_count_irreducibles},
      {"mc-irr", cmd_mc_irr},
      {"random-subset", cmd_random_subset},
  };
  return table;
}

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_string())
    s = v.get<std::string>();
  else if (v.is_null())
    s = "";
  else
    s = v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

}  // namespace

std::vector<std::string> task_names() {
  std::vector<std::string> out;
  for (auto& [name, h] : handlers()) out.push_back(name);
  return out;
}

Json run_task(const std::string& command, const Json& params, const TaskOptions& opts) {
  auto it = handlers().find(command);
  if (it == handlers().end()) throw ParseError("unknown command '" + command + "'");
  if (!params.is_object()) throw ParseError("params must be a JSON object");
  Json echo = params;
  if (!echo.contains("seed") && opts.seed) echo["seed"] = *opts.seed;
  const auto start = std::chrono::steady_clock::now();
  Json result = it->second(echo, opts);
  Json report = {{"schema_version", kSchemaVersion},
                 {"tool", "irrlab"},
                 {"version", kVersion},
                 {"command", command},
                 {"params", echo},
                 {"result", result}};
  if (opts.timing)
    report["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string render(const Json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format != "csv") throw ParseError("format must be json or csv");
  const Json& result = report.contains("result") ? report["result"] : report;
  std::ostringstream os;
  if (result.contains("rows") && result["rows"].is_array() && !result["rows"].empty() &&
      result["rows"][0].is_object()) {
    std::vector<std::string> cols;
    for (auto& row : result["rows"])
      for (auto& [k, v] : row.items())
        if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (auto& row : result["rows"]) {
      for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
      os << '\n';
    }
    return os.str();
  }
  os << "key,value\n";
  for (auto& [k, v] : result.items()) os << csv_cell(Json(k)) << ',' << csv_cell(v) << '\n';
  return os.str();
}

SuiteSummary run_suite(const Json& config, const std::string& out_dir, const TaskOptions& opts) {
  if (!config.is_object()) throw ParseError("suite config must be a JSON object");
  const Json entries = config.contains("entries") ? config["entries"] : Json::array();
  if (!entries.is_array()) throw ParseError("suite entries must be an array");
  std::filesystem::create_directories(out_dir);
  TaskOptions entry_opts = opts;
  if (config.contains("seed") && !opts.seed) entry_opts.seed = get<uint64_t>(config, "seed", 0);
  SuiteSummary summary;
  Json list = Json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& e = entries[i];
    std::string name = e.is_object() ? get<std::string>(e, "name", "entry" + std::to_string(i)) : "entry" + std::to_string(i);
    for (char& c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
    Json item = {{"name", name}};
    try {
      if (!e.is_object()) throw ParseError("entry must be an object");
      const auto command = need<std::string>(e, "command");
      item["command"] = command;
      const Json report = run_task(command, e.contains("params") ? e["params"] : Json::object(), entry_opts);
      const std::string file = name + ".json";
      std::ofstream(std::filesystem::path(out_dir) / file) << report.dump(2) << '\n';
      item["status"] = "ok";
      item["report"] = file;
      ++summary.ok;
    } catch (const std::exception& ex) {
      item["status"] = "failed";
      item["error"] = ex.what();
      ++summary.failed;
    }
    list.push_back(item);
  }
  summary.manifest = {{"schema_version", kSchemaVersion}, {"entries", list}, {"ok", summary.ok}, {"failed", summary.failed}};
  std::ofstream(std::filesystem::path(out_dir) / "manifest.json") << summary.manifest.dump(2) << '\n';
  return summary;
}

}  // namespace irrlab
