#include <irrlab/irrlab.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

enum class Kind { Int, Real, Text, Flag, List };

struct Param {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

struct Command {
  const char* name;
  const char* help;
  std::vector<Param> params;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"certify-alpha",
       "Certify alpha and beta for a coefficient law",
       {{"--measure", "measure", Kind::Text, "measure spec"},
        {"--modulus", "modulus", Kind::Int, "squarefree modulus P"},
        {"--n", "n", Kind::Int, "coefficient indices to maximize over"},
        {"--sweep", "sweep", Kind::Text, "box heights LO..HI"},
        {"--analytic-H", "analytic_H", Kind::Int, "also report the analytic box bound at H"},
        {"--find-modulus-x", "find_modulus_x", Kind::Real, "search primes near x for a good modulus"},
        {"--window", "window", Kind::Text, "explicit prime window LO..HI"},
        {"--s", "s", Kind::Int, "odd s for the s-th power modulus"}}},
      {"delta",
       "Exact equidistribution discrepancy over modulus tuples",
       {{"--measure", "measure", Kind::Text, "measure spec"},
        {"--primes", "primes", Kind::List, "primes, comma separated"},
        {"--n", "n", Kind::Int, "degree"},
        {"--m", "m", Kind::Int, "maximal modulus degree"},
        {"--ell", "ell", Kind::List, "per-prime denominator degrees (phase-window mode)"},
        {"--table", "table", Kind::Flag, "all n' <= n and m' <= m"},
        {"--cap", "cap", Kind::Int, "state-space cap"}}},
      {"residue-distribution",
       "Law of A mod a tuple of moduli",
       {{"--measure", "measure", Kind::Text, "measure spec"},
        {"--n", "n", Kind::Int, "degree"},
        {"--moduli", "moduli", Kind::Text, "moduli separated by ';'"},
        {"--method", "method", Kind::Text, "dp or fourier"}}},
      {"brun-check",
       "Check the truncated sieve bound against exact counts",
       {{"--primes", "primes", Kind::List, "primes"},
        {"--n", "n", Kind::Int, "single degree"},
        {"--n-min", "n_min", Kind::Int, "smallest degree"},
        {"--n-max", "n_max", Kind::Int, "largest degree"},
        {"--m", "m", Kind::Int, "single sieve degree"},
        {"--m-min", "m_min", Kind::Int, "smallest sieve degree"},
        {"--m-max", "m_max", Kind::Int, "largest sieve degree"},
        {"--measure", "measure", Kind::Text, "measure spec (default uniform residues)"},
        {"--v", "v", Kind::Int, "Bonferroni truncation level (default from the sieve degree)"}}},
      {"euler-product",
       "Euler product over irreducibles of degree <= m",
       {{"--primes", "primes", Kind::List, "primes"}, {"--m-max", "m_max", Kind::Int, "largest m"}}},
      {"rough-fraction",
       "Exact fraction of monic degree-n polynomials with no factor of degree <= m",
       {{"--p", "p", Kind::Int, "prime"}, {"--n", "n", Kind::Int, "degree"}, {"--m", "m", Kind::Int, "degree"}}},
      {"anatomy",
       "Factorization statistics of random reductions",
       {{"--stat", "stat", Kind::Text, "smooth, additive or normal"},
        {"--measure", "measure", Kind::Text, "measure spec"},
        {"--n", "n", Kind::Int, "degree"},
        {"--p", "p", Kind::Int, "prime"},
        {"--primes", "primes", Kind::List, "primes (normal)"},
        {"--m", "m", Kind::Int, "degree cutoff"},
        {"--m0", "m0", Kind::Int, "first checkpoint (normal)"},
        {"--eps", "eps", Kind::Real, "deviation (normal)"},
        {"--t", "t", Kind::Real, "tail parameter (additive)"},
        {"--mode", "mode", Kind::Text, "omega or Omega (additive)"},
        {"--degrees", "degrees", Kind::List, "degrees in the support of f (additive)"},
        {"--samples", "samples", Kind::Int, "sample count"}}},
      {"density",
       "Fraction of polynomials with a divisor of degree k",
       {{"--p", "p", Kind::Int, "prime"},
        {"--n", "n", Kind::Int, "degree"},
        {"--k", "k", Kind::Int, "divisor degree (all when omitted)"},
        {"--mode", "mode", Kind::Text, "exact or mc"},
        {"--samples", "samples", Kind::Int, "samples for mc"}}},
      {"merge",
       "Partition merging queries",
       {{"--sigma", "sigma", Kind::Text, "partition, e.g. 1,2,3"},
        {"--rho", "rho", Kind::Text, "partition"},
        {"--y", "y", Kind::Int, "merge width"},
        {"--enumerate", "enumerate", Kind::Flag, "list all y-mergings of rho"},
        {"--power", "power", Kind::Int, "cycle type of the m-th power"},
        {"--transitive", "transitive", Kind::Flag, "transitivity over-approximation"}}},
      {"galois-cert",
       "Frobenius cycle-type certificate for the full symmetric or alternating group",
       {{"--poly", "poly", Kind::Text, "polynomial text or a file containing it"},
        {"--budget", "budget", Kind::Int, "primes to examine"}}},
      {"nu",
       "Factorization-type law of a random reduction",
       {{"--measure", "measure", Kind::Text, "measure spec"},
        {"--n", "n", Kind::Int, "degree"},
        {"--p", "p", Kind::Int, "prime"},
        {"--mc", "mc", Kind::Flag, "sample instead of enumerating"},
        {"--samples", "samples", Kind::Int, "sample count"}}},
      {"irreducible",
       "Irreducibility over the integers",
       {{"--poly", "poly", Kind::Text, "polynomial text or a file containing it"},
        {"--recombinations", "recombinations", Kind::Int, "recombination budget"}}},
      {"factor", "Factor a polynomial over F_p", {{"--poly", "poly", Kind::Text, "p:c0,...,cd"}}},
      {"count-irreducibles",
       "Number of monic irreducibles of degree k over F_p",
       {{"--p", "p", Kind::Int, "prime"}, {"--k", "k", Kind::Int, "degree"}}},
      {"mc-irr",
       "Monte Carlo irreducibility probability over the integers",
       {{"--measure", "measure", Kind::Text, "measure spec"},
        {"--n", "n", Kind::Int, "degree"},
        {"--samples", "samples", Kind::Int, "sample count"}}},
      {"random-subset",
       "Alpha certification rate for random coefficient supports",
       {{"--H", "H", Kind::Int, "support range [0, H]"},
        {"--N", "N", Kind::Int, "support size"},
        {"--trials", "trials", Kind::Int, "trial count"}}},
  };
  return table;
}

int exit_code(irrlab_status s) {
  switch (s) {
    case IRRLAB_OK: return 0;
    case IRRLAB_ERR_PARSE:
    case IRRLAB_ERR_INVALID: return 2;
    case IRRLAB_ERR_CAP: return 3;
    default: return 1;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Json convert(const Param& p, const std::string& raw) {
  try {
    switch (p.kind) {
      case Kind::Int: {
        std::size_t pos = 0;
        const long long v = std::stoll(raw, &pos);
        if (pos != raw.size()) break;
        return v;
      }
      case Kind::Real: {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) break;
        return v;
      }
      case Kind::Text:
      case Kind::List: return raw;
      case Kind::Flag: return true;
    }
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(p.flag, "bad value '" + raw + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random polynomial irreducibility toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string seed_text, out_path, format = "json", params_file;
  unsigned threads = 1;
  bool timing = false;
  app.add_option("--seed", seed_text, "base seed for every sampled quantity");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_path, "output file (directory for suite)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timing", timing, "add runtime to reports");
  app.add_option("--params", params_file, "JSON file with extra parameters");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    subs[c.name] = sub;
    for (auto& p : c.params) {
      if (p.kind == Kind::Flag)
        sub->add_flag(p.flag, flags[c.name][p.key], p.help);
      else
        sub->add_option(p.flag, values[c.name][p.key], p.help);
    }
  }
  std::string suite_config;
  auto* suite = app.add_subcommand("suite", "Run every entry of a JSON config");
  suite->add_option("config", suite_config, "config file")->required();
  app.add_subcommand("version", "Print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  irrlab_run_options opts{};
  opts.threads = threads;
  opts.timing = timing ? 1 : 0;
  opts.format = format.c_str();
  if (!seed_text.empty()) {
    try {
      std::size_t pos = 0;
      opts.seed = std::stoull(seed_text, &pos);
      if (pos != seed_text.size() || seed_text[0] == '-') throw std::invalid_argument(seed_text);
      opts.has_seed = 1;
    } catch (const std::exception&) {
      std::cerr << "error: --seed must be a nonnegative integer\n";
      return 2;
    }
  }

  char* out = nullptr;
  irrlab_status status = IRRLAB_OK;
  try {
    if (app.got_subcommand("version")) {
      std::cout << irrlab_version() << '\n';
      return 0;
    }
    if (suite->parsed()) {
      const std::string dir = out_path.empty() ? "reports" : out_path;
      status = irrlab_run_suite(read_file(suite_config).c_str(), dir.c_str(), &opts, &out);
      if (status == IRRLAB_OK) {
        std::cout << out;
        const auto manifest = Json::parse(out);
        irrlab_string_free(out);
        return manifest.value("failed", 0) == 0 ? 0 : 1;
      }
    } else {
      const Command* cmd = nullptr;
      for (auto& c : commands())
        if (subs[c.name]->parsed()) cmd = &c;
      Json params = params_file.empty() ? Json::object() : Json::parse(read_file(params_file));
      for (auto& p : cmd->params) {
        if (p.kind == Kind::Flag) {
          if (flags[cmd->name][p.key]) params[p.key] = true;
          continue;
        }
        if (subs[cmd->name]->count(p.flag) == 0) continue;
        std::string raw = values[cmd->name][p.key];
        if (std::string(p.key) == "poly" && std::filesystem::is_regular_file(raw)) raw = trim(read_file(raw));
        params[p.key] = convert(p, raw);
      }
      if (std::string(cmd->name) == "nu" && params.contains("mc")) {
        params["exhaustive"] = false;
        params.erase("mc");
      }
      status = irrlab_run(cmd->name, params.dump().c_str(), &opts, &out);
      if (status == IRRLAB_OK) {
        if (out_path.empty()) {
          std::cout << out;
        } else {
          std::ofstream f(out_path);
          f << out;
          if (!f) {
            std::cerr << "error: cannot write " << out_path << '\n';
            irrlab_string_free(out);
            return 1;
          }
        }
        irrlab_string_free(out);
        return 0;
      }
    }
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cerr << "error: " << irrlab_last_error() << '\n';
  return exit_code(status);
}
