#include "irrlab/irrlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "common.hpp"
#include "fourier.hpp"
#include "fpoly.hpp"
#include "galois.hpp"
#include "measure.hpp"
#include "numtheory.hpp"
#include "partition.hpp"
#include "report.hpp"
#include "zpoly.hpp"

struct irrlab_measure {
  irrlab::MeasureSequence value;
};
struct irrlab_fpoly {
  irrlab::FpPoly value;
};
struct irrlab_zpoly {
  irrlab::ZPoly value;
};

namespace {

thread_local std::string last_error;

template <class Fn>
irrlab_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return IRRLAB_OK;
  } catch (const irrlab::ParseError& e) {
    last_error = e.what();
    return IRRLAB_ERR_PARSE;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return IRRLAB_ERR_PARSE;
  } catch (const irrlab::CapExceeded& e) {
    last_error = e.what();
    return IRRLAB_ERR_CAP;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return IRRLAB_ERR_INVALID;
  } catch (const std::out_of_range& e) {
    last_error = e.what();
    return IRRLAB_ERR_INVALID;
  } catch (const std::exception& e) {
    last_error = e.what();
    return IRRLAB_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return IRRLAB_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

irrlab::TaskOptions task_options(const irrlab_run_options* o) {
  irrlab::TaskOptions opts;
  if (!o) return opts;
  opts.threads = o->threads == 0 ? 1 : o->threads;
  if (o->has_seed) opts.seed = o->seed;
  opts.timing = o->timing != 0;
  return opts;
}

nlohmann::json parse_json(const char* text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw irrlab::ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

extern "C" {

const char* irrlab_version(void) { return irrlab::kVersion; }

const char* irrlab_last_error(void) { return last_error.c_str(); }

void irrlab_string_free(char* s) { std::free(s); }

irrlab_status irrlab_run(const char* command, const char* params_json, const irrlab_run_options* options, char** out) {
  return guarded([&] {
    require(command, "command");
    require(out, "out");
    *out = nullptr;
    const auto params = params_json ? parse_json(params_json) : nlohmann::json::object();
    const auto report = irrlab::run_task(command, params, task_options(options));
    *out = dup(irrlab::render(report, options && options->format ? options->format : "json"));
  });
}

irrlab_status irrlab_run_suite(const char* config_json, const char* out_dir, const irrlab_run_options* options,
                               char** out) {
  return guarded([&] {
    require(config_json, "config");
    require(out_dir, "out_dir");
    require(out, "out");
    *out = nullptr;
    const auto summary = irrlab::run_suite(parse_json(config_json), out_dir, task_options(options));
    *out = dup(summary.manifest.dump(2) + "\n");
  });
}

irrlab_status irrlab_task_names(char** out) {
  return guarded([&] {
    require(out, "out");
    std::string s;
    for (auto& n : irrlab::task_names()) s += n + "\n";
    *out = dup(s);
  });
}

irrlab_status irrlab_measure_parse(const char* spec, irrlab_measure** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = nullptr;
    *out = new irrlab_measure{irrlab::parse_measure_sequence(spec)};
  });
}

void irrlab_measure_free(irrlab_measure* m) { delete m; }

irrlab_status irrlab_alpha_beta(const irrlab_measure* m, int64_t modulus, size_t n, double alpha[2], double beta[2]) {
  return guarded([&] {
    require(m, "measure");
    require(alpha, "alpha");
    require(beta, "beta");
    const auto ab = irrlab::alpha_beta(m->value, modulus, n == 0 ? 1 : n);
    alpha[0] = ab.alpha.lower();
    alpha[1] = ab.alpha.upper();
    beta[0] = ab.beta.lower();
    beta[1] = ab.beta.upper();
  });
}

irrlab_status irrlab_fpoly_parse(const char* text, irrlab_fpoly** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new irrlab_fpoly{irrlab::parse_fpoly(text)};
  });
}

void irrlab_fpoly_free(irrlab_fpoly* f) { delete f; }

irrlab_status irrlab_fpoly_degree(const irrlab_fpoly* f, int* degree) {
  return guarded([&] {
    require(f, "poly");
    require(degree, "degree");
    *degree = f->value.degree();
  });
}

irrlab_status irrlab_fpoly_is_irreducible(const irrlab_fpoly* f, int* result) {
  return guarded([&] {
    require(f, "poly");
    require(result, "result");
    *result = irrlab::is_irreducible(f->value) ? 1 : 0;
  });
}

irrlab_status irrlab_fpoly_factor(const irrlab_fpoly* f, uint64_t seed, char** out) {
  return guarded([&] {
    require(f, "poly");
    require(out, "out");
    *out = nullptr;
    std::ostringstream os;
    bool first = true;
    for (auto& [g, e] : irrlab::factor(f->value, seed)) {
      os << (first ? "" : " * ") << g.str();
      if (e > 1) os << '^' << e;
      first = false;
    }
    *out = dup(os.str());
  });
}

irrlab_status irrlab_zpoly_parse(const char* text, irrlab_zpoly** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new irrlab_zpoly{irrlab::parse_zpoly(text)};
  });
}

void irrlab_zpoly_free(irrlab_zpoly* a) { delete a; }

irrlab_status irrlab_zpoly_degree(const irrlab_zpoly* a, int* degree) {
  return guarded([&] {
    require(a, "poly");
    require(degree, "degree");
    *degree = a->value.degree();
  });
}

irrlab_status irrlab_zpoly_irreducible(const irrlab_zpoly* a, irrlab_verdict* verdict, int* stage) {
  return guarded([&] {
    require(a, "poly");
    require(verdict, "verdict");
    const auto r = irrlab::irreducible_over_Z(a->value, irrlab::ZBudget{});
    switch (r.verdict) {
      case irrlab::ZVerdict::Irreducible: *verdict = IRRLAB_IRREDUCIBLE; break;
      case irrlab::ZVerdict::Reducible: *verdict = IRRLAB_REDUCIBLE; break;
      case irrlab::ZVerdict::Undecided: *verdict = IRRLAB_UNDECIDED; break;
    }
    if (stage) *stage = r.stage;
  });
}

irrlab_status irrlab_galois_certify(const irrlab_zpoly* a, uint64_t budget, unsigned threads,
                                    irrlab_galois_outcome* outcome) {
  return guarded([&] {
    require(a, "poly");
    require(outcome, "outcome");
    const auto cert = irrlab::frobenius_certify(a->value, budget, threads == 0 ? 1 : threads);
    switch (cert.outcome) {
      case irrlab::GaloisOutcome::CertifiedAnOrSn: *outcome = IRRLAB_GALOIS_AN_OR_SN; break;
      case irrlab::GaloisOutcome::TransitiveOnly: *outcome = IRRLAB_GALOIS_TRANSITIVE_ONLY; break;
      case irrlab::GaloisOutcome::NoCertificate: *outcome = IRRLAB_GALOIS_NO_CERTIFICATE; break;
      case irrlab::GaloisOutcome::Reducible: *outcome = IRRLAB_GALOIS_REDUCIBLE; break;
    }
  });
}

irrlab_status irrlab_count_irreducibles(uint64_t p, unsigned k, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (!irrlab::is_prime(p)) throw irrlab::DomainError("p must be prime");
    *out = dup(irrlab::count_irreducibles(p, k).get_str());
  });
}

irrlab_status irrlab_is_y_merging(const char* sigma, const char* rho, unsigned y, int* result) {
  return guarded([&] {
    require(sigma, "sigma");
    require(rho, "rho");
    require(result, "result");
    *result = irrlab::is_y_merging(irrlab::parse_partition(sigma), irrlab::parse_partition(rho), y) ? 1 : 0;
  });
}

}  // extern "C"
