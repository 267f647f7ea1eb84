#pragma once

#include <stddef.h>
#include <stdint.h>

#if defined(IRRLAB_BUILDING)
#define IRRLAB_API __attribute__((visibility("default")))
#else
#define IRRLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irrlab_status {
  IRRLAB_OK = 0,
  IRRLAB_ERR_PARSE = 2,
  IRRLAB_ERR_CAP = 3,
  IRRLAB_ERR_INVALID = 4,
  IRRLAB_ERR_INTERNAL = 5
} irrlab_status;

typedef struct irrlab_measure irrlab_measure;
typedef struct irrlab_fpoly irrlab_fpoly;
typedef struct irrlab_zpoly irrlab_zpoly;

IRRLAB_API const char* irrlab_version(void);

/* Message for the last failed call on this thread; empty after success. */
IRRLAB_API const char* irrlab_last_error(void);

/* Strings returned through out-parameters are owned by the caller. */
IRRLAB_API void irrlab_string_free(char* s);

typedef struct irrlab_run_options {
  unsigned threads;  /* 0 means 1 */
  int has_seed;
  uint64_t seed;
  int timing;
  const char* format; /* "json" (default) or "csv" */
} irrlab_run_options;

/* Runs a named task on a JSON parameter object and renders the report. */
IRRLAB_API irrlab_status irrlab_run(const char* command, const char* params_json, const irrlab_run_options* options,
                                    char** out);

/* Runs a suite config (JSON text), writing reports into out_dir; *out gets the manifest. */
IRRLAB_API irrlab_status irrlab_run_suite(const char* config_json, const char* out_dir,
                                          const irrlab_run_options* options, char** out);

/* Newline-separated task names. */
IRRLAB_API irrlab_status irrlab_task_names(char** out);

/* Measures: "box:LO..HI", "uniform:a,b,c", "weighted:a=w,b=w", sequences joined by ';'. */
IRRLAB_API irrlab_status irrlab_measure_parse(const char* spec, irrlab_measure** out);
IRRLAB_API void irrlab_measure_free(irrlab_measure* m);
/* Certified enclosures [lo, hi] of alpha and beta over coefficient indices [0, n). */
IRRLAB_API irrlab_status irrlab_alpha_beta(const irrlab_measure* m, int64_t modulus, size_t n, double alpha[2],
                                           double beta[2]);

/* Polynomials over F_p: "p:c0,c1,...,cd". */
IRRLAB_API irrlab_status irrlab_fpoly_parse(const char* text, irrlab_fpoly** out);
IRRLAB_API void irrlab_fpoly_free(irrlab_fpoly* f);
IRRLAB_API irrlab_status irrlab_fpoly_degree(const irrlab_fpoly* f, int* degree);
IRRLAB_API irrlab_status irrlab_fpoly_is_irreducible(const irrlab_fpoly* f, int* result);
/* Factorization as "f1^e1 * f2^e2 ..." in the text format. */
IRRLAB_API irrlab_status irrlab_fpoly_factor(const irrlab_fpoly* f, uint64_t seed, char** out);

/* Integer polynomials: "z:c0,c1,...,cd" or an expression in T. */
IRRLAB_API irrlab_status irrlab_zpoly_parse(const char* text, irrlab_zpoly** out);
IRRLAB_API void irrlab_zpoly_free(irrlab_zpoly* a);
IRRLAB_API irrlab_status irrlab_zpoly_degree(const irrlab_zpoly* a, int* degree);

typedef enum irrlab_verdict {
  IRRLAB_IRREDUCIBLE = 0,
  IRRLAB_REDUCIBLE = 1,
  IRRLAB_UNDECIDED = 2
} irrlab_verdict;
/* stage receives the deciding stage (0, 1 or 2). */
IRRLAB_API irrlab_status irrlab_zpoly_irreducible(const irrlab_zpoly* a, irrlab_verdict* verdict, int* stage);

typedef enum irrlab_galois_outcome {
  IRRLAB_GALOIS_AN_OR_SN = 0,
  IRRLAB_GALOIS_TRANSITIVE_ONLY = 1,
  IRRLAB_GALOIS_NO_CERTIFICATE = 2,
  IRRLAB_GALOIS_REDUCIBLE = 3
} irrlab_galois_outcome;
IRRLAB_API irrlab_status irrlab_galois_certify(const irrlab_zpoly* a, uint64_t budget, unsigned threads,
                                               irrlab_galois_outcome* outcome);

/* Number of monic irreducibles of degree k over F_p, as a decimal string. */
IRRLAB_API irrlab_status irrlab_count_irreducibles(uint64_t p, unsigned k, char** out);

/* Partitions as "1,1,2". */
IRRLAB_API irrlab_status irrlab_is_y_merging(const char* sigma, const char* rho, unsigned y, int* result);

#ifdef __cplusplus
}
#endif
