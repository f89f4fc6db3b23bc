/*
 * freeconv C interface.
 *
 * Objects are opaque handles created by *_from_json / *_preset functions and
 * released with the matching *_free. Every call returns an fc_status; on
 * failure fc_last_error() holds a message for the calling thread. Reports are
 * returned as JSON text owned by the caller and released with fc_string_free.
 * Exact rationals appear in reports as "p/q" strings.
 */
#ifndef FREECONV_H
#define FREECONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FC_API __declspec(dllexport)
#else
#define FC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fc_status {
  FC_OK = 0,
  FC_ERR_PARSE = 2,
  FC_ERR_DOMAIN = 3,
  FC_ERR_NONCONVERGENCE = 4,
  FC_ERR_INTERNAL = 5
} fc_status;

typedef struct fc_measure fc_measure;
typedef struct fc_sequence fc_sequence;
typedef struct fc_qform fc_qform;

FC_API const char* fc_version(void);
/* Message of the last failed call on this thread; "" if none. */
FC_API const char* fc_last_error(void);
FC_API void fc_string_free(char* s);

/* Measures: {"kind":"atomic","atoms":[["0","1/2"],["1","1/2"]]} and friends. */
FC_API fc_status fc_measure_from_json(const char* json, fc_measure** out);
FC_API void fc_measure_free(fc_measure* m);

/* Moment sequences, from {"moments":[...]} or from a measure truncated at `order`. */
FC_API fc_status fc_sequence_from_json(const char* json, fc_sequence** out);
FC_API fc_status fc_sequence_from_measure(const fc_measure* m, unsigned order, fc_sequence** out);
FC_API void fc_sequence_free(fc_sequence* s);

/* Quadratic forms: {"n":2,"A":[[...],[...]],"b":[...]}. */
FC_API fc_status fc_qform_from_json(const char* json, fc_qform** out);
FC_API fc_status fc_qform_preset_mean_variance(unsigned n, fc_qform** out);
FC_API void fc_qform_free(fc_qform* q);

/* {"moments":[...]} */
FC_API fc_status fc_moments(const fc_measure* m, unsigned order, char** out_json);
/* kind is "boolean" or "free"; {"kind":..., "cumulants":[...]} */
FC_API fc_status fc_cumulants(const fc_sequence* s, const char* kind, char** out_json);
/* Remainder table of the order-p expansion of K(-x). */
FC_API fc_status fc_krein_check(const fc_measure* m, unsigned p, char** out_json);

FC_API fc_status fc_boxplus(const fc_sequence* a, const fc_sequence* b, char** out_json);
/* method: "taylor", "oracle", "subordination" or "all". */
FC_API fc_status fc_boxtimes(const fc_measure* a, const fc_measure* b, unsigned order, const char* method,
                             char** out_json);
FC_API fc_status fc_subordinate(const fc_measure* a, const fc_measure* b, double z_re, double z_im, double tol,
                                int max_iter, char** out_json);
FC_API fc_status fc_diagnose(const fc_measure* m, double alpha, char** out_json);
FC_API fc_status fc_closure_check(const fc_measure* a, const fc_measure* b, double alpha, double beta,
                                  char** out_json);

/* Exact tau of a word such as "T1^2 T2 T1" over free variables with the given marginals. */
FC_API fc_status fc_mixed_moment(const fc_sequence* const* marginals, size_t count, const char* word,
                                 char** out_json);

FC_API fc_status fc_validate_qform(const fc_qform* q, char** out_json);
/* Fails with FC_ERR_DOMAIN, naming the condition, when the form is not admissible. */
FC_API fc_status fc_characterize(const fc_qform* q, const fc_sequence* marginal, unsigned max_len,
                                 char** out_json);

/*
 * Matrix models. config_json:
 *   {"ensemble":"goe"|"rotated-diagonal"|"wishart", "N":256, "count":2, "seed":1,
 *    "trials":200, "threads":1, "words":["T1 T2 T1 T2", ...], "measure":{...}}
 * The report carries mean, standard error, the exact large-N value and a z-score per word.
 */
FC_API fc_status fc_matrixlab(const char* config_json, char** out_json);
FC_API fc_status fc_inequalities(size_t instances, uint64_t seed, size_t dimension, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
