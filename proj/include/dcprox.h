/* C interface to the discrete-choice prox library.
 *
 * All objects are opaque handles created by dcp_* constructors and released
 * by the matching *_free call. Functions return DCP_OK on success; on any
 * other status the thread-local message from dcp_last_error() names the
 * failed condition. Array arguments are caller-allocated; lengths follow the
 * handle's dimensions (dcp_model_dim, dcp_instance_*).
 */
#ifndef DCPROX_H
#define DCPROX_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define DCP_API __declspec(dllexport)
#else
#define DCP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcp_status {
  DCP_OK = 0,
  DCP_ERR_INVALID_ARGUMENT = 1,
  DCP_ERR_PARSE = 2,
  DCP_ERR_VALIDATION = 3,
  DCP_ERR_NUMERIC = 4,
  DCP_ERR_IO = 5,
} dcp_status;

typedef struct dcp_model dcp_model;
typedef struct dcp_instance dcp_instance;
typedef struct dcp_trace dcp_trace;

DCP_API const char* dcp_status_name(dcp_status status);

/* Message describing the most recent failure on this thread. */
DCP_API const char* dcp_last_error(void);

/* ---- models ---- */

DCP_API dcp_status dcp_model_from_json(const char* json_text, dcp_model** out);
DCP_API dcp_status dcp_model_from_file(const char* path, dcp_model** out);
DCP_API void dcp_model_free(dcp_model* model);

DCP_API int dcp_model_dim(const dcp_model* model);      /* alternatives */
DCP_API int dcp_model_is_ml(const dcp_model* model);    /* 1 if multinomial logit */

/* Convexity parameter beta of the conjugate surplus. */
DCP_API dcp_status dcp_model_beta(const dcp_model* model, double* beta);

/* E(u); u has model dimension. */
DCP_API dcp_status dcp_surplus(const dcp_model* model, const double* u,
                               double* value);

/* Choice probabilities grad E(u) into p (model dimension). */
DCP_API dcp_status dcp_choice_probabilities(const dcp_model* model,
                                            const double* u, double* p);

/* Zero-utility choice probabilities. */
DCP_API dcp_status dcp_prox_center(const dcp_model* model, double* p);

/* argmin over the simplex of <s,p> + d(p)/t. */
DCP_API dcp_status dcp_prox_map(const dcp_model* model, const double* s,
                                double t, double* p);

/* Conjugate E*(p). Uses the closed form for ML/NL models, numeric ascent
 * otherwise; *used_closed_form (optional) reports which. When u is non-null
 * the maximizing utilities are recovered numerically, which requires
 * min_i p_i >= 1e-6. */
DCP_API dcp_status dcp_conjugate(const dcp_model* model, const double* p,
                                 double* value, double* u,
                                 int* used_closed_form);

/* Largest sampled infinity-to-one Hessian norm against the bound 1/beta. */
DCP_API dcp_status dcp_smoothness_certificate(const dcp_model* model,
                                              int samples, uint64_t seed,
                                              double* max_observed,
                                              double* bound, int* pass);

/* Monte Carlo surplus estimate (multinomial logit only). */
DCP_API dcp_status dcp_mc_surplus(const dcp_model* model, const double* u,
                                  long long samples, uint64_t seed,
                                  double* mean, double* std_error);

/* Empirical choice frequencies from the two-stage simulation. */
DCP_API dcp_status dcp_mc_choice_frequencies(const dcp_model* model,
                                             const double* u,
                                             long long samples, uint64_t seed,
                                             double* freq);

/* ---- consumption instances ---- */

DCP_API dcp_status dcp_instance_from_json(const char* json_text,
                                          dcp_instance** out);
DCP_API dcp_status dcp_instance_from_file(const char* path, dcp_instance** out);
DCP_API void dcp_instance_free(dcp_instance* inst);

DCP_API int dcp_instance_qualities(const dcp_instance* inst); /* n */
DCP_API int dcp_instance_goods(const dcp_instance* inst);     /* m */

/* Duality-gap envelope constants at step k. d_certified is 0 when the
 * prox-diameter constant falls back to the multinomial-logit majorant. */
DCP_API dcp_status dcp_gap_certificate(const dcp_instance* inst,
                                       const dcp_model* model, long long k,
                                       double* m, double* d, double* bound,
                                       int* d_certified);

/* Runs the consumption cycle; the trace owns one record per iteration. */
DCP_API dcp_status dcp_run_cycle(const dcp_instance* inst,
                                 const dcp_model* model, long long iters,
                                 dcp_trace** out);
DCP_API void dcp_trace_free(dcp_trace* trace);

DCP_API long long dcp_trace_size(const dcp_trace* trace);

/* Scalar columns of row k: U(xbar_k), Phi(lambdabar_k), gap, bound. */
DCP_API dcp_status dcp_trace_row(const dcp_trace* trace, long long k,
                                 double* u_avg, double* phi_avg, double* gap,
                                 double* bound);

/* Average demand xbar_k (m entries) and prices lambdabar_k (n entries);
 * either pointer may be null. */
DCP_API dcp_status dcp_trace_averages(const dcp_trace* trace, long long k,
                                      double* demand_avg, double* prices_avg);

/* Writes the trace as CSV: k, U_avg, Phi_avg, gap, bound, xbar, lambdabar,
 * floating values with 17 significant digits. */
DCP_API dcp_status dcp_trace_write_csv(const dcp_trace* trace,
                                       const char* path);

/* ---- verification ---- */

/* Runs the built-in property suites; returns 0 on pass, 1 on failure.
 * With verbose != 0 one line per check group goes to stdout. */
DCP_API int dcp_self_check(int verbose);

#ifdef __cplusplus
}
#endif

#endif /* DCPROX_H */
