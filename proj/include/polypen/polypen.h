/* C interface to the polypen solver library.
 *
 * All functions return a pp_status. On failure the message and, for
 * validation errors, the name of the offending field are available from
 * pp_last_error() / pp_last_error_field() on the calling thread until the
 * next call into the library. Strings returned through char** are owned by
 * the caller and released with pp_string_free(). */
#ifndef POLYPEN_H
#define POLYPEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define PP_API __declspec(dllexport)
#else
#  define PP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pp_status {
  PP_OK = 0,
  PP_ERR_INVALID_ARGUMENT = 1,
  PP_ERR_VALIDATION = 2,
  PP_ERR_NUMERIC = 3,
  PP_ERR_NON_POLYNOMIAL = 4,
  PP_ERR_INTERNAL = 5
} pp_status;

typedef enum pp_power_strategy {
  PP_POWER_REPEATED_SQUARING = 0,
  PP_POWER_SEQUENTIAL = 1
} pp_power_strategy;

typedef struct pp_problem pp_problem;
typedef struct pp_trace pp_trace;

PP_API const char* pp_version(void);
PP_API const char* pp_last_error(void);
PP_API const char* pp_last_error_field(void);
PP_API void pp_string_free(char* s);

/* Problems. Matrices are dense row-major n*n. */
PP_API pp_status pp_problem_create(size_t n, const double* Q, const double* q, const double* A,
                                   const double* v, pp_problem** out);
PP_API pp_status pp_problem_from_json(const char* json, pp_problem** out);
PP_API pp_status pp_problem_to_json(const pp_problem* p, char** out);
PP_API void pp_problem_free(pp_problem* p);
PP_API size_t pp_problem_dim(const pp_problem* p);
/* Largest |M - M^T| seen in Q or A before symmetrization. */
PP_API double pp_problem_asymmetry(const pp_problem* p);
PP_API pp_status pp_problem_eval(const pp_problem* p, const double* x, double* f, double* g);

/* Optional settings carried by a problem file. */
typedef struct pp_file_options {
  int has_m;
  double m;
  int has_alpha;
  double alpha;
  int has_iterations;
  int iterations;
  int has_seed;
  uint64_t seed;
} pp_file_options;
PP_API pp_status pp_problem_file_options(const pp_problem* p, pp_file_options* out);

/* Penalty scaling estimation. */
typedef struct pp_scaling_options {
  int samples;
  uint64_t seed;
  double safety;
} pp_scaling_options;

typedef struct pp_scaling_report {
  double m_min_hat;
  double m_min;
  double m_inv;
  int samples;
  int certified;
} pp_scaling_report;

PP_API void pp_scaling_options_init(pp_scaling_options* opt);
PP_API pp_status pp_estimate_scaling(const pp_problem* p, const pp_scaling_options* opt,
                                     pp_scaling_report* out);
PP_API pp_status pp_scaling_report_json(const pp_scaling_report* r, char** out);
/* Number of sampled boundary points violating either requirement at m. */
PP_API pp_status pp_verify_requirements(const pp_problem* p, double m, int samples, uint64_t seed,
                                        size_t* violations);

/* Solving. */
typedef struct pp_solve_options {
  int iterations;
  double m;
  pp_power_strategy power;
  const double* x1; /* NULL: problem-file x1 if any, else the ellipsoid center */
  int diagnostics;
  int has_m_inv; /* mark the trace certified iff m >= m_inv */
  double m_inv;
  int circuit;          /* run through the arithmetic tape, all inputs secret */
  int fixed_point_bits; /* 0: off; otherwise also run in fixed point */
} pp_solve_options;

typedef struct pp_circuit_stats {
  uint64_t adds;
  uint64_t ct_ct_muls;
  uint64_t ct_pt_muls;
  int max_level;
  uint64_t plain_ops;
  uint64_t non_polynomial_events;
} pp_circuit_stats;

typedef struct pp_trace_summary {
  size_t iterations;
  double final_f;
  double final_g;
  int certified;
  int diagnostics_run;
  int invariance_violation_k; /* 0: none */
  int descent_violation_k;    /* 0: none */
  int has_circuit_stats;
  int has_fixed_point;
  double fixed_point_deviation;
  int fixed_point_overflow_k; /* -1: none */
} pp_trace_summary;

PP_API void pp_solve_options_init(pp_solve_options* opt);
PP_API pp_status pp_solve(const pp_problem* p, const pp_solve_options* opt, pp_trace** out);
PP_API void pp_trace_free(pp_trace* t);
PP_API size_t pp_trace_dim(const pp_trace* t);
PP_API pp_status pp_trace_final_x(const pp_trace* t, double* out, size_t n);
PP_API pp_status pp_trace_summary_get(const pp_trace* t, pp_trace_summary* out);
PP_API pp_status pp_trace_circuit_stats(const pp_trace* t, pp_circuit_stats* out);
PP_API pp_status pp_trace_csv(const pp_trace* t, char** out);
PP_API pp_status pp_trace_json(const pp_trace* t, char** out);
PP_API pp_status pp_circuit_stats_json(const pp_circuit_stats* s, char** out);

/* Depth planning: JSON with both power strategies, all inputs secret. */
PP_API pp_status pp_plan_depth_json(int n, int iterations, char** out);
PP_API pp_status pp_plan_depth_total(int n, int iterations, pp_power_strategy power, int* out);

/* min(a, b). xs, when non-NULL, receives iterations + 1 values x_1..x_{N+1}. */
typedef struct pp_minab_result {
  double result;
  int degenerate;
  double m;
  double auxiliary_error; /* distance of the N-th auxiliary minimizer to min(a,b) */
  int has_circuit_stats;
  pp_circuit_stats stats;
} pp_minab_result;

PP_API pp_status pp_minab(double a, double b, double alpha, int iterations, int circuit,
                          pp_minab_result* out, double* xs);

#ifdef __cplusplus
}
#endif

#endif /* POLYPEN_H */
