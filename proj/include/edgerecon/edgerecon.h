/*
 * C interface to the edge-based multi-contrast reconstruction library.
 *
 * Objects are opaque handles created by er_*_create / er_*_read and released
 * with the matching er_*_destroy. Every fallible call returns an er_status;
 * on failure er_last_error() describes the problem for the calling thread.
 * Status values double as process exit codes for the command-line tool.
 */
#ifndef EDGERECON_H
#define EDGERECON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(EDGERECON_BUILDING)
#define ER_API __declspec(dllexport)
#else
#define ER_API __declspec(dllimport)
#endif
#else
#define ER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum er_status {
  ER_OK = 0,
  ER_ERR_INVALID = 2,   /* bad argument, config, or shape mismatch */
  ER_ERR_NUMERICAL = 3, /* divergence or other runtime failure */
  ER_ERR_IO = 4
} er_status;

/* Message for the last failed call on this thread; empty after success. */
ER_API const char* er_last_error(void);

/* ---- multi-contrast complex grids ------------------------------------- */

typedef struct er_stack er_stack;

ER_API er_status er_stack_create(int32_t rows, int32_t cols, int32_t contrasts, er_stack** out);
ER_API void er_stack_destroy(er_stack* stack);
ER_API er_status er_stack_shape(const er_stack* stack, int32_t* rows, int32_t* cols,
                                int32_t* contrasts);
/* Interleaved (real, imag) row-major samples of one contrast; valid until
 * the stack is destroyed. */
ER_API er_status er_stack_data(er_stack* stack, int32_t contrast, double** data);
ER_API er_status er_stack_read(const char* path, er_stack** out);
ER_API er_status er_stack_write(const er_stack* stack, const char* path);
ER_API er_status er_stack_write_png(const er_stack* stack, int32_t contrast, const char* path);
/* Signed |u| - |reference| error image. */
ER_API er_status er_stack_write_error_png(const er_stack* image, const er_stack* reference,
                                          int32_t contrast, const char* path);

typedef enum er_phantom_kind { ER_PHANTOM_SHEPP_LOGAN = 0, ER_PHANTOM_BRAIN_LIKE = 1 } er_phantom_kind;

ER_API er_status er_phantom_create(er_phantom_kind kind, int32_t rows, int32_t cols,
                                   int32_t contrasts, er_stack** out);

/* ---- sampling masks ---------------------------------------------------- */

typedef struct er_mask er_mask;

typedef enum er_mask_kind { ER_MASK_RADIAL = 0, ER_MASK_POISSON = 1, ER_MASK_FULL = 2 } er_mask_kind;

ER_API er_status er_mask_create(er_mask_kind kind, int32_t rows, int32_t cols, double ratio,
                                uint64_t seed, er_mask** out);
ER_API void er_mask_destroy(er_mask* mask);
ER_API er_status er_mask_shape(const er_mask* mask, int32_t* rows, int32_t* cols);
ER_API er_status er_mask_ratio(const er_mask* mask, double* ratio);
ER_API er_status er_mask_read(const char* path, er_mask** out);
ER_API er_status er_mask_write(const er_mask* mask, const char* path);
ER_API er_status er_mask_write_png(const er_mask* mask, const char* path);

/* ---- acquisition ------------------------------------------------------- */

/* Masked k-space of `truth` plus complex Gaussian noise whose real and
 * imaginary parts have standard deviation `sigma` on the unnormalized-DFT
 * scale. */
ER_API er_status er_simulate(const er_stack* truth, const er_mask* mask, double sigma,
                             uint64_t seed, er_stack** kspace);

/* ---- reconstruction ---------------------------------------------------- */

typedef enum er_norm { ER_NORM_FROBENIUS = 0, ER_NORM_SPECTRAL = 1, ER_NORM_NUCLEAR = 2 } er_norm;

typedef enum er_method {
  ER_METHOD_ER = 0,
  ER_METHOD_ER_WEIGHTED = 1,
  ER_METHOD_ZERO_FILL = 2,
  ER_METHOD_INDEPENDENT = 3
} er_method;

typedef struct er_recon_options {
  er_method method;
  er_norm norm;
  double alpha;      /* l1 weight of the Jacobian norm */
  double beta;       /* data weight of the image assembly step */
  double tau;        /* step size; <= 0 selects 1/L automatically */
  double tol;        /* relative iterate change stopping threshold */
  double weight_cap; /* clamp of the noise weights (er-weighted) */
  int32_t max_iters;
  int32_t zero_init;        /* nonzero: start from a zero Jacobian */
  int32_t record_objective; /* nonzero: evaluate the objective each iteration */
} er_recon_options;

ER_API void er_recon_options_init(er_recon_options* options);

typedef struct er_trace er_trace;

/* `truth` may be NULL; when given the trace holds per-contrast relative
 * errors. `trace` may be NULL when not wanted. */
ER_API er_status er_reconstruct(const er_stack* kspace, const er_mask* mask,
                                const er_recon_options* options, const er_stack* truth,
                                er_stack** image, er_trace** trace);

ER_API void er_trace_destroy(er_trace* trace);
ER_API size_t er_trace_length(const er_trace* trace);
ER_API int32_t er_trace_error_columns(const er_trace* trace);
/* `relerr` receives er_trace_error_columns() values and may be NULL. */
ER_API er_status er_trace_record(const er_trace* trace, size_t index, int32_t* iter,
                                 double* seconds, double* objective, double* relerr);
ER_API er_status er_trace_write_csv(const er_trace* trace, const char* path);
ER_API er_status er_trace_read_csv(const char* path, er_trace** out);

/* ---- metrics ----------------------------------------------------------- */

ER_API er_status er_relative_error(const er_stack* image, const er_stack* reference,
                                   int32_t contrast, double* out);
/* +infinity when the images agree exactly. */
ER_API er_status er_psnr(const er_stack* image, const er_stack* reference, int32_t contrast,
                         double* out);

typedef struct er_report {
  const char* method;
  const char* norm;
  const char* mask;
  double mask_ratio;
  double sigma;
  uint64_t seed;
  int32_t contrasts;
  const double* relative_error; /* contrasts values */
  const double* psnr_db;        /* contrasts values */
  double seconds;
  int32_t iterations;
} er_report;

ER_API er_status er_report_write_json(const er_report* report, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* EDGERECON_H */
