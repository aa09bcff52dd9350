/* C interface to the directed-subdifferential library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every function returns a dsub_status; on failure
 * dsub_last_error() describes the problem (thread-local, valid until the
 * next call on the same thread). Strings returned through char** out
 * parameters are allocated by the library and released with
 * dsub_string_free.
 */
#ifndef DSUB_DSUB_H
#define DSUB_DSUB_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DSUB_BUILDING_LIBRARY)
#    define DSUB_API __declspec(dllexport)
#  else
#    define DSUB_API __declspec(dllimport)
#  endif
#else
#  define DSUB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsub_status {
  DSUB_OK = 0,
  DSUB_ERR_PARSE = 1,
  DSUB_ERR_UNKNOWN_IDENTIFIER = 2,
  DSUB_ERR_ARITY = 3,
  DSUB_ERR_DOMAIN = 4,
  DSUB_ERR_DIVISION_BY_ZERO = 5,
  DSUB_ERR_DIMENSION = 6,
  DSUB_ERR_GRID = 7,
  DSUB_ERR_INVALID_ARGUMENT = 8,
  DSUB_ERR_KINK = 9,
  DSUB_ERR_WITNESS_NOT_FOUND = 10,
  DSUB_ERR_INTERNAL = 11
} dsub_status;

typedef struct dsub_expr dsub_expr;
typedef struct dsub_grid dsub_grid;
typedef struct dsub_dirset dsub_dirset;

typedef struct dsub_options {
  double eps_active;     /* active-set factor, default 1e-9 */
  double eps_order;      /* partial-order slack, default 1e-9 */
  double rule_tol_scale; /* calculus-rule tolerance scale, default 1e-9 */
} dsub_options;

DSUB_API void dsub_options_default(dsub_options* opts);

DSUB_API const char* dsub_last_error(void);
/* Byte offset of the last parse error, or -1. */
DSUB_API long dsub_last_error_position(void);
DSUB_API const char* dsub_status_name(dsub_status status);
DSUB_API void dsub_string_free(char* s);

/* ---- expressions ------------------------------------------------------ */

/* arity 0 infers the arity from the largest variable index. */
DSUB_API dsub_status dsub_expr_parse(const char* text, size_t arity, dsub_expr** out);
DSUB_API void dsub_expr_free(dsub_expr* e);
DSUB_API size_t dsub_expr_arity(const dsub_expr* e);
DSUB_API dsub_status dsub_expr_eval(const dsub_expr* e, const double* x, size_t n, double* out);
DSUB_API dsub_status dsub_expr_dirderiv(const dsub_expr* e, const double* x, const double* l,
                                        size_t n, double eps_active, double* out);
/* Expression of u -> f'(x; u). */
DSUB_API dsub_status dsub_expr_transform(const dsub_expr* e, const double* x, size_t n,
                                         double eps_active, dsub_expr** out);
DSUB_API dsub_status dsub_expr_to_json(const dsub_expr* e, char** out);
DSUB_API dsub_status dsub_expr_to_string(const dsub_expr* e, char** out);

/* ---- grids ------------------------------------------------------------ */

/* dim 2: circle with `resolution` directions; dim 3: lattice with
 * resolution/4 polar rings of resolution/2 points over circles of
 * `resolution` directions. resolution >= 8. */
DSUB_API dsub_status dsub_grid_create(size_t dim, size_t resolution, dsub_grid** out);
DSUB_API void dsub_grid_free(dsub_grid* g);
DSUB_API size_t dsub_grid_size(const dsub_grid* g);
DSUB_API size_t dsub_grid_dim(const dsub_grid* g);
/* Copies direction k into out[0..dim-1]. */
DSUB_API dsub_status dsub_grid_direction(const dsub_grid* g, size_t k, double* out);
DSUB_API const char* dsub_grid_id(const dsub_grid* g);

/* ---- directed sets ---------------------------------------------------- */

/* grid may be NULL for univariate functions. opts may be NULL. */
DSUB_API dsub_status dsub_subdiff(const dsub_expr* e, const double* x, size_t n,
                                  const dsub_grid* grid, const dsub_options* opts,
                                  dsub_dirset** out);
DSUB_API dsub_status dsub_embed_gradient(const dsub_expr* e, const double* x, size_t n,
                                         const dsub_grid* grid, const dsub_options* opts,
                                         dsub_dirset** out);
/* vertices: count (x, y) pairs. */
DSUB_API dsub_status dsub_embed_polygon(const double* vertices, size_t count,
                                        const dsub_grid* grid, dsub_dirset** out);
DSUB_API dsub_status dsub_dirset_zero(size_t dim, const dsub_grid* grid, dsub_dirset** out);
DSUB_API void dsub_dirset_free(dsub_dirset* d);
DSUB_API size_t dsub_dirset_dim(const dsub_dirset* d);
DSUB_API double dsub_dirset_norm(const dsub_dirset* d);
DSUB_API dsub_status dsub_dirset_support_range(const dsub_dirset* d, double* lo, double* hi);
/* Leaf access for univariate sets: a(-1), a(1). */
DSUB_API dsub_status dsub_dirset_interval(const dsub_dirset* d, double* a_neg, double* a_pos);
DSUB_API dsub_status dsub_dirset_lincomb(double alpha, const dsub_dirset* a, double beta,
                                         const dsub_dirset* b, dsub_dirset** out);
DSUB_API dsub_status dsub_dirset_sup(const dsub_dirset* const* sets, size_t count,
                                     const dsub_options* opts, dsub_dirset** out);
DSUB_API dsub_status dsub_dirset_inf(const dsub_dirset* const* sets, size_t count,
                                     const dsub_options* opts, dsub_dirset** out);
DSUB_API dsub_status dsub_dirset_leq(const dsub_dirset* a, const dsub_dirset* b, double eps,
                                     int* result);
DSUB_API dsub_status dsub_dirset_to_json(const dsub_dirset* d, char** out);
DSUB_API dsub_status dsub_dirset_from_json(const char* json, dsub_dirset** out);
DSUB_API dsub_status dsub_dirset_segments_csv(const dsub_dirset* d, char** out);
DSUB_API dsub_status dsub_dirset_segments_svg(const dsub_dirset* d, char** out);
/* Number of inverted segments of a 2-D set. */
DSUB_API dsub_status dsub_dirset_inverted_count(const dsub_dirset* d, size_t* out);

/* ---- verification ----------------------------------------------------- */

/* Selects one calculus rule and its operands.
 *   sum:       f1, f2, alpha, beta, point
 *   product:   f1, f2, point
 *   quotient:  f1, f2, point
 *   max, min:  f1, f2 and optionally `functions`, point
 *   fixpoint:  f, point
 *   taylor:    f (outer, arity = inner_count), inner maps, point
 *   chain1d:   f (outer), univariate inner maps, point of length 1 (t0)
 * The arity of f1/f2/f/inner maps equals n (the point length). */
typedef struct dsub_verify_request {
  const char* rule;
  const char* f;
  const char* f1;
  const char* f2;
  const char* const* functions;
  size_t function_count;
  const char* const* inner;
  size_t inner_count;
  double alpha;
  double beta;
  const double* point;
  size_t n;
  size_t resolution;
} dsub_verify_request;

/* Writes a JSON array of reports; *all_pass is 1 iff every report passed. */
DSUB_API dsub_status dsub_verify(const dsub_verify_request* req, const dsub_options* opts,
                                 char** report_json, int* all_pass);

/* Randomised suite: `count` seeded instances for `rule` (any rule name above
 * or "all"); instances whose operands are undefined are redrawn. */
DSUB_API dsub_status dsub_verify_random(const char* rule, size_t count, unsigned long long seed,
                                        size_t resolution, const dsub_options* opts,
                                        char** report_json, int* all_pass, size_t* report_count);

/* ---- optimality and mean value --------------------------------------- */

DSUB_API dsub_status dsub_optcheck(const dsub_expr* e, const double* x, size_t n,
                                   const dsub_grid* grid, const dsub_options* opts,
                                   int* min_candidate, int* max_candidate);

typedef struct dsub_mvt_result {
  double t_hat;
  double residual;
  double a_neg; /* directed interval at t_hat */
  double a_pos;
  int from_scan;
} dsub_mvt_result;

/* x_hat receives n values. */
DSUB_API dsub_status dsub_mvt(const dsub_expr* g, const double* x0, const double* x1, size_t n,
                              size_t scan_points, double eps, const dsub_options* opts,
                              dsub_mvt_result* out, double* x_hat);

#ifdef __cplusplus
}
#endif

#endif /* DSUB_DSUB_H */
