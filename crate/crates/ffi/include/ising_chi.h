#ifndef ISING_CHI_H
#define ISING_CHI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Temperature side selector for the lambda correlations.
 */
typedef enum ChiPhase {
  /**
   * T > T_c
   */
  Plus = 0,
  /**
   * T < T_c
   */
  Minus = 1,
} ChiPhase;

/**
 * Evaluation route selector for form factors.
 */
typedef enum ChiRoute {
  Quadrature = 0,
  ClosedForm = 1,
  Hypergeometric = 2,
  Theta = 3,
} ChiRoute;

/**
 * Status codes returned by every API call.
 */
typedef enum ChiStatus {
  Ok = 0,
  DomainError = 1,
  PrecisionError = 2,
  Unsupported = 3,
  BudgetExhausted = 4,
  NullPointer = 5,
  InternalError = 6,
} ChiStatus;

/**
 * Opaque evaluation context.
 */
typedef struct ChiContext ChiContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create an evaluation context with default tolerances.
 */
struct ChiContext *ising_chi_new(void);

/**
 * Release a context created by [`ising_chi_new`]. A null pointer is a no-op.
 *
 * # Safety
 * `ctx` must be a pointer previously returned by [`ising_chi_new`] that has
 * not been freed yet.
 */
void ising_chi_free(struct ChiContext *ctx);

/**
 * Message describing the most recent failure on this context, or null when
 * the last call succeeded. The pointer stays valid until the next call on
 * the same context.
 */
const char *ising_chi_last_error(const struct ChiContext *ctx);

/**
 * Library version string (static storage).
 */
const char *ising_chi_version(void);

/**
 * Complete elliptic integral K(m), parameter convention m = k^2.
 */
enum ChiStatus ising_chi_ellip_k(struct ChiContext *ctx, double m, double *out);

/**
 * Complete elliptic integral E(m), parameter convention.
 */
enum ChiStatus ising_chi_ellip_e(struct ChiContext *ctx, double m, double *out);

/**
 * Gauss hypergeometric 2F1(a, b; c; t) for real parameters, 0 <= t < 1.
 */
enum ChiStatus ising_chi_hyp2f1(struct ChiContext *ctx,
                                double a,
                                double b,
                                double c,
                                double t,
                                double *out);

/**
 * Jacobi theta_index(u, q) for real u and q; writes the value and the
 * u-derivative.
 */
enum ChiStatus ising_chi_theta(struct ChiContext *ctx,
                               uint32_t index,
                               double u,
                               double q,
                               double *out_value,
                               double *out_du);

/**
 * Nome q(k) on the physical branch 0 <= k < 1.
 */
enum ChiStatus ising_chi_nome_from_modulus(struct ChiContext *ctx, double k, double *out);

/**
 * Modulus k(q) from the nome product form, real q in [0, 1).
 */
enum ChiStatus ising_chi_modulus_from_nome(struct ChiContext *ctx, double q, double *out);

/**
 * Diagonal form factor f^{(n)}_{N,N}(t) along the selected route.
 */
enum ChiStatus ising_chi_ff_eval(struct ChiContext *ctx,
                                 uint32_t n,
                                 uint32_t big_n,
                                 double t,
                                 enum ChiRoute route,
                                 double *out);

/**
 * f^{(n)}_{0,0}(t), nome-side evaluation, t = k^2.
 */
enum ChiStatus ising_chi_f00_theta(struct ChiContext *ctx, uint32_t n, double k, double *out);

/**
 * f^{(n)}_{1,1}(t), nome-side evaluation, t = k^2.
 */
enum ChiStatus ising_chi_f11_theta(struct ChiContext *ctx, uint32_t n, double k, double *out);

/**
 * Closed form of the diagonal susceptibility sector n in {1, 2}.
 */
enum ChiStatus ising_chi_chid_closed(struct ChiContext *ctx, uint32_t n, double t, double *out);

/**
 * Quadrature route of the diagonal susceptibility sector n in {1, 2, 3}.
 */
enum ChiStatus ising_chi_chid_quad(struct ChiContext *ctx, uint32_t n, double t, double *out);

/**
 * Leading bulk sector chi^(n) for n in {1, 2} at modulus k.
 */
enum ChiStatus ising_chi_chi_bulk(struct ChiContext *ctx, uint32_t n, double k, double *out);

/**
 * Lambda correlation C±(N,N; lambda) at t, theta closed form.
 */
enum ChiStatus ising_chi_corr_theta(struct ChiContext *ctx,
                                    enum ChiPhase phase,
                                    uint32_t big_n,
                                    double lambda,
                                    double t,
                                    double *out);

/**
 * Lambda correlation via the truncated form-factor series; writes the value
 * and the geometric tail estimate.
 */
enum ChiStatus ising_chi_corr_series(struct ChiContext *ctx,
                                     enum ChiPhase phase,
                                     uint32_t big_n,
                                     double lambda,
                                     double t,
                                     uint32_t n_max,
                                     double *out_value,
                                     double *out_tail);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ISING_CHI_H */
