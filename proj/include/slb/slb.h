/*
 * C interface to the stochastic wave-packet engine: Langevin evolution of a
 * Gaussian packet center, width evolution, Bohmian trajectory ensembles, and
 * the thermal observables built on them (diffusion, arrival, transmission,
 * dwell times) for the quadratic potential family.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return SLB_OK on success; on failure they return an error code
 * and leave a human-readable message in slb_last_error() (thread-local).
 * Natural units are used throughout (hbar = m = 1 by default); temperatures
 * are energies k_B T.
 */

#ifndef SLB_H
#define SLB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef SLB_API
#if defined(_WIN32)
#define SLB_API __declspec(dllexport)
#else
#define SLB_API __attribute__((visibility("default")))
#endif
#endif

typedef enum slb_status {
  SLB_OK = 0,
  SLB_ERR_INVALID_ARGUMENT = 1,
  SLB_ERR_NUMERICAL = 2,
  SLB_ERR_NOT_CONVERGED = 3,
  SLB_ERR_UNSUPPORTED = 4,
} slb_status;

typedef enum slb_potential_kind {
  SLB_POTENTIAL_FREE = 0,
  SLB_POTENTIAL_LINEAR = 1,             /* V = m g x */
  SLB_POTENTIAL_PARABOLIC_REPELLER = 2, /* V = -(1/2) m omega^2 x^2 */
  SLB_POTENTIAL_HARMONIC = 3,           /* V = +(1/2) m omega^2 x^2 */
} slb_potential_kind;

/* Ensemble description for erfc-based barrier quantities. */
typedef enum slb_thermal_mode {
  SLB_MODE_PURE = 0,                /* fixed v0, zero noise */
  SLB_MODE_THERMAL_DISSIPATIVE = 1, /* Maxwell-Boltzmann mixture at k_B T_s */
  SLB_MODE_STOCHASTIC = 2,          /* noise + velocity double average at k_B T */
} slb_thermal_mode;

typedef enum slb_scheme {
  SLB_SCHEME_VEC = 0,            /* weak order 2 (default) */
  SLB_SCHEME_EULER_MARUYAMA = 1, /* order 1 cross-check */
} slb_scheme;

/* Physical parameters plus the initial Gaussian packet. */
typedef struct slb_model_params {
  double mass;
  double hbar;
  double friction;     /* gamma >= 0 */
  double kb_temp;      /* bath k_B T >= 0 */
  double kb_temp_sys;  /* system k_B T_s >= 0 */
  int potential;       /* slb_potential_kind */
  double linear_g;     /* acceleration for SLB_POTENTIAL_LINEAR */
  double omega;        /* frequency for the quadratic kinds */
  double q0;           /* initial packet center */
  double v0;           /* initial packet velocity (pure mode) */
  double sigma0;       /* initial packet width > 0 */
} slb_model_params;

typedef struct slb_model slb_model;
typedef struct slb_width slb_width;
typedef struct slb_ensemble slb_ensemble;
typedef struct slb_series slb_series;

SLB_API const char* slb_version(void);

/* Message describing the most recent failure on this thread. */
SLB_API const char* slb_last_error(void);

/* Natural defaults: mass = hbar = sigma0 = 1, everything else 0, free kind. */
SLB_API void slb_model_params_init(slb_model_params* params);

SLB_API slb_status slb_model_create(const slb_model_params* params, slb_model** out);
SLB_API void slb_model_destroy(slb_model* model);

/*
 * Invariant check for a run: parameter positivity, ensemble size, timestep
 * and horizon.  Violations are listed (newline-separated) in slb_last_error().
 * A barrier run whose packet is not well localized left of the barrier is
 * legal but writes a warning into warn_buf (empty string otherwise).
 */
SLB_API slb_status slb_validate_run(const slb_model_params* params, size_t n_traj, double dt,
                            double t_end, int barrier_experiment, char* warn_buf,
                            size_t warn_len);

/* --- closed-form evaluation ------------------------------------------- */

/* Noise-free center (q, v) at time t. */
SLB_API slb_status slb_center_at(const slb_model* model, double t, double* q, double* v);

/* Effective rate sqrt(|gamma^2/4 - V''/m|). */
SLB_API slb_status slb_omega_eff(const slb_model* model, double* omega);

/* Frictionless thermal width at k_B T_s. */
SLB_API slb_status slb_thermal_width_at(const slb_model* model, double t, double* sigma);

/* Thermal momentum moments and spread. */
SLB_API slb_status slb_momentum_stats(const slb_model* model, double t, double* p_mean,
                              double* p2_mean, double* spread);

/* Noise + velocity double-averaged center moments at k_B T. */
SLB_API slb_status slb_thermal_moments(const slb_model* model, double t, double* q_mean,
                               double* v_mean, double* q2_mean, double* v2_mean);

/* Velocity autocorrelation (k_B T / m) e^{-gamma t}. */
SLB_API slb_status slb_vacf(const slb_model* model, double t, double* value);

/* Free-packet thermal Wigner function and momentum density. */
SLB_API slb_status slb_wigner(const slb_model* model, double x, double p, double t, double* w);
SLB_API slb_status slb_momentum_density(const slb_model* model, double p, double* value);

/* Center distribution under noise (parabolic repeller). */
SLB_API slb_status slb_w1_stats(const slb_model* model, double t, double* mean, double* variance);
SLB_API slb_status slb_w1_density(const slb_model* model, double q, double t, double* value);

/* --- width paths -------------------------------------------------------- */

/* Integrates the width equation to t_end; classical != 0 drops the quantum
 * spreading term. */
SLB_API slb_status slb_width_compute(const slb_model* model, double dt, double t_end,
                             int classical, slb_width** out);
SLB_API void slb_width_destroy(slb_width* width);
SLB_API slb_status slb_width_at(const slb_width* width, double t, double* sigma,
                        double* sigma_dot);

/* Position-momentum uncertainty product at time t (free particle). */
SLB_API slb_status slb_uncertainty_at(const slb_model* model, const slb_width* width, double t,
                              double* u);

/* Closed-form MSD and diffusion coefficients at time t (free particle). */
SLB_API slb_status slb_msd_at(const slb_model* model, const slb_width* width, double t,
                      double* msd_cl, double* msd_q, double* d_cl, double* d_q);

/* --- barrier quantities (parabolic repeller) ----------------------------- */

SLB_API slb_status slb_transmission_at(const slb_model* model, const slb_width* width, int mode,
                               double t, double* p);
/* Exact erf-ratio form for the pure mode. */
SLB_API slb_status slb_transmission_exact_at(const slb_model* model, const slb_width* width,
                                     double t, double* p);
SLB_API slb_status slb_q_beyond_at(const slb_model* model, const slb_width* width, int mode,
                           double x, double t, double* value);
SLB_API slb_status slb_stationary_transmission(const slb_model* model, int mode, double* p);
SLB_API slb_status slb_dwell_time(const slb_model* model, int mode, double x1, double x2,
                          double* tau);
/* tau_tr/tau_ref may come back as NaN when a subensemble is empty. */
SLB_API slb_status slb_transit_split(const slb_model* model, int mode, double x1, double x2,
                             double* p_tr, double* tau_tr, double* tau_ref);

/* Arrival-time distribution from the probability current at detector x_d.
 * thermal != 0 averages over the Maxwell-Boltzmann velocities at k_B T_s.
 * Returns a density series on n_points uniform times plus the mean arrival
 * time. */
SLB_API slb_status slb_arrival_distribution(const slb_model* model, double x_d, int thermal,
                                    size_t n_points, slb_series** density,
                                    double* mean_arrival);

/* --- trajectory ensembles ------------------------------------------------ */

typedef struct slb_ensemble_options {
  size_t max_samples;  /* stored samples per trajectory (default 2000) */
  int classical_width; /* drop the quantum width term */
  int scheme;          /* slb_scheme */
  int fix_x0;          /* freeze the Born layer at x0 */
  double x0;
  int fix_v0;          /* freeze the Maxwell-Boltzmann layer at v0 */
  double v0;
  unsigned threads;    /* 0: SLB_THREADS env var, then hardware */
} slb_ensemble_options;

SLB_API void slb_ensemble_options_init(slb_ensemble_options* opts);

SLB_API slb_status slb_ensemble_build(const slb_model* model, size_t n_traj, uint64_t seed,
                              double dt, double t_end, const slb_ensemble_options* opts,
                              slb_ensemble** out);
SLB_API void slb_ensemble_destroy(slb_ensemble* ens);

SLB_API size_t slb_ensemble_size(const slb_ensemble* ens);
SLB_API size_t slb_ensemble_samples(const slb_ensemble* ens);

/* Bohmian path of one trajectory as a series (axis = time). */
SLB_API slb_status slb_ensemble_path(const slb_ensemble* ens, size_t traj, slb_series** out);

SLB_API slb_status slb_ensemble_msd(const slb_ensemble* ens, slb_series** msd_cl,
                            slb_series** msd_q, slb_series** d_cl, slb_series** d_q);
SLB_API slb_status slb_ensemble_vacf(const slb_ensemble* ens, slb_series** out);
SLB_API slb_status slb_ensemble_position_variance(const slb_ensemble* ens, slb_series** out);

/* Mean first-arrival time at x_d (direction +1 up, -1 down, 0 either) over
 * arrived trajectories; never_fraction reports the excluded share.  The
 * per-initial-position profile is returned as a series over bin centers. */
SLB_API slb_status slb_ensemble_mean_arrival(const slb_ensemble* ens, double x_d, int direction,
                                     size_t n_bins, double* mean, double* std_err,
                                     double* never_fraction, slb_series** profile);

SLB_API slb_status slb_ensemble_dwell(const slb_ensemble* ens, double x1, double x2, double* mean,
                              double* std_err, double* inside_fraction);

SLB_API slb_status slb_ensemble_transmission_fraction(const slb_ensemble* ens, double x,
                                              double* fraction, double* std_err);

SLB_API slb_status slb_ensemble_transit_split(const slb_ensemble* ens, double x1, double x2,
                                      double classify_at, double* p_tr, double* p_se,
                                      double* tau_tr, double* tau_tr_se, double* tau_ref,
                                      double* tau_ref_se, double* tau_dwell,
                                      double* tau_dwell_se);

/* --- series access -------------------------------------------------------- */

SLB_API size_t slb_series_length(const slb_series* series);
SLB_API const char* slb_series_name(const slb_series* series);
SLB_API const double* slb_series_axis(const slb_series* series);
SLB_API const double* slb_series_value(const slb_series* series);
SLB_API const double* slb_series_stderr(const slb_series* series);
SLB_API void slb_series_destroy(slb_series* series);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SLB_H */
