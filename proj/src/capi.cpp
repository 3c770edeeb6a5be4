#include "slb/slb.h"

#include <cstring>
#include <new>
#include <string>

#include "analytics.hpp"
#include "core.hpp"
#include "dynamics.hpp"
#include "observables.hpp"
#include "trajectories.hpp"

using slb::analytics::PacketSetup;
using slb::analytics::ThermalMode;
using slb::observables::ObservableSeries;

struct slb_model {
  slb::PhysicalParams params;
  slb::Potential potential = slb::Potential::free_particle();
  PacketSetup setup;
};

struct slb_width {
  slb::WidthFunction fn;
};

struct slb_ensemble {
  slb::TrajectoryEnsemble ens;
};

struct slb_series {
  ObservableSeries s;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

slb_status fail(slb_status code, const std::string& msg) {
  set_error(msg);
  return code;
}

template <typename Fn>
slb_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(SLB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(SLB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SLB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const slb::numerical_error& e) {
    return fail(SLB_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SLB_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SLB_ERR_NUMERICAL, e.what());
  }
}

slb::Potential make_potential(const slb_model_params& p) {
  switch (p.potential) {
    case SLB_POTENTIAL_FREE:
      return slb::Potential::free_particle();
    case SLB_POTENTIAL_LINEAR:
      return slb::Potential::linear(p.linear_g);
    case SLB_POTENTIAL_PARABOLIC_REPELLER:
      return slb::Potential::parabolic_repeller(p.omega);
    case SLB_POTENTIAL_HARMONIC:
      return slb::Potential::harmonic(p.omega);
    default:
      throw std::invalid_argument("unknown potential kind");
  }
}

slb::PhysicalParams make_params(const slb_model_params& p) {
  slb::PhysicalParams out;
  out.mass = p.mass;
  out.hbar = p.hbar;
  out.friction = p.friction;
  out.kb_temp = p.kb_temp;
  out.kb_temp_sys = p.kb_temp_sys;
  return out;
}

ThermalMode make_mode(int mode) {
  switch (mode) {
    case SLB_MODE_PURE:
      return ThermalMode::pure;
    case SLB_MODE_THERMAL_DISSIPATIVE:
      return ThermalMode::thermal_dissipative;
    case SLB_MODE_STOCHASTIC:
      return ThermalMode::stochastic;
    default:
      throw std::invalid_argument("unknown thermal mode");
  }
}

slb_series* wrap_series(ObservableSeries s) {
  return new slb_series{std::move(s)};
}

}  // namespace

extern "C" {

const char* slb_version(void) { return "1.0.0"; }

const char* slb_last_error(void) { return g_last_error.c_str(); }

void slb_model_params_init(slb_model_params* params) {
  if (!params) return;
  std::memset(params, 0, sizeof(*params));
  params->mass = 1.0;
  params->hbar = 1.0;
  params->sigma0 = 1.0;
  params->potential = SLB_POTENTIAL_FREE;
}

slb_status slb_model_create(const slb_model_params* params, slb_model** out) {
  if (!params || !out) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    if (!(params->mass > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (!(params->hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
    if (params->friction < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (params->kb_temp < 0.0) throw std::invalid_argument("kt must be >= 0");
    if (params->kb_temp_sys < 0.0) throw std::invalid_argument("kts must be >= 0");
    if (params->omega < 0.0) throw std::invalid_argument("omega must be >= 0");
    if (!(params->sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    auto* m = new slb_model;
    m->params = make_params(*params);
    m->potential = make_potential(*params);
    m->setup = PacketSetup{params->q0, params->v0, params->sigma0};
    *out = m;
    return SLB_OK;
  });
}

void slb_model_destroy(slb_model* model) { delete model; }

slb_status slb_validate_run(const slb_model_params* params, size_t n_traj, double dt,
                            double t_end, int barrier_experiment, char* warn_buf,
                            size_t warn_len) {
  if (!params) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  if (warn_buf && warn_len > 0) warn_buf[0] = '\0';
  return guarded([&]() {
    slb::ExperimentConfig cfg;
    cfg.preset = barrier_experiment ? slb::Preset::Transmission : slb::Preset::Custom;
    cfg.params = make_params(*params);
    cfg.potential = (slb::PotentialKind)params->potential;
    cfg.linear_g = params->linear_g;
    cfg.omega = params->omega;
    cfg.q0 = params->q0;
    cfg.v0 = params->v0;
    cfg.sigma0 = params->sigma0;
    cfg.n_traj = n_traj;
    cfg.dt = dt;
    cfg.t_end = t_end;
    const slb::ValidationReport rep = slb::validate_config(cfg);
    if (warn_buf && warn_len > 0 && !rep.warnings.empty()) {
      std::string w;
      for (const auto& s : rep.warnings) {
        if (!w.empty()) w += '\n';
        w += s;
      }
      std::strncpy(warn_buf, w.c_str(), warn_len - 1);
      warn_buf[warn_len - 1] = '\0';
    }
    if (!rep.ok()) {
      std::string msg;
      for (const auto& e : rep.errors) {
        if (!msg.empty()) msg += '\n';
        msg += e;
      }
      throw std::invalid_argument(msg);
    }
    return SLB_OK;
  });
}

slb_status slb_center_at(const slb_model* model, double t, double* q, double* v) {
  if (!model || !q || !v) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const slb::CenterState c =
        slb::analytic_center(model->params, model->potential, model->setup.q0,
                             model->setup.v0, t);
    *q = c.q;
    *v = c.v;
    return SLB_OK;
  });
}

slb_status slb_omega_eff(const slb_model* model, double* omega) {
  if (!model || !omega) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  *omega = slb::omega_eff(model->params, model->potential);
  return SLB_OK;
}

slb_status slb_thermal_width_at(const slb_model* model, double t, double* sigma) {
  if (!model || !sigma) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *sigma = slb::analytics::thermal_width(model->potential, model->params,
                                           model->setup.sigma0, t);
    return SLB_OK;
  });
}

slb_status slb_momentum_stats(const slb_model* model, double t, double* p_mean,
                              double* p2_mean, double* spread) {
  if (!model || !p_mean || !p2_mean || !spread)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto s = slb::analytics::momentum_stats(model->potential, model->params,
                                                  model->setup.sigma0, model->setup.q0, t);
    *p_mean = s.p_mean;
    *p2_mean = s.p2_mean;
    *spread = s.spread;
    return SLB_OK;
  });
}

slb_status slb_thermal_moments(const slb_model* model, double t, double* q_mean,
                               double* v_mean, double* q2_mean, double* v2_mean) {
  if (!model || !q_mean || !v_mean || !q2_mean || !v2_mean)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto m =
        slb::analytics::thermal_moments(model->potential, model->params, model->setup.q0, t);
    *q_mean = m.q_mean;
    *v_mean = m.v_mean;
    *q2_mean = m.q2_mean;
    *v2_mean = m.v2_mean;
    return SLB_OK;
  });
}

slb_status slb_vacf(const slb_model* model, double t, double* value) {
  if (!model || !value) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  *value = slb::analytics::vacf(model->params, t);
  return SLB_OK;
}

slb_status slb_wigner(const slb_model* model, double x, double p, double t, double* w) {
  if (!model || !w) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *w = slb::analytics::wigner_free(model->potential, model->params, model->setup.sigma0,
                                     model->setup.q0, x, p, t);
    return SLB_OK;
  });
}

slb_status slb_momentum_density(const slb_model* model, double p, double* value) {
  if (!model || !value) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *value = slb::analytics::momentum_distribution(model->potential, model->params,
                                                   model->setup.sigma0, p);
    return SLB_OK;
  });
}

slb_status slb_w1_stats(const slb_model* model, double t, double* mean, double* variance) {
  if (!model || !mean || !variance) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto s = slb::analytics::w1_stats(model->params, model->potential,
                                            model->setup.q0, model->setup.v0, t);
    *mean = s.mean;
    *variance = s.variance;
    return SLB_OK;
  });
}

slb_status slb_w1_density(const slb_model* model, double q, double t, double* value) {
  if (!model || !value) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *value = slb::analytics::w1_density(model->params, model->potential, model->setup.q0,
                                        model->setup.v0, q, t);
    return SLB_OK;
  });
}

slb_status slb_width_compute(const slb_model* model, double dt, double t_end,
                             int classical, slb_width** out) {
  if (!model || !out) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    slb::WidthPath path = slb::integrate_pinney(model->params, model->potential,
                                                model->setup.sigma0, dt, t_end,
                                                classical != 0);
    *out = new slb_width{slb::WidthFunction(std::move(path))};
    return SLB_OK;
  });
}

void slb_width_destroy(slb_width* width) { delete width; }

slb_status slb_width_at(const slb_width* width, double t, double* sigma,
                        double* sigma_dot) {
  if (!width || !sigma || !sigma_dot) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *sigma = width->fn.sigma(t);
    *sigma_dot = width->fn.sigma_dot(t);
    return SLB_OK;
  });
}

slb_status slb_uncertainty_at(const slb_model* model, const slb_width* width, double t,
                              double* u) {
  if (!model || !width || !u) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *u = slb::analytics::uncertainty_product(model->params, width->fn.sigma(t),
                                             width->fn.sigma_dot(t), t);
    return SLB_OK;
  });
}

slb_status slb_msd_at(const slb_model* model, const slb_width* width, double t,
                      double* msd_cl, double* msd_q, double* d_cl, double* d_q) {
  if (!model || !width || !msd_cl || !msd_q || !d_cl || !d_q)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto m = slb::analytics::msd_and_diffusion(model->params, width->fn.sigma(t),
                                                     model->setup.sigma0, t);
    *msd_cl = m.msd_classical;
    *msd_q = m.msd_quantum;
    *d_cl = m.d_classical;
    *d_q = m.d_quantum;
    return SLB_OK;
  });
}

slb_status slb_transmission_at(const slb_model* model, const slb_width* width, int mode,
                               double t, double* p) {
  if (!model || !width || !p) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *p = slb::analytics::transmission_probability(make_mode(mode), model->params,
                                                  model->potential, model->setup,
                                                  width->fn, t);
    return SLB_OK;
  });
}

slb_status slb_transmission_exact_at(const slb_model* model, const slb_width* width,
                                     double t, double* p) {
  if (!model || !width || !p) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *p = slb::analytics::transmission_probability_exact(model->params, model->potential,
                                                        model->setup, width->fn, t);
    return SLB_OK;
  });
}

slb_status slb_q_beyond_at(const slb_model* model, const slb_width* width, int mode,
                           double x, double t, double* value) {
  if (!model || !width || !value) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *value = slb::analytics::q_beyond(make_mode(mode), model->params, model->potential,
                                      model->setup, width->fn, x, t);
    return SLB_OK;
  });
}

slb_status slb_stationary_transmission(const slb_model* model, int mode, double* p) {
  if (!model || !p) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *p = slb::analytics::stationary_transmission(make_mode(mode), model->params,
                                                 model->potential, model->setup);
    return SLB_OK;
  });
}

slb_status slb_dwell_time(const slb_model* model, int mode, double x1, double x2,
                          double* tau) {
  if (!model || !tau) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *tau = slb::analytics::dwell_time(make_mode(mode), model->params, model->potential,
                                      model->setup, x1, x2);
    return SLB_OK;
  });
}

slb_status slb_transit_split(const slb_model* model, int mode, double x1, double x2,
                             double* p_tr, double* tau_tr, double* tau_ref) {
  if (!model || !p_tr || !tau_tr || !tau_ref)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto s = slb::observables::split_transit_times(
        make_mode(mode), model->params, model->potential, model->setup, x1, x2);
    *p_tr = s.p_tr;
    *tau_tr = s.tau_tr;
    *tau_ref = s.tau_ref;
    return SLB_OK;
  });
}

slb_status slb_arrival_distribution(const slb_model* model, double x_d, int thermal,
                                    size_t n_points, slb_series** density,
                                    double* mean_arrival) {
  if (!model || !density || !mean_arrival)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const slb::observables::ArrivalDistribution dist(model->params, model->potential,
                                                     model->setup, x_d, thermal != 0);
    *density = wrap_series(dist.sample(n_points));
    *mean_arrival = dist.mean_arrival();
    return SLB_OK;
  });
}

void slb_ensemble_options_init(slb_ensemble_options* opts) {
  if (!opts) return;
  std::memset(opts, 0, sizeof(*opts));
  opts->max_samples = 2000;
  opts->scheme = SLB_SCHEME_VEC;
}

slb_status slb_ensemble_build(const slb_model* model, size_t n_traj, uint64_t seed,
                              double dt, double t_end, const slb_ensemble_options* opts,
                              slb_ensemble** out) {
  if (!model || !out) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    slb::EnsembleOptions o;
    if (opts) {
      o.max_samples = opts->max_samples;
      o.classical_width = opts->classical_width != 0;
      o.scheme = opts->scheme == SLB_SCHEME_EULER_MARUYAMA
                     ? slb::LangevinScheme::euler_maruyama
                     : slb::LangevinScheme::vanden_eijnden_ciccotti;
      if (opts->fix_x0) o.fixed_x0 = opts->x0;
      if (opts->fix_v0) o.fixed_v0 = opts->v0;
      o.n_threads = opts->threads;
    }
    slb::TrajectoryEnsemble ens =
        slb::build_ensemble(model->params, model->potential, model->setup.q0,
                            model->setup.v0, model->setup.sigma0, n_traj, seed, dt,
                            t_end, o);
    *out = new slb_ensemble{std::move(ens)};
    return SLB_OK;
  });
}

void slb_ensemble_destroy(slb_ensemble* ens) { delete ens; }

size_t slb_ensemble_size(const slb_ensemble* ens) {
  return ens ? ens->ens.traj.size() : 0;
}

size_t slb_ensemble_samples(const slb_ensemble* ens) {
  return ens ? ens->ens.n_samples() : 0;
}

slb_status slb_ensemble_path(const slb_ensemble* ens, size_t traj, slb_series** out) {
  if (!ens || !out) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    if (traj >= ens->ens.traj.size())
      throw std::invalid_argument("trajectory index out of range");
    ObservableSeries s;
    s.name = "bohmian_path";
    s.axis = ens->ens.time;
    s.ensemble_size = ens->ens.traj.size();
    s.seed = ens->ens.seed;
    const auto& tr = ens->ens.traj[traj];
    s.value.resize(ens->ens.n_samples());
    s.std_err.assign(ens->ens.n_samples(), 0.0);
    for (std::size_t j = 0; j < ens->ens.n_samples(); ++j) {
      s.value[j] = ens->ens.x_at(tr, j);
    }
    *out = wrap_series(std::move(s));
    return SLB_OK;
  });
}

slb_status slb_ensemble_msd(const slb_ensemble* ens, slb_series** msd_cl,
                            slb_series** msd_q, slb_series** d_cl, slb_series** d_q) {
  if (!ens || !msd_cl || !msd_q || !d_cl || !d_q)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    auto series = slb::observables::estimate_msd_diffusion(ens->ens);
    *msd_cl = wrap_series(std::move(series.msd_classical));
    *msd_q = wrap_series(std::move(series.msd_quantum));
    *d_cl = wrap_series(std::move(series.diff_classical));
    *d_q = wrap_series(std::move(series.diff_quantum));
    return SLB_OK;
  });
}

slb_status slb_ensemble_vacf(const slb_ensemble* ens, slb_series** out) {
  if (!ens || !out) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *out = wrap_series(slb::observables::estimate_vacf(ens->ens));
    return SLB_OK;
  });
}

slb_status slb_ensemble_position_variance(const slb_ensemble* ens, slb_series** out) {
  if (!ens || !out) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *out = wrap_series(slb::observables::estimate_position_variance(ens->ens));
    return SLB_OK;
  });
}

slb_status slb_ensemble_mean_arrival(const slb_ensemble* ens, double x_d, int direction,
                                     size_t n_bins, double* mean, double* std_err,
                                     double* never_fraction, slb_series** profile) {
  if (!ens || !mean || !std_err || !never_fraction)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    auto stats = slb::observables::mean_arrival_time(ens->ens, x_d, direction,
                                                     n_bins == 0 ? 13 : n_bins);
    *mean = stats.mean;
    *std_err = stats.std_err;
    *never_fraction = stats.never_fraction;
    if (profile) *profile = wrap_series(std::move(stats.profile));
    return SLB_OK;
  });
}

slb_status slb_ensemble_dwell(const slb_ensemble* ens, double x1, double x2, double* mean,
                              double* std_err, double* inside_fraction) {
  if (!ens || !mean || !std_err || !inside_fraction)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto d = slb::observables::dwell_time_trajectory(ens->ens, x1, x2);
    *mean = d.mean;
    *std_err = d.std_err;
    *inside_fraction = d.still_inside_fraction;
    return SLB_OK;
  });
}

slb_status slb_ensemble_transmission_fraction(const slb_ensemble* ens, double x,
                                              double* fraction, double* std_err) {
  if (!ens || !fraction || !std_err) return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto f = slb::observables::transmission_fraction(ens->ens, x);
    *fraction = f.fraction;
    *std_err = f.std_err;
    return SLB_OK;
  });
}

slb_status slb_ensemble_transit_split(const slb_ensemble* ens, double x1, double x2,
                                      double classify_at, double* p_tr, double* p_se,
                                      double* tau_tr, double* tau_tr_se, double* tau_ref,
                                      double* tau_ref_se, double* tau_dwell,
                                      double* tau_dwell_se) {
  if (!ens || !p_tr || !p_se || !tau_tr || !tau_tr_se || !tau_ref || !tau_ref_se ||
      !tau_dwell || !tau_dwell_se)
    return fail(SLB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    const auto s = slb::observables::split_transit_times_mc(ens->ens, x1, x2, classify_at);
    *p_tr = s.p_tr;
    *p_se = s.p_se;
    *tau_tr = s.tau_tr;
    *tau_tr_se = s.tau_tr_se;
    *tau_ref = s.tau_ref;
    *tau_ref_se = s.tau_ref_se;
    *tau_dwell = s.tau_dwell;
    *tau_dwell_se = s.tau_dwell_se;
    return SLB_OK;
  });
}

size_t slb_series_length(const slb_series* series) {
  return series ? series->s.axis.size() : 0;
}

const char* slb_series_name(const slb_series* series) {
  return series ? series->s.name.c_str() : "";
}

const double* slb_series_axis(const slb_series* series) {
  return series ? series->s.axis.data() : nullptr;
}

const double* slb_series_value(const slb_series* series) {
  return series ? series->s.value.data() : nullptr;
}

const double* slb_series_stderr(const slb_series* series) {
  return series ? series->s.std_err.data() : nullptr;
}

void slb_series_destroy(slb_series* series) { delete series; }

}  // extern "C"
