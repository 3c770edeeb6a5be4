#include "observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadrature.hpp"

namespace slb::observables {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void require_free(const TrajectoryEnsemble& ens, const char* who) {
  if (ens.potential.kind() != PotentialKind::Free) {
    throw std::invalid_argument(std::string(who) + ": free-particle ensemble required");
  }
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return {kNan, kNan};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / (double)n;
  if (n == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) {
    const double d = x - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / ((double)n * (double)(n - 1)))};
}

}  // namespace

MsdSeries estimate_msd_diffusion(const TrajectoryEnsemble& ens) {
  require_free(ens, "estimate_msd_diffusion");
  const std::size_t n = ens.traj.size();
  const std::size_t m = ens.n_samples();
  MsdSeries out;
  out.msd_classical.name = "msd_classical";
  out.msd_quantum.name = "msd_quantum";
  out.diff_classical.name = "diff_classical";
  out.diff_quantum.name = "diff_quantum";
  for (ObservableSeries* s : {&out.msd_classical, &out.msd_quantum, &out.diff_classical,
                              &out.diff_quantum}) {
    s->axis = ens.time;
    s->value.resize(m);
    s->std_err.resize(m);
    s->ensemble_size = n;
    s->seed = ens.seed;
  }
  std::vector<double> d2(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ens.center_q_at(ens.traj[i], j) - ens.q0;
      d2[i] = d * d;
    }
    const MeanSe ms = mean_and_se(d2);
    const double dw = ens.sigma[j] - ens.sigma0;
    const double t = ens.time[j];
    const double inv2t = t > 0.0 ? 1.0 / (2.0 * t) : 0.0;
    out.msd_classical.value[j] = ms.mean;
    out.msd_classical.std_err[j] = ms.se;
    out.msd_quantum.value[j] = ms.mean + dw * dw;
    out.msd_quantum.std_err[j] = ms.se;
    out.diff_classical.value[j] = ms.mean * inv2t;
    out.diff_classical.std_err[j] = ms.se * inv2t;
    out.diff_quantum.value[j] = (ms.mean + dw * dw) * inv2t;
    out.diff_quantum.std_err[j] = ms.se * inv2t;
  }
  return out;
}

ObservableSeries estimate_vacf(const TrajectoryEnsemble& ens) {
  require_free(ens, "estimate_vacf");
  const std::size_t n = ens.traj.size();
  const std::size_t m = ens.n_samples();
  ObservableSeries out;
  out.name = "vacf";
  out.axis = ens.time;
  out.value.resize(m);
  out.std_err.resize(m);
  out.ensemble_size = n;
  out.seed = ens.seed;
  std::vector<double> prod(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const TrajectoryEnsemble::Trajectory& tr = ens.traj[i];
      prod[i] = ens.v_at(tr, 0) * ens.v_at(tr, j);
    }
    const MeanSe ms = mean_and_se(prod);
    out.value[j] = ms.mean;
    out.std_err[j] = ms.se;
  }
  return out;
}

ObservableSeries estimate_position_variance(const TrajectoryEnsemble& ens) {
  const std::size_t n = ens.traj.size();
  const std::size_t m = ens.n_samples();
  ObservableSeries out;
  out.name = "x_variance";
  out.axis = ens.time;
  out.value.resize(m);
  out.std_err.resize(m);
  out.ensemble_size = n;
  out.seed = ens.seed;
  std::vector<double> x(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) x[i] = ens.x_at(ens.traj[i], j);
    double sum = 0.0;
    for (double xi : x) sum += xi;
    const double mean = sum / (double)n;
    double ss = 0.0;
    for (double xi : x) {
      const double d = xi - mean;
      ss += d * d;
    }
    const double var = n > 1 ? ss / (double)(n - 1) : 0.0;
    out.value[j] = var;
    // Gaussian-sample standard error of the variance
    out.std_err[j] = n > 1 ? var * std::sqrt(2.0 / (double)(n - 1)) : 0.0;
  }
  return out;
}

ArrivalRecord first_arrival(const TrajectoryEnsemble& ens, std::size_t traj, double x_d,
                            int direction) {
  const TrajectoryEnsemble::Trajectory& tr = ens.traj.at(traj);
  const std::size_t m = ens.n_samples();
  ArrivalRecord rec;
  rec.traj = traj;
  rec.x_d = x_d;
  double prev = ens.x_at(tr, 0);
  for (std::size_t j = 1; j < m; ++j) {
    const double cur = ens.x_at(tr, j);
    const bool up = prev < x_d && cur >= x_d;
    const bool down = prev > x_d && cur <= x_d;
    if ((direction >= 0 && up) || (direction <= 0 && down)) {
      const double frac = (x_d - prev) / (cur - prev);
      rec.arrived = true;
      rec.t = ens.time[j - 1] + frac * (ens.time[j] - ens.time[j - 1]);
      return rec;
    }
    prev = cur;
  }
  return rec;
}

ArrivalStats mean_arrival_time(const TrajectoryEnsemble& ens, double x_d, int direction,
                               std::size_t n_bins) {
  const std::size_t n = ens.traj.size();
  ArrivalStats stats;
  std::vector<double> arrived;
  arrived.reserve(n);
  std::vector<std::vector<double>> bins(n_bins);
  const double half_span = 3.25 * ens.sigma0;
  const double lo = ens.q0 - half_span;
  const double bin_w = 2.0 * half_span / (double)n_bins;

  for (std::size_t i = 0; i < n; ++i) {
    const ArrivalRecord rec = first_arrival(ens, i, x_d, direction);
    if (!rec.arrived) continue;
    arrived.push_back(rec.t);
    const double pos = (ens.traj[i].x0 - lo) / bin_w;
    if (pos >= 0.0 && pos < (double)n_bins) {
      bins[(std::size_t)pos].push_back(rec.t);
    }
  }
  const MeanSe all = mean_and_se(arrived);
  stats.mean = all.mean;
  stats.std_err = all.se;
  stats.n_arrived = arrived.size();
  stats.never_fraction = 1.0 - (double)arrived.size() / (double)n;

  stats.profile.name = "arrival_profile";
  stats.profile.ensemble_size = n;
  stats.profile.seed = ens.seed;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (bins[b].empty()) continue;
    const MeanSe ms = mean_and_se(bins[b]);
    stats.profile.axis.push_back(lo + ((double)b + 0.5) * bin_w);
    stats.profile.value.push_back(ms.mean);
    stats.profile.std_err.push_back(ms.se);
  }
  return stats;
}

namespace {

// Residence time of one linearly interpolated trajectory in [x1, x2].
double residence_time(const TrajectoryEnsemble& ens,
                      const TrajectoryEnsemble::Trajectory& tr, double x1, double x2) {
  const std::size_t m = ens.n_samples();
  double acc = 0.0;
  double a = ens.x_at(tr, 0);
  for (std::size_t j = 1; j < m; ++j) {
    const double b = ens.x_at(tr, j);
    const double dt = ens.time[j] - ens.time[j - 1];
    if (a == b) {
      if (a >= x1 && a <= x2) acc += dt;
    } else {
      const double lo = std::min(a, b), hi = std::max(a, b);
      const double overlap = std::min(hi, x2) - std::max(lo, x1);
      if (overlap > 0.0) acc += dt * overlap / (hi - lo);
    }
    a = b;
  }
  return acc;
}

}  // namespace

DwellStats dwell_time_trajectory(const TrajectoryEnsemble& ens, double x1, double x2) {
  if (x1 > x2) throw std::invalid_argument("dwell_time_trajectory: x1 must be <= x2");
  const std::size_t n = ens.traj.size();
  std::vector<double> res(n);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < n; ++i) {
    res[i] = residence_time(ens, ens.traj[i], x1, x2);
    const double xf = ens.x_at(ens.traj[i], ens.n_samples() - 1);
    if (xf >= x1 && xf <= x2) ++inside;
  }
  const MeanSe ms = mean_and_se(res);
  return {ms.mean, ms.se, (double)inside / (double)n};
}

FractionStats transmission_fraction(const TrajectoryEnsemble& ens, double x) {
  const std::size_t n = ens.traj.size();
  std::size_t beyond = 0;
  for (const auto& tr : ens.traj) {
    if (ens.x_at(tr, ens.n_samples() - 1) > x) ++beyond;
  }
  const double p = (double)beyond / (double)n;
  return {p, std::sqrt(p * (1.0 - p) / (double)n)};
}

namespace {

struct SplitIntegrals {
  double p = 0.0;
  double i_min = 0.0;
  double i_max = 0.0;
};

// Integrates the clipped Q-profiles for one mode/velocity at a fixed
// stationary value, growing the horizon until the tail is negligible.
SplitIntegrals split_integrals(analytics::ThermalMode mode, const PhysicalParams& params,
                               const Potential& pot, const analytics::PacketSetup& setup,
                               double x1, double x2) {
  SplitIntegrals out;
  out.p = analytics::stationary_transmission(mode, params, pot, setup);

  const DimensionlessUnits units{setup.sigma0, params.mass, params.hbar};
  const double dt = 1e-3 * units.time_unit();
  double horizon = 400.0 * units.time_unit();
  if (params.friction > 0.0) horizon = std::max(horizon, 40.0 / params.friction);

  for (int attempt = 0; attempt < 6; ++attempt) {
    const WidthFunction width(integrate_pinney(params, pot, setup.sigma0, dt, horizon));
    auto clipped = [&](double t, double* f_min, double* f_max) {
      const double q1 = analytics::q_beyond(mode, params, pot, setup, width, x1, t);
      const double q2 = analytics::q_beyond(mode, params, pot, setup, width, x2, t);
      *f_min = std::min(q1, out.p) - std::min(q2, out.p);
      *f_max = std::max(q1, out.p) - std::max(q2, out.p);
    };
    // One composite-Simpson pass feeds both clipped profiles; a uniform grid
    // sidesteps the piecewise smoothness of the interpolated width.
    auto simpson = [&](double a, double b, int n, double* i_min, double* i_max) {
      const double h = (b - a) / n;
      double acc_min = 0.0, acc_max = 0.0, fmin = 0.0, fmax = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        clipped(a + h * i, &fmin, &fmax);
        acc_min += w * fmin;
        acc_max += w * fmax;
      }
      *i_min = acc_min * h / 3.0;
      *i_max = acc_max * h / 3.0;
    };
    double head_min = 0.0, head_max = 0.0, tail_min = 0.0, tail_max = 0.0;
    simpson(0.0, 0.5 * horizon, 1 << 15, &head_min, &head_max);
    simpson(0.5 * horizon, horizon, 1 << 15, &tail_min, &tail_max);
    const double tot_min = head_min + tail_min;
    const double tot_max = head_max + tail_max;
    const bool min_ok = std::abs(tail_min) <= std::max(1e-6 * std::abs(tot_min), 1e-250);
    const bool max_ok = std::abs(tail_max) <= std::max(1e-6 * std::abs(tot_max), 1e-250);
    double end_min = 0.0, end_max = 0.0;
    clipped(horizon, &end_min, &end_max);
    if (min_ok && max_ok && std::abs(end_min) < 1e-12 && std::abs(end_max) < 1e-12) {
      out.i_min = tot_min;
      out.i_max = tot_max;
      return out;
    }
    horizon *= 2.0;
  }
  throw numerical_error("split_transit_times: integrand failed the decay test");
}

}  // namespace

TransitSplit split_transit_times(analytics::ThermalMode mode, const PhysicalParams& params,
                                 const Potential& pot, const analytics::PacketSetup& setup,
                                 double x1, double x2) {
  if (x1 > x2) throw std::invalid_argument("split_transit_times: x1 must be <= x2");
  constexpr double kDegenerate = 1e-12;

  if (mode == analytics::ThermalMode::thermal_dissipative &&
      params.kb_temp_sys > 0.0) {
    // Maxwell-Boltzmann average of the per-velocity splits.  Saturated nodes
    // (P in {0,1} to machine precision) carry weights below ~1e-40 for the
    // supported parameter ranges and are skipped.
    const GaussHermite& gh = gauss_hermite_64();
    const double scale = std::sqrt(2.0 * params.kb_temp_sys / params.mass);
    const double inv_sqrt_pi = 0.5641895835477562869480794515607726;
    double p_acc = 0.0, tr_acc = 0.0, ref_acc = 0.0;
    bool tr_any = false, ref_any = false;
    for (std::size_t i = 0; i < gh.node.size(); ++i) {
      analytics::PacketSetup node = setup;
      node.v0 = setup.v0 + scale * gh.node[i];
      const double w = gh.weight[i] * inv_sqrt_pi;
      const SplitIntegrals si =
          split_integrals(analytics::ThermalMode::pure, params, pot, node, x1, x2);
      p_acc += w * si.p;
      if (si.p > kDegenerate) {
        tr_acc += w * si.i_min / si.p;
        tr_any = true;
      }
      if (1.0 - si.p > kDegenerate) {
        ref_acc += w * si.i_max / (1.0 - si.p);
        ref_any = true;
      }
    }
    return {p_acc, tr_any ? tr_acc : kNan, ref_any ? ref_acc : kNan};
  }
  if (mode == analytics::ThermalMode::thermal_dissipative) {
    mode = analytics::ThermalMode::pure;  // T_s = 0 is the delta limit at v0
  }

  const SplitIntegrals si = split_integrals(mode, params, pot, setup, x1, x2);
  TransitSplit out;
  out.p_tr = si.p;
  out.tau_tr = si.p > kDegenerate ? si.i_min / si.p : kNan;
  out.tau_ref = 1.0 - si.p > kDegenerate ? si.i_max / (1.0 - si.p) : kNan;
  return out;
}

TransitSplitMc split_transit_times_mc(const TrajectoryEnsemble& ens, double x1, double x2,
                                      double classify_at) {
  const std::size_t n = ens.traj.size();
  std::vector<double> res_tr, res_ref, res_all;
  res_all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = residence_time(ens, ens.traj[i], x1, x2);
    res_all.push_back(r);
    if (ens.x_at(ens.traj[i], ens.n_samples() - 1) > classify_at) {
      res_tr.push_back(r);
    } else {
      res_ref.push_back(r);
    }
  }
  TransitSplitMc out;
  const double p = (double)res_tr.size() / (double)n;
  out.p_tr = p;
  out.p_se = std::sqrt(p * (1.0 - p) / (double)n);
  const MeanSe tr = mean_and_se(res_tr);
  const MeanSe ref = mean_and_se(res_ref);
  const MeanSe all = mean_and_se(res_all);
  out.tau_tr = tr.mean;
  out.tau_tr_se = tr.se;
  out.tau_ref = ref.mean;
  out.tau_ref_se = ref.se;
  out.tau_dwell = all.mean;
  out.tau_dwell_se = all.se;
  return out;
}

double ArrivalDistribution::current(double v0, double t) const {
  const CenterState c = analytic_center(params_, pot_, setup_.q0, v0, t);
  const double s = width_->sigma(t);
  const double sd = width_->sigma_dot(t);
  const double d = x_d_ - c.q;
  const double rho = std::exp(-d * d / (2.0 * s * s)) / (kSqrt2Pi * s);
  return rho * (c.v + sd / s * d);
}

ArrivalDistribution::ArrivalDistribution(const PhysicalParams& params, const Potential& pot,
                                         const analytics::PacketSetup& setup, double x_d,
                                         bool thermal)
    : params_(params), pot_(pot), setup_(setup), x_d_(x_d) {
  const double inv_sqrt_pi = 0.5641895835477562869480794515607726;
  if (thermal && params.kb_temp_sys > 0.0) {
    const GaussHermite& gh = gauss_hermite_64();
    const double scale = std::sqrt(2.0 * params.kb_temp_sys / params.mass);
    nodes_.reserve(gh.node.size());
    for (std::size_t i = 0; i < gh.node.size(); ++i) {
      nodes_.push_back({gh.weight[i] * inv_sqrt_pi, setup.v0 + scale * gh.node[i], 0.0});
    }
  } else {
    nodes_.push_back({1.0, setup.v0, 0.0});
  }

  const DimensionlessUnits units{setup.sigma0, params.mass, params.hbar};
  const double dt = 1e-3 * units.time_unit();
  double horizon = 100.0 * units.time_unit();

  double prev_mean = kNan;
  for (int attempt = 0; attempt < 7; ++attempt) {
    width_.emplace(integrate_pinney(params_, pot_, setup_.sigma0, dt, horizon));
    double mean_acc = 0.0;
    double norm_total = 0.0;
    // Composite Simpson on a uniform grid: the interpolated width makes the
    // integrand only piecewise smooth, which blind adaptive refinement would
    // chase cell by cell.
    const int n_iv = 16384;
    const double h = horizon / n_iv;
    for (Node& node : nodes_) {
      double norm = 0.0, first = 0.0;
      for (int i = 0; i <= n_iv; ++i) {
        const double t = h * i;
        const double w = (i == 0 || i == n_iv) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double a = std::abs(current(node.v0, t));
        norm += w * a;
        first += w * t * a;
      }
      norm *= h / 3.0;
      first *= h / 3.0;
      if (norm < 1e-280) {
        node.inv_norm = 0.0;  // weight ~ e^{-100}; dropped mass is negligible
        continue;
      }
      node.inv_norm = 1.0 / norm;
      norm_total += node.weight * norm;
      mean_acc += node.weight * first / norm;
    }
    if (norm_total < 1e-30) {
      throw numerical_error("arrival_distribution: packet never reaches the detector");
    }
    horizon_ = horizon;
    mean_ = mean_acc;
    if (std::isfinite(prev_mean) &&
        std::abs(mean_ - prev_mean) <= 1e-6 * (1.0 + std::abs(mean_))) {
      return;
    }
    prev_mean = mean_;
    horizon *= 2.0;
  }
  throw numerical_error("arrival_distribution: mean arrival did not converge");
}

double ArrivalDistribution::density(double t) const {
  double acc = 0.0;
  for (const Node& node : nodes_) {
    if (node.inv_norm == 0.0) continue;
    acc += node.weight * std::abs(current(node.v0, t)) * node.inv_norm;
  }
  return acc;
}

ObservableSeries ArrivalDistribution::sample(std::size_t n_points) const {
  if (n_points < 2) throw std::invalid_argument("ArrivalDistribution::sample: need >= 2 points");
  ObservableSeries out;
  out.name = "arrival_density";
  out.axis.resize(n_points);
  out.value.resize(n_points);
  out.std_err.assign(n_points, 0.0);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = horizon_ * (double)i / (double)(n_points - 1);
    out.axis[i] = t;
    out.value[i] = density(t);
  }
  return out;
}

}  // namespace slb::observables
