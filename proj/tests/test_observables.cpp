#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "observables.hpp"
#include "quadrature.hpp"

using namespace slb;
using namespace slb::observables;
using analytics::PacketSetup;
using analytics::ThermalMode;

namespace {

PhysicalParams params(double gamma, double kt, double kts) {
  PhysicalParams p;
  p.friction = gamma;
  p.kb_temp = kt;
  p.kb_temp_sys = kts;
  return p;
}

}  // namespace

TEST_CASE("msd estimator: width identity is exact and T = 0 is silent") {
  const PhysicalParams p = params(0.2, 0.5, 0.5);
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 400, 11, 2e-3, 20.0);
  const MsdSeries s = estimate_msd_diffusion(ens);
  for (std::size_t j = 1; j < s.msd_classical.axis.size(); ++j) {
    const double dw = ens.sigma[j] - ens.sigma0;
    const double t = s.msd_classical.axis[j];
    CHECK(s.diff_quantum.value[j] - s.diff_classical.value[j] ==
          doctest::Approx(dw * dw / (2.0 * t)).epsilon(1e-13));
    CHECK(s.diff_quantum.value[j] >= s.diff_classical.value[j]);
    CHECK(s.msd_classical.std_err[j] > 0.0);
  }
  // all randomness off: classical MSD identically zero
  const TrajectoryEnsemble quiet =
      build_ensemble(params(0.2, 0.0, 0.0), Potential::free_particle(), 0.0, 0.0, 1.0,
                     50, 12, 2e-3, 5.0);
  const MsdSeries sq = estimate_msd_diffusion(quiet);
  for (double v : sq.diff_classical.value) CHECK(v == 0.0);
}

TEST_CASE("msd estimator matches the closed form within 3 standard errors") {
  const PhysicalParams p = params(0.2, 0.5, 0.5);
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 1500, 2317, 2e-3, 40.0);
  const MsdSeries s = estimate_msd_diffusion(ens);
  for (std::size_t j : {s.msd_classical.axis.size() / 2, s.msd_classical.axis.size() - 1}) {
    const double t = s.msd_classical.axis[j];
    const auto ref = analytics::msd_and_diffusion(p, ens.sigma[j], 1.0, t);
    CHECK(std::abs(s.msd_classical.value[j] - ref.msd_classical) <
          3.0 * s.msd_classical.std_err[j]);
  }
}

TEST_CASE("position-variance estimator reproduces the thermal width") {
  // frictionless, noise-free thermal packet: variance = thermal width squared
  const PhysicalParams p = params(0.0, 0.0, 0.75);
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 3000, 99, 1e-3, 5.0);
  const ObservableSeries var = estimate_position_variance(ens);
  for (std::size_t j : {var.axis.size() / 2, var.axis.size() - 1}) {
    const double ref =
        analytics::thermal_width(Potential::free_particle(), p, 1.0, var.axis[j]);
    CHECK(std::abs(var.value[j] - ref * ref) < 3.0 * var.std_err[j]);
  }
}

TEST_CASE("vacf estimator: equipartition, half-life and diffusion integral") {
  const PhysicalParams p = params(0.2, 0.5, 0.5);
  const int n = 3000;
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, n, 421, 2e-3, 40.0);
  const ObservableSeries c = estimate_vacf(ens);
  CHECK(std::abs(c.value[0] - 0.5) < 3.0 * c.std_err[0]);

  // value at the predicted half-life within 3 SE of half the initial value
  const double t_half = std::log(2.0) / 0.2;
  std::size_t j_half = 0;
  while (c.axis[j_half] < t_half) ++j_half;
  CHECK(std::abs(c.value[j_half] - 0.25) < 3.0 * (c.std_err[j_half] + c.std_err[0]));

  // per-trajectory jackknife of the time integral against kT/(m gamma)
  std::vector<double> integrals(ens.traj.size(), 0.0);
  const double h = ens.sample_dt();
  for (std::size_t i = 0; i < ens.traj.size(); ++i) {
    const auto& tr = ens.traj[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < ens.n_samples(); ++j) {
      const double w = (j == 0 || j == ens.n_samples() - 1) ? 0.5 : 1.0;
      acc += w * ens.v_at(tr, 0) * ens.v_at(tr, j);
    }
    integrals[i] = acc * h;
  }
  double mean = 0;
  for (double v : integrals) mean += v;
  mean /= (double)n;
  double ss = 0;
  for (double v : integrals) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / ((double)n * (double)(n - 1)));
  const double expected = 2.5 * (1.0 - std::exp(-0.2 * 40.0));  // truncated horizon
  CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("standard error halves when the ensemble quadruples") {
  const PhysicalParams p = params(0.2, 0.5, 0.5);
  const TrajectoryEnsemble small =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 400, 1, 2e-3, 10.0);
  const TrajectoryEnsemble big =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 1600, 2, 2e-3, 10.0);
  const MsdSeries a = estimate_msd_diffusion(small);
  const MsdSeries b = estimate_msd_diffusion(big);
  const std::size_t j = a.msd_classical.axis.size() - 1;
  const double ratio = a.msd_classical.std_err[j] / b.msd_classical.std_err[j];
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);
}

TEST_CASE("first arrival: deterministic fall, refusal to cross, ordering") {
  const double gamma = 0.2, g = 0.05;
  const PhysicalParams p = params(gamma, 0.0, 0.0);
  EnsembleOptions o;
  o.fixed_x0 = 10.0;
  const TrajectoryEnsemble one =
      build_ensemble(p, Potential::linear(g), 10.0, 0.0, 1.0, 1, 7, 5e-3, 60.0, o);
  const ArrivalRecord rec = first_arrival(one, 0, 0.0, -1);
  REQUIRE(rec.arrived);
  // oracle: bisection on the closed-form center
  auto f = [&](double t) {
    return 10.0 - g * (gamma * t - 1.0 + std::exp(-gamma * t)) / (gamma * gamma);
  };
  double lo = 0, hi = 100;
  for (int i = 0; i < 200; ++i) (f(0.5 * (lo + hi)) > 0 ? lo : hi) = 0.5 * (lo + hi);
  CHECK(rec.t == doctest::Approx(0.5 * (lo + hi)).epsilon(2e-4));
  CHECK(rec.t == doctest::Approx(45.0).epsilon(1e-3));

  // moving away from the detector: never arrives
  CHECK(!first_arrival(one, 0, 20.0, +1).arrived);
  CHECK(!first_arrival(one, 0, 10.0, -1).arrived);  // starts at x_d moving away? down
  // (starting exactly at x_d counts only a genuine recrossing)

  // arrival time increases with the starting height at T = 0; the horizon
  // covers the width-stretched upper tail
  const TrajectoryEnsemble born =
      build_ensemble(p, Potential::linear(g), 10.0, 0.0, 1.0, 2000, 8, 5e-3, 160.0);
  const ArrivalStats stats = mean_arrival_time(born, 0.0, -1, 13);
  REQUIRE(stats.profile.axis.size() >= 10);
  for (std::size_t b = 1; b < stats.profile.axis.size(); ++b) {
    CHECK(stats.profile.value[b] > stats.profile.value[b - 1]);
  }
  CHECK(stats.never_fraction <= 0.001);
}

TEST_CASE("quantum and classical arrival agree for the particle at the center") {
  const PhysicalParams p = params(0.2, 0.1, 0.1);
  const double g = 0.05;
  EnsembleOptions oq, oc;
  oc.classical_width = true;
  const int n = 2000;
  const TrajectoryEnsemble q =
      build_ensemble(p, Potential::linear(g), 10.0, 0.0, 1.0, n, 55, 5e-3, 200.0, oq);
  const TrajectoryEnsemble c =
      build_ensemble(p, Potential::linear(g), 10.0, 0.0, 1.0, n, 55, 5e-3, 200.0, oc);
  const ArrivalStats sq = mean_arrival_time(q, 0.0, -1, 13);
  const ArrivalStats sc = mean_arrival_time(c, 0.0, -1, 13);
  // center bin sits at q0 for both
  const std::size_t mid_q = sq.profile.axis.size() / 2;
  const std::size_t mid_c = sc.profile.axis.size() / 2;
  CHECK(sq.profile.axis[mid_q] == doctest::Approx(10.0));
  CHECK(std::abs(sq.profile.value[mid_q] - sc.profile.value[mid_c]) <
        3.0 * std::sqrt(sq.profile.std_err[mid_q] * sq.profile.std_err[mid_q] +
                        sc.profile.std_err[mid_c] * sc.profile.std_err[mid_c]) + 1e-9);
}

TEST_CASE("trajectory dwell: empty interval, partition identity, horizon flag") {
  const PhysicalParams p = params(0.1, 0.3, 0.3);
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 300, 17, 2e-3, 5.0);
  CHECK(dwell_time_trajectory(ens, 50.0, 60.0).mean == 0.0);
  // everything still inside a huge interval at the horizon
  CHECK(dwell_time_trajectory(ens, -1e6, 1e6).still_inside_fraction == 1.0);

  const TransitSplitMc split = split_transit_times_mc(ens, -0.5, 0.5, 0.0);
  CHECK(split.tau_dwell ==
        doctest::Approx(split.p_tr * split.tau_tr + (1.0 - split.p_tr) * split.tau_ref)
            .epsilon(1e-12));
}

TEST_CASE("trajectory dwell matches the quiet-barrier value") {
  // reduced units: gamma_bar = 0.1, omega_bar = 0.1, T = 0, packet at -20
  const PhysicalParams p = params(0.05, 0.0, 0.0);
  const Potential pot = Potential::parabolic_repeller(0.05);
  EnsembleOptions o;
  o.max_samples = 5000;
  const TrajectoryEnsemble ens =
      build_ensemble(p, pot, -20.0, 0.0, 1.0, 20000, 6021, 0.01, 600.0, o);
  const DwellStats d = dwell_time_trajectory(ens, -1.0, 1.0);
  const double expected = 2.0 * 0.0194;  // natural units
  const double tol = std::max(3.0 * d.std_err, 0.05 * expected);
  CHECK(std::abs(d.mean - expected) < tol);
  CHECK(d.still_inside_fraction == 0.0);
}

TEST_CASE("degenerate split: everything transmits") {
  PhysicalParams p = params(0.0, 0.0, 0.0);
  EnsembleOptions o;
  o.fixed_v0 = 5.0;
  const TrajectoryEnsemble ens = build_ensemble(p, Potential::parabolic_repeller(0.1),
                                                10.0, 5.0, 1.0, 64, 3, 1e-3, 10.0, o);
  const TransitSplitMc s = split_transit_times_mc(ens, -1.0, 1.0, 0.0);
  CHECK(s.p_tr == 1.0);
  CHECK(std::isnan(s.tau_ref));
  CHECK(s.tau_tr == doctest::Approx(s.tau_dwell));
}

TEST_CASE("transmitted fraction matches the stationary erfc value") {
  // reduced units: gamma_bar = 0.2, omega_bar = 0.2, kt_bar = 5, q0_bar = -10
  const PhysicalParams p = params(0.1, 1.25, 1.25);
  const Potential pot = Potential::parabolic_repeller(0.1);
  const PacketSetup setup{-10.0, 0.0, 1.0};
  const double p_inf =
      analytics::stationary_transmission(ThermalMode::stochastic, p, pot, setup);
  const int n = 1500;
  const TrajectoryEnsemble ens =
      build_ensemble(p, pot, -10.0, 0.0, 1.0, n, 2097, 5e-3, 300.0);
  const FractionStats f = transmission_fraction(ens, 0.0);
  CHECK(std::abs(f.fraction - p_inf) < 3.0 * f.std_err + 0.005);
}

TEST_CASE("analytic split limits and thermal average") {
  const Potential pot = Potential::parabolic_repeller(0.1);
  const PacketSetup setup{-5.0, 0.0, 1.0};
  const PhysicalParams p = params(0.05, 0.0, 0.0);
  const TransitSplit s =
      split_transit_times(ThermalMode::pure, p, pot, setup, -1.0, 1.0);
  const double tau_d =
      analytics::dwell_time(ThermalMode::pure, p, pot, setup, -1.0, 1.0);
  CHECK(s.p_tr * s.tau_tr + (1.0 - s.p_tr) * s.tau_ref ==
        doctest::Approx(tau_d).epsilon(1e-6));

  // fast packet: transmission certain, transit time equals the dwell time
  PacketSetup fast = setup;
  fast.v0 = 5.0;
  const TransitSplit sf =
      split_transit_times(ThermalMode::pure, p, pot, fast, -1.0, 1.0);
  CHECK(sf.p_tr == doctest::Approx(1.0));
  CHECK(std::isnan(sf.tau_ref));
  CHECK(sf.tau_tr ==
        doctest::Approx(analytics::dwell_time(ThermalMode::pure, p, pot, fast, -1.0, 1.0))
            .epsilon(1e-6));
  // receding packet: reflection certain
  PacketSetup away = setup;
  away.v0 = -5.0;
  const TransitSplit sa =
      split_transit_times(ThermalMode::pure, p, pot, away, -1.0, 1.0);
  CHECK(sa.p_tr == doctest::Approx(0.0));
  CHECK(std::isnan(sa.tau_tr));

  // thermal average interpolates between per-velocity splits
  const PhysicalParams pt = params(0.05, 0.0, 0.3);
  const TransitSplit st =
      split_transit_times(ThermalMode::thermal_dissipative, pt, pot, setup, -1.0, 1.0);
  CHECK(st.p_tr > s.p_tr);  // velocity spread boosts transmission
  CHECK(st.tau_tr > 0.0);
  CHECK(st.tau_ref > 0.0);
}

TEST_CASE("arrival distribution: normalization, temperature and barrier trends") {
  const Potential weak = Potential::parabolic_repeller(0.025);   // omega_bar = 0.05
  const Potential strong = Potential::parabolic_repeller(0.05);  // omega_bar = 0.1
  const PacketSetup setup{-20.0, 0.0, 1.0};
  const double x_d = 20.0;

  const ArrivalDistribution cold(params(0, 0, 0), weak, setup, x_d, false);
  const ArrivalDistribution warm(params(0, 0, 0.25), weak, setup, x_d, true);
  const ArrivalDistribution hot(params(0, 0, 1.25), weak, setup, x_d, true);

  // density integrates to one (composite Simpson on a fine uniform grid)
  const int n_iv = 100000;
  const double h = warm.horizon() / n_iv;
  double norm = 0.0;
  for (int i = 0; i <= n_iv; ++i) {
    const double w = (i == 0 || i == n_iv) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    norm += w * warm.density(h * i);
  }
  norm *= h / 3.0;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));

  // distribution peak moves to earlier times as the temperature rises from
  // zero (thermal crests are flat, so adjacent temperatures are not compared)
  auto peak = [](const ArrivalDistribution& d) {
    double best_t = 0, best = -1;
    for (int i = 1; i < 4000; ++i) {
      const double t = d.horizon() * i / 4000.0;
      const double v = d.density(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    return best_t;
  };
  CHECK(peak(hot) < peak(cold));
  CHECK(peak(warm) < peak(cold));

  // mean arrival decreases with temperature and with the barrier strength
  CHECK(hot.mean_arrival() < warm.mean_arrival());
  CHECK(warm.mean_arrival() < cold.mean_arrival());
  const ArrivalDistribution strong_warm(params(0, 0, 0.25), strong, setup, x_d, true);
  CHECK(strong_warm.mean_arrival() < warm.mean_arrival());

  // sampled series matches the density
  const auto series = warm.sample(100);
  CHECK(series.value[50] == doctest::Approx(warm.density(series.axis[50])));
}

TEST_CASE("arrival distribution fails loudly when the packet cannot reach") {
  // harmonic confinement far from the detector: current is negligible
  CHECK_THROWS_AS(ArrivalDistribution(params(0, 0, 0), Potential::harmonic(1.0),
                                      PacketSetup{0.0, 0.0, 1.0}, 500.0, false),
                  numerical_error);
}
