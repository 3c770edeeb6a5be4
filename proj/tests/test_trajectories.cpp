#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "trajectories.hpp"

using namespace slb;

namespace {

EnsembleOptions quiet_opts() {
  EnsembleOptions o;
  o.n_threads = 2;
  return o;
}

}  // namespace

TEST_CASE("a particle starting at the packet center rides the center") {
  PhysicalParams p;
  p.friction = 0.2;
  p.kb_temp = 0.4;
  p.kb_temp_sys = 0.4;
  EnsembleOptions o = quiet_opts();
  o.fixed_x0 = 3.0;  // = q0
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 3.0, 0.0, 1.0, 4, 21, 1e-3, 2.0, o);
  for (const auto& tr : ens.traj) {
    for (std::size_t j = 0; j < ens.n_samples(); ++j) {
      CHECK(ens.x_at(tr, j) == ens.center_q_at(tr, j));
    }
  }
}

TEST_CASE("classical free mode translates rigidly (constant width)") {
  PhysicalParams p;
  p.friction = 0.2;
  p.kb_temp = 0.3;
  p.kb_temp_sys = 0.3;
  EnsembleOptions o = quiet_opts();
  o.classical_width = true;
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 6, 5, 1e-3, 3.0, o);
  for (const auto& tr : ens.traj) {
    for (std::size_t j = 0; j < ens.n_samples(); ++j) {
      CHECK(ens.x_at(tr, j) - tr.x0 ==
            doctest::Approx(ens.center_q_at(tr, j) - ens.q0).epsilon(1e-13));
    }
  }
}

TEST_CASE("unit offset is stretched by the width ratio") {
  PhysicalParams p;  // gamma = 0, T = 0
  EnsembleOptions o = quiet_opts();
  o.fixed_x0 = 1.0;
  o.fixed_v0 = 0.0;
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 1, 1, 1e-3, 2.0, o);
  const std::size_t last = ens.n_samples() - 1;
  CHECK(ens.x_at(ens.traj[0], last) - ens.center_q_at(ens.traj[0], last) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("trajectories sharing a realization never cross") {
  struct Case {
    Potential pot;
    double gamma, kt;
  };
  const Case cases[] = {
      {Potential::free_particle(), 0.3, 0.8},
      {Potential::linear(0.1), 0.2, 0.5},
      {Potential::parabolic_repeller(0.2), 0.1, 1.0},
  };
  for (const Case& c : cases) {
    PhysicalParams p;
    p.friction = c.gamma;
    p.kb_temp = c.kt;
    p.kb_temp_sys = c.kt;
    EnsembleOptions oa = quiet_opts();
    oa.fixed_x0 = -0.7;
    EnsembleOptions ob = quiet_opts();
    ob.fixed_x0 = 0.4;
    // same seed, same single stream index: identical velocity and noise draws
    const TrajectoryEnsemble a =
        build_ensemble(p, c.pot, 0.0, 0.0, 1.0, 1, 99, 1e-3, 4.0, oa);
    const TrajectoryEnsemble b =
        build_ensemble(p, c.pot, 0.0, 0.0, 1.0, 1, 99, 1e-3, 4.0, ob);
    REQUIRE(a.traj[0].v0 == b.traj[0].v0);
    for (std::size_t j = 0; j < a.n_samples(); ++j) {
      CHECK(a.x_at(a.traj[0], j) < b.x_at(b.traj[0], j));
    }
  }
}

TEST_CASE("free dynamics is translation equivariant") {
  PhysicalParams p;
  p.friction = 0.2;
  p.kb_temp = 0.5;
  p.kb_temp_sys = 0.5;
  const double shift = 2.5;
  const TrajectoryEnsemble a = build_ensemble(p, Potential::free_particle(), 0.0, 0.0,
                                              1.0, 8, 123, 1e-3, 3.0, quiet_opts());
  const TrajectoryEnsemble b = build_ensemble(p, Potential::free_particle(), shift, 0.0,
                                              1.0, 8, 123, 1e-3, 3.0, quiet_opts());
  for (std::size_t i = 0; i < a.traj.size(); ++i) {
    CHECK(b.traj[i].x0 == doctest::Approx(a.traj[i].x0 + shift).epsilon(1e-12));
    for (std::size_t j = 0; j < a.n_samples(); ++j) {
      CHECK(b.x_at(b.traj[i], j) ==
            doctest::Approx(a.x_at(a.traj[i], j) + shift).epsilon(1e-10));
    }
  }
}

TEST_CASE("particles ahead of the center accelerate away from it") {
  PhysicalParams p;  // noiseless, frictionless
  EnsembleOptions o = quiet_opts();
  o.fixed_x0 = 1.0;
  o.fixed_v0 = 0.0;
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 1, 3, 1e-3, 1.0, o);
  // second central difference of x(t) at a few interior samples
  const double h = ens.sample_dt();
  for (std::size_t j : {5ul, 50ul, 200ul}) {
    const double acc = (ens.x_at(ens.traj[0], j + 1) - 2.0 * ens.x_at(ens.traj[0], j) +
                        ens.x_at(ens.traj[0], j - 1)) /
                       (h * h);
    CHECK(acc > 0.0);
  }
}

TEST_CASE("all randomness off reproduces the deterministic path") {
  PhysicalParams p;
  p.friction = 0.15;
  EnsembleOptions o = quiet_opts();
  o.fixed_x0 = 10.0;  // = q0: rides the center
  const TrajectoryEnsemble ens =
      build_ensemble(p, Potential::linear(0.05), 10.0, 0.0, 1.0, 1, 9, 1e-3, 5.0, o);
  CHECK(ens.shared_center);
  for (std::size_t j = 0; j < ens.n_samples(); ++j) {
    const CenterState ref =
        analytic_center(p, Potential::linear(0.05), 10.0, 0.0, ens.time[j]);
    CHECK(ens.x_at(ens.traj[0], j) == doctest::Approx(ref.q).epsilon(1e-8));
  }
}

TEST_CASE("ensemble mean follows the damped drift at fixed initial velocity") {
  PhysicalParams p;
  p.friction = 0.2;
  p.kb_temp = 0.5;
  p.kb_temp_sys = 0.0;  // velocity layer off: v0 base only
  const int n = 4000;
  const TrajectoryEnsemble ens = build_ensemble(p, Potential::free_particle(), 0.0, 1.0,
                                                1.0, n, 2718, 1e-3, 5.0, quiet_opts());
  for (std::size_t j : {ens.n_samples() / 2, ens.n_samples() - 1}) {
    double sum = 0, sum2 = 0;
    for (const auto& tr : ens.traj) {
      const double x = ens.x_at(tr, j);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double ref =
        analytic_center(p, Potential::free_particle(), 0.0, 1.0, ens.time[j]).q;
    CHECK(std::abs(mean - ref) < 3.0 * se);
  }
}

TEST_CASE("double-averaged center of the free packet stays at the origin") {
  PhysicalParams p;
  p.friction = 0.2;
  p.kb_temp = 0.5;
  p.kb_temp_sys = 0.5;
  const int n = 4000;
  const TrajectoryEnsemble ens = build_ensemble(p, Potential::free_particle(), 0.0, 0.0,
                                                1.0, n, 31415, 1e-3, 5.0, quiet_opts());
  const std::size_t j = ens.n_samples() - 1;
  double sum = 0, sum2 = 0;
  for (const auto& tr : ens.traj) {
    const double q = ens.center_q_at(tr, j);
    sum += q;
    sum2 += q * q;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean) < 3.0 * se);
}

TEST_CASE("thread count does not change the ensemble") {
  PhysicalParams p;
  p.friction = 0.3;
  p.kb_temp = 0.7;
  p.kb_temp_sys = 0.7;
  EnsembleOptions o1 = quiet_opts();
  o1.n_threads = 1;
  EnsembleOptions o2 = quiet_opts();
  o2.n_threads = 2;
  const TrajectoryEnsemble a =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 17, 5150, 1e-3, 2.0, o1);
  const TrajectoryEnsemble b =
      build_ensemble(p, Potential::free_particle(), 0.0, 0.0, 1.0, 17, 5150, 1e-3, 2.0, o2);
  for (std::size_t i = 0; i < a.traj.size(); ++i) {
    CHECK(a.traj[i].x0 == b.traj[i].x0);
    CHECK(a.traj[i].v0 == b.traj[i].v0);
    for (std::size_t j = 0; j < a.n_samples(); ++j) {
      CHECK(a.traj[i].q[j] == b.traj[i].q[j]);
    }
  }
}

TEST_CASE("integrator failures carry the trajectory index") {
  // a packet started far up the repeller overflows well before the width does
  auto expect_trajectory_error = [](const PhysicalParams& p) {
    try {
      build_ensemble(p, Potential::parabolic_repeller(1.0), 1e30, 0.0, 1.0, 3, 1, 0.5,
                     680.0, quiet_opts());
      FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
      CHECK(std::string(e.what()).find("trajectory") != std::string::npos);
    }
  };
  PhysicalParams quiet;
  quiet.friction = 0.1;
  expect_trajectory_error(quiet);  // shared-center path
  PhysicalParams noisy = quiet;
  noisy.kb_temp = 0.1;
  noisy.kb_temp_sys = 0.1;
  expect_trajectory_error(noisy);  // per-trajectory path
}
