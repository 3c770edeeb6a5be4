#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core.hpp"
#include "dynamics.hpp"

namespace slb {

// x(x0, t) = q(t) + (sigma(t)/sigma(0)) (x0 - q(0)); the map every ensemble
// composes from a center path and the shared width path.
inline double bohmian_position(double x0, double q_t, double sigma_t, double sigma0,
                               double q0) {
  return q_t + (sigma_t / sigma0) * (x0 - q0);
}

inline double bohmian_velocity(double x0, double v_t, double sigma_dot_t, double sigma0,
                               double q0) {
  return v_t + (sigma_dot_t / sigma0) * (x0 - q0);
}

struct EnsembleOptions {
  std::size_t max_samples = 2000;   // stored samples per trajectory
  bool classical_width = false;     // drop the quantum width term
  LangevinScheme scheme = LangevinScheme::vanden_eijnden_ciccotti;
  std::optional<double> fixed_x0;   // freeze the Born layer
  std::optional<double> fixed_v0;   // freeze the Maxwell-Boltzmann layer
  unsigned n_threads = 0;           // 0: SLB_THREADS env var, then hardware
};

// N stochastic trajectories sampled on a common decimated grid.  The width is
// noise-independent, so it is integrated once and shared read-only.
struct TrajectoryEnsemble {
  PhysicalParams params;
  Potential potential = Potential::free_particle();
  double q0 = 0.0;
  double sigma0 = 1.0;
  std::uint64_t seed = 0;
  double dt = 0.0;           // integration step
  std::size_t stride = 1;    // sample spacing in integration steps
  bool classical_width = false;
  std::vector<double> time;  // sample times
  std::vector<double> sigma;
  std::vector<double> sigma_dot;

  struct Trajectory {
    double x0 = 0.0;          // Born-sampled initial position
    double v0 = 0.0;          // Maxwell-Boltzmann initial packet velocity
    std::uint64_t stream = 0; // bath substream index
    std::vector<double> q;    // empty when the center path is shared
    std::vector<double> v;
  };
  std::vector<Trajectory> traj;

  // Zero-noise ensembles with a common initial velocity share one center.
  bool shared_center = false;
  std::vector<double> center_q;
  std::vector<double> center_v;

  std::size_t n_samples() const { return time.size(); }
  double sample_dt() const { return dt * (double)stride; }

  double center_q_at(const Trajectory& tr, std::size_t i) const {
    return shared_center ? center_q[i] : tr.q[i];
  }
  double center_v_at(const Trajectory& tr, std::size_t i) const {
    return shared_center ? center_v[i] : tr.v[i];
  }
  double x_at(const Trajectory& tr, std::size_t i) const {
    return bohmian_position(tr.x0, center_q_at(tr, i), sigma[i], sigma0, q0);
  }
  double v_at(const Trajectory& tr, std::size_t i) const {
    return bohmian_velocity(tr.x0, center_v_at(tr, i), sigma_dot[i], sigma0, q0);
  }
};

// Draws (x0, v0, noise substream) per trajectory, integrates the shared width
// once and the stochastic center per trajectory.  Per-trajectory velocities
// are v0_base plus a Maxwell-Boltzmann draw (exactly v0_base at T_s = 0, the
// delta-function limit).  Evolution is parallel over trajectories; results
// land in index order, so output does not depend on scheduling.
TrajectoryEnsemble build_ensemble(const PhysicalParams& params, const Potential& pot,
                                  double q0, double v0_base, double sigma0,
                                  std::size_t n, std::uint64_t seed, double dt,
                                  double t_end, const EnsembleOptions& opts = {});

}  // namespace slb
