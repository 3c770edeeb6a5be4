#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "core.hpp"
#include "trajectories.hpp"

namespace slb::observables {

// Named series with per-point Monte-Carlo standard errors (zero for exact
// reductions).  `axis` is time unless stated otherwise.
struct ObservableSeries {
  std::string name;
  std::vector<double> axis;
  std::vector<double> value;
  std::vector<double> std_err;
  std::size_t ensemble_size = 0;
  std::uint64_t seed = 0;
};

struct MsdSeries {
  ObservableSeries msd_classical;
  ObservableSeries msd_quantum;
  ObservableSeries diff_classical;
  ObservableSeries diff_quantum;
};

// Classical MSD <<(q(t)-q(0))^2>> from the sampled centers.  The quantum MSD
// adds the width-spreading term (sigma(t)-sigma(0))^2: the remaining Born
// average is exact (the cross term has zero mean and the offset second moment
// is sigma0^2), so D_q - D_cl is the deterministic width identity on the
// ensemble.  D = MSD/2t, with D(0) = 0.
MsdSeries estimate_msd_diffusion(const TrajectoryEnsemble& ens);

// <<v(0) v(t)>> over all randomness layers using Bohmian velocities.
ObservableSeries estimate_vacf(const TrajectoryEnsemble& ens);

// Sample variance of the Bohmian positions x(t); exercises the Born layer
// directly (thermal-width cross-check).
ObservableSeries estimate_position_variance(const TrajectoryEnsemble& ens);

struct ArrivalRecord {
  std::size_t traj = 0;
  double x_d = 0.0;
  bool arrived = false;
  double t = 0.0;  // first-crossing time, sub-step interpolated
};

// First directed crossing of x_d; direction +1 upward, -1 downward, 0 either.
ArrivalRecord first_arrival(const TrajectoryEnsemble& ens, std::size_t traj, double x_d,
                            int direction);

struct ArrivalStats {
  double mean = 0.0;
  double std_err = 0.0;
  double never_fraction = 0.0;  // caller should warn above 1%
  std::size_t n_arrived = 0;
  ObservableSeries profile;  // axis: initial-position bin centers
};

// Mean arrival time over arrived trajectories plus the per-x0-bin profile
// (bins centered on q0, width 6.5 sigma0 / n_bins).
ArrivalStats mean_arrival_time(const TrajectoryEnsemble& ens, double x_d, int direction,
                               std::size_t n_bins = 13);

struct DwellStats {
  double mean = 0.0;
  double std_err = 0.0;
  double still_inside_fraction = 0.0;  // horizon warning when > 0
};

// Per-trajectory residence time in [x1, x2] with boundary-crossing
// interpolation, averaged over the ensemble.
DwellStats dwell_time_trajectory(const TrajectoryEnsemble& ens, double x1, double x2);

struct FractionStats {
  double fraction = 0.0;
  double std_err = 0.0;
};

// Fraction of trajectories ending beyond x (stationary transmission check).
FractionStats transmission_fraction(const TrajectoryEnsemble& ens, double x = 0.0);

struct TransitSplit {
  double p_tr = 0.0;
  double tau_tr = 0.0;   // NaN when the transmitted subensemble is empty
  double tau_ref = 0.0;  // NaN when the reflected subensemble is empty
};

// Transmission/reflection time split from the running Q(x, t) profiles:
//   tau_tr  = (1/P) int [min(Q(x1), P) - min(Q(x2), P)] dt
//   tau_ref = (1/(1-P)) int [max(Q(x1), P) - max(Q(x2), P)] dt
// with P the stationary transmission value.  The thermal-dissipative mode is
// the Maxwell-Boltzmann average of the per-velocity results.
TransitSplit split_transit_times(analytics::ThermalMode mode, const PhysicalParams& params,
                                 const Potential& pot, const analytics::PacketSetup& setup,
                                 double x1, double x2);

struct TransitSplitMc {
  double p_tr = 0.0, p_se = 0.0;
  double tau_tr = 0.0, tau_tr_se = 0.0;
  double tau_ref = 0.0, tau_ref_se = 0.0;
  double tau_dwell = 0.0, tau_dwell_se = 0.0;
};

// Brute-force split: classify trajectories by final side of `classify_at`,
// then average residence times per class.  tau_dwell = p tau_tr + (1-p)
// tau_ref holds exactly by construction.
TransitSplitMc split_transit_times_mc(const TrajectoryEnsemble& ens, double x1, double x2,
                                      double classify_at = 0.0);

// Arrival-time distribution at a detector from the probability current of
// the Gaussian packet, Pi(t) = |j(x_d, t)| / int |j| dt.  The thermal variant
// averages the per-velocity normalized distributions over the
// Maxwell-Boltzmann weights (Gauss-Hermite quadrature).
class ArrivalDistribution {
 public:
  ArrivalDistribution(const PhysicalParams& params, const Potential& pot,
                      const analytics::PacketSetup& setup, double x_d, bool thermal);

  double density(double t) const;
  double mean_arrival() const { return mean_; }
  double horizon() const { return horizon_; }
  ObservableSeries sample(std::size_t n_points) const;

 private:
  struct Node {
    double weight;
    double v0;
    double inv_norm;
  };

  double current(double v0, double t) const;

  PhysicalParams params_;
  Potential pot_ = Potential::free_particle();
  analytics::PacketSetup setup_;
  double x_d_;
  std::optional<WidthFunction> width_;
  std::vector<Node> nodes_;
  double horizon_ = 0.0;
  double mean_ = 0.0;
};

}  // namespace slb::observables
