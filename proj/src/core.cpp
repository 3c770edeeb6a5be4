#include "core.hpp"

#include <cmath>

namespace slb {

double Potential::value(double x, double mass) const {
  switch (kind_) {
    case PotentialKind::Free:
      return 0.0;
    case PotentialKind::Linear:
      return mass * g_ * x;
    case PotentialKind::ParabolicRepeller:
      return -0.5 * mass * omega_ * omega_ * x * x;
    case PotentialKind::Harmonic:
      return 0.5 * mass * omega_ * omega_ * x * x;
  }
  return 0.0;
}

double Potential::slope_over_mass(double x) const {
  switch (kind_) {
    case PotentialKind::Free:
      return 0.0;
    case PotentialKind::Linear:
      return g_;
    case PotentialKind::ParabolicRepeller:
      return -omega_ * omega_ * x;
    case PotentialKind::Harmonic:
      return omega_ * omega_ * x;
  }
  return 0.0;
}

double Potential::curvature_over_mass() const {
  switch (kind_) {
    case PotentialKind::Free:
    case PotentialKind::Linear:
      return 0.0;
    case PotentialKind::ParabolicRepeller:
      return -omega_ * omega_;
    case PotentialKind::Harmonic:
      return omega_ * omega_;
  }
  return 0.0;
}

double omega_eff_sq(const PhysicalParams& params, const Potential& pot) {
  const double g = params.friction;
  return 0.25 * g * g - pot.curvature_over_mass();
}

double omega_eff(const PhysicalParams& params, const Potential& pot) {
  return std::sqrt(std::abs(omega_eff_sq(params, pot)));
}

namespace {

bool barrier_experiment(Preset p) {
  return p == Preset::Transmission || p == Preset::Dwell || p == Preset::RepellerArrival;
}

}  // namespace

ValidationReport validate_config(const ExperimentConfig& cfg) {
  ValidationReport rep;
  auto bad = [&rep](const std::string& msg) { rep.errors.push_back(msg); };

  if (!(cfg.params.mass > 0.0)) bad("mass must be > 0");
  if (!(cfg.params.hbar > 0.0)) bad("hbar must be > 0");
  if (cfg.params.friction < 0.0) bad("gamma must be >= 0");
  if (cfg.params.kb_temp < 0.0) bad("kt must be >= 0");
  if (cfg.params.kb_temp_sys < 0.0) bad("kts must be >= 0");
  if (cfg.omega < 0.0) bad("omega must be >= 0");
  if (!(cfg.sigma0 > 0.0)) bad("sigma0 must be > 0");
  if (cfg.n_traj < 1) bad("n_traj must be >= 1");
  if (!(cfg.dt > 0.0)) bad("dt must be > 0");
  if (!(cfg.t_end > 0.0)) bad("t_end must be > 0");
  if (cfg.dt > 0.0 && cfg.t_end > 0.0 && cfg.t_end < cfg.dt)
    bad("t_end must be >= dt");
  if (cfg.interval_x1 > cfg.interval_x2) bad("x1 must be <= x2");

  if (barrier_experiment(cfg.preset) && rep.errors.empty()) {
    if (!(cfg.q0 + 3.0 * cfg.sigma0 < 0.0)) {
      rep.warnings.push_back(
          "packet is not well localized left of the barrier (q0 + 3 sigma0 >= 0)");
    }
  }
  return rep;
}

}  // namespace slb
