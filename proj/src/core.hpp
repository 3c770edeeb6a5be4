#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slb {

// Raised when an integrator or quadrature cannot produce a finite result.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Natural units hbar = m = 1 are the working convention; the fields stay
// explicit so unit conversions remain at the boundary.
struct PhysicalParams {
  double mass = 1.0;
  double hbar = 1.0;
  double friction = 0.0;     // gamma, inverse time
  double kb_temp = 0.0;      // bath k_B T, energy
  double kb_temp_sys = 0.0;  // system k_B T_s, energy
};

enum class PotentialKind { Free, Linear, ParabolicRepeller, Harmonic };

// Quadratic-family potential: V(x) = m g x for Linear,
// -+ (1/2) m omega^2 x^2 for ParabolicRepeller/Harmonic.  A Gaussian packet
// stays exactly Gaussian only for spatially constant V'', so the kinds form
// a closed set and arbitrary potentials are rejected by construction.
class Potential {
 public:
  static Potential free_particle() { return Potential(PotentialKind::Free, 0.0, 0.0); }
  static Potential linear(double g) { return Potential(PotentialKind::Linear, g, 0.0); }
  static Potential parabolic_repeller(double omega) {
    return Potential(PotentialKind::ParabolicRepeller, 0.0, omega);
  }
  static Potential harmonic(double omega) {
    return Potential(PotentialKind::Harmonic, 0.0, omega);
  }

  PotentialKind kind() const { return kind_; }
  double linear_strength() const { return g_; }  // acceleration g
  double omega() const { return omega_; }

  double value(double x, double mass) const;
  double slope_over_mass(double x) const;  // V'(x)/m
  double curvature_over_mass() const;      // V''/m, spatially constant

 private:
  Potential(PotentialKind k, double g, double omega) : kind_(k), g_(g), omega_(omega) {}
  PotentialKind kind_;
  double g_;
  double omega_;
};

// Instantaneous packet configuration: center, width and their rates.
// sigma > 0 always; runs start from sigma_dot = 0.
struct PacketState {
  double q = 0.0;
  double qdot = 0.0;
  double sigma = 1.0;
  double sigmadot = 0.0;
  double t = 0.0;
};

// Reference scales for reduced (dimensionless) quantities, built from the
// initial width.  Temperatures are handled as energies k_B T throughout, so
// the temperature unit is reported as an energy as well.
struct DimensionlessUnits {
  double sigma0 = 1.0;
  double mass = 1.0;
  double hbar = 1.0;

  double time_unit() const { return 2.0 * mass * sigma0 * sigma0 / hbar; }
  double frequency_unit() const { return 1.0 / time_unit(); }
  double energy_unit() const { return hbar * hbar / (4.0 * mass * sigma0 * sigma0); }
  double length_unit() const { return sigma0; }

  double time_to_reduced(double t) const { return t / time_unit(); }
  double time_from_reduced(double tbar) const { return tbar * time_unit(); }
  double frequency_to_reduced(double f) const { return f / frequency_unit(); }
  double frequency_from_reduced(double fbar) const { return fbar * frequency_unit(); }
  double energy_to_reduced(double e) const { return e / energy_unit(); }
  double energy_from_reduced(double ebar) const { return ebar * energy_unit(); }
  double length_to_reduced(double x) const { return x / sigma0; }
  double length_from_reduced(double xbar) const { return xbar * sigma0; }
};

// Signed squared effective frequency Omega^2 = gamma^2/4 - V''/m.  Positive
// for the repeller and for overdamped oscillators (hyperbolic evolution),
// negative for underdamped oscillators (trigonometric evolution).
double omega_eff_sq(const PhysicalParams& params, const Potential& pot);

// sqrt(|Omega^2|); branch selection between cosh/sinh and cos/sin forms is
// handled by the evaluation kernels, so callers only ever see a real rate.
double omega_eff(const PhysicalParams& params, const Potential& pot);

enum class Preset {
  Uncertainty,
  BrownianBohmian,
  FallingArrival,
  RepellerArrival,
  Transmission,
  Dwell,
  Custom,
};

// Fully resolved run description shared by the CLI and the validators.
struct ExperimentConfig {
  Preset preset = Preset::Custom;
  PhysicalParams params;
  PotentialKind potential = PotentialKind::Free;
  double linear_g = 0.0;
  double omega = 0.0;
  double q0 = 0.0;
  double v0 = 0.0;
  double sigma0 = 1.0;
  std::size_t n_traj = 5000;
  double dt = 0.0;     // resolved by the preset before validation
  double t_end = 0.0;  // resolved by the preset before validation
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool classical_mode = false;
  std::size_t max_samples = 2000;
  double detector_x = 0.0;
  double interval_x1 = 0.0;
  double interval_x2 = 0.0;
  std::vector<double> sweep_gamma;
  std::vector<double> sweep_kt;
  std::vector<double> sweep_kts;
  std::vector<double> sweep_omega;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Field-by-field invariant check.  Violations are listed by field name;
// a transmission-style run whose packet is not well localized left of the
// barrier (q0 + 3 sigma0 >= 0) only warns.
ValidationReport validate_config(const ExperimentConfig& cfg);

}  // namespace slb
