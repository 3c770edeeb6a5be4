#include "analytics.hpp"

#include <cmath>

#include "quadrature.hpp"
#include "scaled_funcs.hpp"

namespace slb::analytics {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
constexpr double kPi = 3.1415926535897932384626433832795;

double quantum_spread_rate_sq(const PhysicalParams& p, double sigma0) {
  // hbar^2 / (4 m^2 sigma0^4)
  const double r = p.hbar / (2.0 * p.mass * sigma0 * sigma0);
  return r * r;
}

void require_repeller(const Potential& pot, const char* who) {
  if (pot.kind() != PotentialKind::ParabolicRepeller) {
    throw std::invalid_argument(std::string(who) + ": parabolic repeller required");
  }
}

void require_curvature(const Potential& pot, const char* who) {
  if (!(pot.omega() > 0.0)) {
    throw std::invalid_argument(std::string(who) +
                                ": thermal barrier quantities need omega > 0");
  }
}

// u(t) = [cosh(Omega t) + (gamma/2Omega) sinh(Omega t)] e^{-gamma t/2}:
// the v0-independent part of the damped center, q(t) = q0 u(t) + v0 Sd(t).
double center_factor(const PhysicalParams& params, const Potential& pot, double t) {
  const double a = omega_eff_sq(params, pot);
  return damped_cosh_like(a, params.friction, t) +
         0.5 * params.friction * damped_sinhc_like(a, params.friction, t);
}

}  // namespace

double thermal_width(const Potential& pot, const PhysicalParams& params, double sigma0,
                     double t) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("thermal_width: sigma0 must be > 0");
  const double b = -pot.curvature_over_mass();  // +w^2 repeller, -w^2 harmonic, 0 free
  const double c = cosh_like(b, t);
  const double s = sinhc_like(b, t);
  const double rate2 =
      quantum_spread_rate_sq(params, sigma0) + params.kb_temp_sys / (params.mass * sigma0 * sigma0);
  return sigma0 * std::sqrt(c * c + rate2 * s * s);
}

double thermal_width_dissipative(const PhysicalParams& params, const Potential& pot,
                                 double sigma_gamma, double t) {
  const double a = omega_eff_sq(params, pot);
  const double sd = damped_sinhc_like(a, params.friction, t);
  return std::sqrt(sigma_gamma * sigma_gamma +
                   params.kb_temp_sys / params.mass * sd * sd);
}

MomentumStats momentum_stats(const Potential& pot, const PhysicalParams& params,
                             double sigma0, double q0, double t) {
  const double m = params.mass;
  const double base =
      params.hbar * params.hbar / (4.0 * sigma0 * sigma0) + m * params.kb_temp_sys;
  switch (pot.kind()) {
    case PotentialKind::Free:
      return {0.0, base, std::sqrt(base)};
    case PotentialKind::Linear: {
      const double slope = m * pot.linear_strength();  // V' = m g
      return {-slope * t, base + slope * slope * t * t, std::sqrt(base)};
    }
    case PotentialKind::ParabolicRepeller:
    case PotentialKind::Harmonic: {
      const double b = -pot.curvature_over_mass();
      const double c = cosh_like(b, t);
      const double bs = b * sinhc_like(b, t);  // omega sinh(omega t) continued
      const double p2 =
          base * c * c + m * m * (q0 * q0 + sigma0 * sigma0) * bs * bs;
      const double spread = std::sqrt(base * c * c + m * m * sigma0 * sigma0 * bs * bs);
      return {m * q0 * bs, p2, spread};
    }
  }
  return {0.0, base, std::sqrt(base)};
}

double wigner_free(const Potential& pot, const PhysicalParams& params, double sigma0,
                   double q0, double x, double p, double t) {
  if (pot.kind() != PotentialKind::Free) {
    throw std::invalid_argument("wigner_free: free potential required");
  }
  const double m = params.mass;
  const double b =
      params.hbar * params.hbar + 4.0 * m * sigma0 * sigma0 * params.kb_temp_sys;
  const double arg1 = 2.0 * sigma0 * sigma0 * p * p / b;
  const double u = m * (x - q0) + p * t;
  const double arg2 = u * u / (2.0 * m * m * sigma0 * sigma0);
  return std::exp(-arg1 - arg2) / (kPi * std::sqrt(b));
}

double momentum_distribution(const Potential& pot, const PhysicalParams& params,
                             double sigma0, double p) {
  if (pot.kind() != PotentialKind::Free) {
    throw std::invalid_argument("momentum_distribution: free potential required");
  }
  const double spread = momentum_stats(pot, params, sigma0, 0.0, 0.0).spread;
  return std::exp(-p * p / (2.0 * spread * spread)) / (kSqrt2Pi * spread);
}

ThermalMoments thermal_moments(const Potential& pot, const PhysicalParams& params,
                               double q0, double t) {
  const double m = params.mass;
  const double gamma = params.friction;
  const double kt = params.kb_temp;
  switch (pot.kind()) {
    case PotentialKind::Free: {
      return {q0, 0.0, q0 * q0 + 2.0 * (kt / m) * drift_kernel(gamma, t), kt / m};
    }
    case PotentialKind::Linear: {
      const double g = pot.linear_strength();
      const double qm = q0 - g * drift_kernel(gamma, t);
      const double vm = -g * expm1_ratio(gamma, t);
      return {qm, vm, qm * qm + 2.0 * (kt / m) * drift_kernel(gamma, t),
              vm * vm + kt / m};
    }
    case PotentialKind::ParabolicRepeller:
    case PotentialKind::Harmonic: {
      const double b = -pot.curvature_over_mass();
      const double a = b + 0.25 * gamma * gamma;
      const double sd = damped_sinhc_like(a, gamma, t);
      const double u = damped_cosh_like(a, gamma, t) + 0.5 * gamma * sd;
      const double qm = q0 * u;
      const double vm = q0 * b * sd;
      const double kt_mb = kt / (m * b);
      const double q2 = -kt_mb + (q0 * q0 + kt_mb) * u * u;
      const double v2 = kt / m + (q0 * q0 + kt_mb) * (b * sd) * (b * sd);
      return {qm, vm, q2, v2};
    }
  }
  return {q0, 0.0, q0 * q0, 0.0};
}

MsdDiffusion msd_and_diffusion(const PhysicalParams& params, double sigma_t,
                               double sigma0, double t) {
  const double msd_cl =
      2.0 * (params.kb_temp / params.mass) * drift_kernel(params.friction, t);
  const double dw = sigma_t - sigma0;
  const double msd_q = msd_cl + dw * dw;
  const double inv2t = t > 0.0 ? 1.0 / (2.0 * t) : 0.0;
  return {msd_cl, msd_q, msd_cl * inv2t, msd_q * inv2t};
}

double vacf(const PhysicalParams& params, double t) {
  return params.kb_temp / params.mass * std::exp(-params.friction * t);
}

double uncertainty_product(const PhysicalParams& params, double sigma,
                           double sigma_dot, double t) {
  const double m = params.mass;
  const double x_var = 2.0 * (params.kb_temp / m) * drift_kernel(params.friction, t) +
                       sigma * sigma;
  const double p_var = m * params.kb_temp + m * m * sigma_dot * sigma_dot +
                       params.hbar * params.hbar / (4.0 * sigma * sigma);
  return std::sqrt(x_var * p_var);
}

W1Stats w1_stats(const PhysicalParams& params, const Potential& pot, double q0,
                 double v0, double t) {
  require_repeller(pot, "w1_stats");
  require_curvature(pot, "w1_stats");
  const double b = -pot.curvature_over_mass();
  const double a = omega_eff_sq(params, pot);
  const double gamma = params.friction;
  const double sd = damped_sinhc_like(a, gamma, t);
  const double u = damped_cosh_like(a, gamma, t) + 0.5 * gamma * sd;
  const double mean = q0 * u + v0 * sd;
  const double kt_m = params.kb_temp / params.mass;
  double variance = kt_m / b * (u * u - 1.0) - kt_m * sd * sd;
  if (variance < 0.0) variance = 0.0;  // round-off near t = 0
  return {mean, variance, variance == 0.0};
}

double w1_density(const PhysicalParams& params, const Potential& pot, double q0,
                  double v0, double q, double t) {
  const W1Stats s = w1_stats(params, pot, q0, v0, t);
  if (s.degenerate) {
    throw std::domain_error("w1_density: degenerate point mass (no accumulated noise)");
  }
  const double d = q - s.mean;
  return std::exp(-d * d / (2.0 * s.variance)) / (kSqrt2Pi * std::sqrt(s.variance));
}

GaussianFront packet_front(ThermalMode mode, const PhysicalParams& params,
                           const Potential& pot, const PacketSetup& setup,
                           const WidthFunction& width, double t) {
  require_repeller(pot, "packet_front");
  const double sg = width.sigma(t);
  switch (mode) {
    case ThermalMode::pure: {
      const CenterState c = analytic_center(params, pot, setup.q0, setup.v0, t);
      return {c.q, sg};
    }
    case ThermalMode::thermal_dissipative: {
      const double u = center_factor(params, pot, t);
      return {setup.q0 * u, thermal_width_dissipative(params, pot, sg, t)};
    }
    case ThermalMode::stochastic: {
      if (params.kb_temp > 0.0) require_curvature(pot, "packet_front");
      const double b = -pot.curvature_over_mass();
      const double u = center_factor(params, pot, t);
      double delta2 = b > 0.0
                          ? params.kb_temp / (params.mass * b) * (u * u - 1.0)
                          : 0.0;
      if (delta2 < 0.0) delta2 = 0.0;
      return {setup.q0 * u, std::sqrt(sg * sg + delta2)};
    }
  }
  return {setup.q0, sg};
}

double transmission_probability(ThermalMode mode, const PhysicalParams& params,
                                const Potential& pot, const PacketSetup& setup,
                                const WidthFunction& width, double t) {
  const GaussianFront f = packet_front(mode, params, pot, setup, width, t);
  return 0.5 * std::erfc(-f.center / (kSqrt2 * f.width));
}

double transmission_probability_exact(const PhysicalParams& params, const Potential& pot,
                                      const PacketSetup& setup, const WidthFunction& width,
                                      double t) {
  require_repeller(pot, "transmission_probability_exact");
  const CenterState c = analytic_center(params, pot, setup.q0, setup.v0, t);
  const double num = std::erf(c.q / (kSqrt2 * width.sigma(t))) -
                     std::erf(setup.q0 / (kSqrt2 * setup.sigma0));
  const double den = std::erfc(setup.q0 / (kSqrt2 * setup.sigma0));
  return num / den;
}

double q_beyond(ThermalMode mode, const PhysicalParams& params, const Potential& pot,
                const PacketSetup& setup, const WidthFunction& width, double x, double t) {
  const GaussianFront f = packet_front(mode, params, pot, setup, width, t);
  return 0.5 * std::erfc((x - f.center) / (kSqrt2 * f.width));
}

double q_beyond_frictionless_center(const PhysicalParams& params, const Potential& pot,
                                    const PacketSetup& setup, const WidthFunction& width,
                                    double x, double t) {
  require_repeller(pot, "q_beyond_frictionless_center");
  const double b = -pot.curvature_over_mass();
  const double center = setup.q0 * cosh_like(b, t);
  const double w = thermal_width_dissipative(params, pot, width.sigma(t), t);
  return 0.5 * std::erfc((x - center) / (kSqrt2 * w));
}

namespace {

double default_width_dt(const PhysicalParams& params, double sigma0) {
  const DimensionlessUnits units{sigma0, params.mass, params.hbar};
  return 1e-3 * units.time_unit();
}

double initial_horizon(const PhysicalParams& params, double sigma0, double scale) {
  const DimensionlessUnits units{sigma0, params.mass, params.hbar};
  double t = scale * units.time_unit();
  if (params.friction > 0.0) t = std::max(t, 40.0 / params.friction);
  return t;
}

}  // namespace

double stationary_transmission(ThermalMode mode, const PhysicalParams& params,
                               const Potential& pot, const PacketSetup& setup) {
  require_repeller(pot, "stationary_transmission");
  const double dt = default_width_dt(params, setup.sigma0);
  double horizon = initial_horizon(params, setup.sigma0, 100.0);
  for (int attempt = 0; attempt < 7; ++attempt) {
    const WidthFunction width(
        integrate_pinney(params, pot, setup.sigma0, dt, horizon));
    auto arg_at = [&](double t) {
      const GaussianFront f = packet_front(mode, params, pot, setup, width, t);
      return -f.center / (kSqrt2 * f.width);
    };
    const double a_half = arg_at(0.5 * horizon);
    const double a_full = arg_at(horizon);
    if (std::isfinite(a_full) &&
        std::abs(a_full - a_half) <= 1e-7 * (1.0 + std::abs(a_full))) {
      return 0.5 * std::erfc(a_full);
    }
    horizon *= 2.0;
  }
  throw numerical_error("stationary_transmission: no plateau reached");
}

double dwell_time(ThermalMode mode, const PhysicalParams& params, const Potential& pot,
                  const PacketSetup& setup, double x1, double x2) {
  require_repeller(pot, "dwell_time");
  if (x1 > x2) throw std::invalid_argument("dwell_time: x1 must be <= x2");
  if (x1 == x2) return 0.0;

  const double dt = default_width_dt(params, setup.sigma0);
  double horizon = initial_horizon(params, setup.sigma0, 400.0);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const WidthFunction width(
        integrate_pinney(params, pot, setup.sigma0, dt, horizon));
    auto inside = [&](double t) {
      return q_beyond(mode, params, pot, setup, width, x1, t) -
             q_beyond(mode, params, pot, setup, width, x2, t);
    };
    // Composite Simpson on a uniform grid; the interpolated width keeps the
    // integrand only piecewise smooth, so adaptive refinement is a poor fit.
    auto simpson = [&](double a, double b, int n) {
      const double h = (b - a) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * inside(a + h * i);
      }
      return acc * h / 3.0;
    };
    const double head = simpson(0.0, 0.5 * horizon, 1 << 16);
    const double tail = simpson(0.5 * horizon, horizon, 1 << 16);
    const double total = head + tail;
    if (std::abs(tail) <= std::max(1e-6 * std::abs(total), 1e-250) &&
        inside(horizon) < 1e-12) {
      return total;
    }
    horizon *= 2.0;
  }
  throw numerical_error("dwell_time: integrand failed the decay test");
}

}  // namespace slb::analytics
