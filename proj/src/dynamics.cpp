#include "dynamics.hpp"

#include <cmath>
#include <string>

#include "scaled_funcs.hpp"

namespace slb {

LangevinStepper::LangevinStepper(const PhysicalParams& params, const Potential& pot,
                                 double q0, double v0, NoiseStream& stream, double dt,
                                 LangevinScheme scheme)
    : pot_(pot),
      stream_(stream),
      dt_(dt),
      gamma_(params.friction),
      scheme_(scheme),
      q_(q0),
      v_(v0) {
  if (!(dt > 0.0)) throw std::invalid_argument("LangevinStepper: dt must be > 0");
  sigma_v_ = std::sqrt(2.0 * gamma_ * params.kb_temp / params.mass);
  f_ = -pot_.slope_over_mass(q_);
}

void LangevinStepper::step() {
  const double h = dt_;
  if (scheme_ == LangevinScheme::euler_maruyama) {
    const double qn = q_ + h * v_;
    double vn = v_ + h * (f_ - gamma_ * v_);
    if (sigma_v_ != 0.0) vn += sigma_v_ * std::sqrt(h) * stream_.normal();
    q_ = qn;
    v_ = vn;
    f_ = -pot_.slope_over_mass(q_);
  } else {
    double xi = 0.0, eta = 0.0;
    if (sigma_v_ != 0.0) {
      xi = stream_.normal();
      eta = stream_.normal();
    }
    const double sqrt_h = std::sqrt(h);
    const double corr =
        sigma_v_ * h * sqrt_h * (0.5 * xi + 0.28867513459481288225457439025098 * eta);
    const double a = 0.5 * h * h * (f_ - gamma_ * v_) + corr;
    const double qn = q_ + h * v_ + a;
    const double fn = -pot_.slope_over_mass(qn);
    const double vn = v_ + 0.5 * h * (f_ + fn) - h * gamma_ * v_ +
                      sigma_v_ * sqrt_h * xi - gamma_ * a;
    q_ = qn;
    v_ = vn;
    f_ = fn;
  }
  ++index_;
  if (!std::isfinite(q_) || !std::isfinite(v_)) {
    throw numerical_error("langevin state not finite at step " + std::to_string(index_));
  }
}

CenterPath integrate_langevin(const PhysicalParams& params, const Potential& pot,
                              double q0, double v0, NoiseStream& stream, double dt,
                              double t_end, LangevinScheme scheme) {
  if (!(t_end >= dt)) throw std::invalid_argument("integrate_langevin: t_end must be >= dt");
  const std::size_t n = (std::size_t)std::llround(t_end / dt);
  CenterPath path;
  path.dt = dt;
  path.q.resize(n + 1);
  path.v.resize(n + 1);
  LangevinStepper s(params, pot, q0, v0, stream, dt, scheme);
  path.q[0] = q0;
  path.v[0] = v0;
  for (std::size_t i = 1; i <= n; ++i) {
    s.step();
    path.q[i] = s.q();
    path.v[i] = s.v();
  }
  return path;
}

namespace {

struct WidthRhs {
  double qterm;  // hbar^2 / (4 m^2), zero in classical mode
  double gamma;
  double curv;  // V''/m

  void operator()(double sigma, double sigma_dot, double& d_sigma, double& d_sigma_dot) const {
    d_sigma = sigma_dot;
    d_sigma_dot = qterm / (sigma * sigma * sigma) - gamma * sigma_dot - curv * sigma;
  }
};

// RK4 step; returns false if any stage leaves sigma <= 0.
bool rk4_width_step(const WidthRhs& rhs, double h, double& sigma, double& sigma_dot) {
  double k1s, k1v, k2s, k2v, k3s, k3v, k4s, k4v;
  rhs(sigma, sigma_dot, k1s, k1v);
  double s = sigma + 0.5 * h * k1s, v = sigma_dot + 0.5 * h * k1v;
  if (!(s > 0.0)) return false;
  rhs(s, v, k2s, k2v);
  s = sigma + 0.5 * h * k2s;
  v = sigma_dot + 0.5 * h * k2v;
  if (!(s > 0.0)) return false;
  rhs(s, v, k3s, k3v);
  s = sigma + h * k3s;
  v = sigma_dot + h * k3v;
  if (!(s > 0.0)) return false;
  rhs(s, v, k4s, k4v);
  const double ns = sigma + h / 6.0 * (k1s + 2.0 * (k2s + k3s) + k4s);
  const double nv = sigma_dot + h / 6.0 * (k1v + 2.0 * (k2v + k3v) + k4v);
  if (!(ns > 0.0) || !std::isfinite(ns) || !std::isfinite(nv)) return false;
  sigma = ns;
  sigma_dot = nv;
  return true;
}

}  // namespace

WidthPath integrate_pinney(const PhysicalParams& params, const Potential& pot,
                           double sigma0, double dt, double t_end, bool classical) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("integrate_pinney: sigma0 must be > 0");
  if (!(dt > 0.0) || !(t_end >= dt))
    throw std::invalid_argument("integrate_pinney: need dt > 0 and t_end >= dt");

  WidthRhs rhs;
  rhs.qterm = classical ? 0.0
                        : params.hbar * params.hbar / (4.0 * params.mass * params.mass);
  rhs.gamma = params.friction;
  rhs.curv = pot.curvature_over_mass();

  const std::size_t n = (std::size_t)std::llround(t_end / dt);
  WidthPath path;
  path.dt = dt;
  path.sigma.resize(n + 1);
  path.sigma_dot.resize(n + 1);
  path.sigma[0] = sigma0;
  path.sigma_dot[0] = 0.0;

  double sigma = sigma0, sigma_dot = 0.0;
  const double h_min = dt * 0x1p-40;
  for (std::size_t i = 1; i <= n; ++i) {
    double remaining = dt;
    double h = dt;
    while (remaining > 0.0) {
      if (h > remaining) h = remaining;
      if (rk4_width_step(rhs, h, sigma, sigma_dot)) {
        remaining -= h;
        if (h < dt) h *= 2.0;
      } else {
        h *= 0.5;
        if (h < h_min) {
          throw numerical_error("pinney step size underflow near t = " +
                                std::to_string((double)i * dt) +
                                " (width collapsing toward zero)");
        }
      }
    }
    path.sigma[i] = sigma;
    path.sigma_dot[i] = sigma_dot;
  }
  return path;
}

CenterState analytic_center(const PhysicalParams& params, const Potential& pot,
                            double q0, double v0, double t) {
  const double gamma = params.friction;
  switch (pot.kind()) {
    case PotentialKind::Free: {
      const double e = std::exp(-gamma * t);
      return {q0 + v0 * expm1_ratio(gamma, t), v0 * e};
    }
    case PotentialKind::Linear: {
      const double g = pot.linear_strength();
      const double e = std::exp(-gamma * t);
      return {q0 + v0 * expm1_ratio(gamma, t) - g * drift_kernel(gamma, t),
              v0 * e - g * expm1_ratio(gamma, t)};
    }
    case PotentialKind::ParabolicRepeller:
    case PotentialKind::Harmonic: {
      const double kappa = -pot.curvature_over_mass();  // +w^2 repeller, -w^2 harmonic
      const double a = kappa + 0.25 * gamma * gamma;
      const double cd = damped_cosh_like(a, gamma, t);
      const double sd = damped_sinhc_like(a, gamma, t);
      return {q0 * (cd + 0.5 * gamma * sd) + v0 * sd,
              q0 * kappa * sd + v0 * (cd - 0.5 * gamma * sd)};
    }
  }
  return {q0, v0};
}

WidthFunction::WidthFunction(WidthPath path) : path_(std::move(path)) {
  if (path_.sigma.size() < 2) throw std::invalid_argument("WidthFunction: empty path");
}

double WidthFunction::sigma(double t) const {
  const double dt = path_.dt;
  if (t <= 0.0) return path_.sigma.front();
  const double pos = t / dt;
  const std::size_t n = path_.steps();
  if (pos >= (double)n) {
    if (t > path_.t_end() * (1.0 + 1e-9) + dt)
      throw std::out_of_range("WidthFunction: t beyond integrated range");
    return path_.sigma.back();
  }
  const std::size_t i = (std::size_t)pos;
  const double u = pos - (double)i;
  const double s0 = path_.sigma[i], s1 = path_.sigma[i + 1];
  const double d0 = path_.sigma_dot[i] * dt, d1 = path_.sigma_dot[i + 1] * dt;
  const double u2 = u * u, u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * s0 + (u3 - 2.0 * u2 + u) * d0 +
         (-2.0 * u3 + 3.0 * u2) * s1 + (u3 - u2) * d1;
}

double WidthFunction::sigma_dot(double t) const {
  const double dt = path_.dt;
  if (t <= 0.0) return path_.sigma_dot.front();
  const double pos = t / dt;
  const std::size_t n = path_.steps();
  if (pos >= (double)n) {
    if (t > path_.t_end() * (1.0 + 1e-9) + dt)
      throw std::out_of_range("WidthFunction: t beyond integrated range");
    return path_.sigma_dot.back();
  }
  const std::size_t i = (std::size_t)pos;
  const double u = pos - (double)i;
  const double s0 = path_.sigma[i], s1 = path_.sigma[i + 1];
  const double d0 = path_.sigma_dot[i] * dt, d1 = path_.sigma_dot[i + 1] * dt;
  const double u2 = u * u;
  const double dv = (6.0 * u2 - 6.0 * u) * s0 + (3.0 * u2 - 4.0 * u + 1.0) * d0 +
                    (-6.0 * u2 + 6.0 * u) * s1 + (3.0 * u2 - 2.0 * u) * d1;
  return dv / dt;
}

}  // namespace slb
