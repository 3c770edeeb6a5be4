#include "scaled_funcs.hpp"

#include <cmath>

namespace slb {

namespace {
// |a| t^2 below this uses the series; truncation error ~ (a t^2)^3/5040.
constexpr double kSeriesCut = 1e-6;
}

double cosh_like(double a, double t) {
  const double x = a * t * t;
  if (std::abs(x) < kSeriesCut) {
    return 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0;
  }
  return a > 0 ? std::cosh(std::sqrt(a) * t) : std::cos(std::sqrt(-a) * t);
}

double sinhc_like(double a, double t) {
  const double x = a * t * t;
  if (std::abs(x) < kSeriesCut) {
    return t * (1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0);
  }
  if (a > 0) {
    const double w = std::sqrt(a);
    return std::sinh(w * t) / w;
  }
  const double w = std::sqrt(-a);
  return std::sin(w * t) / w;
}

double damped_cosh_like(double a, double gamma, double t) {
  const double x = a * t * t;
  if (a > 0 && std::abs(x) >= kSeriesCut) {
    const double w = std::sqrt(a);
    return 0.5 * (std::exp((w - 0.5 * gamma) * t) + std::exp(-(w + 0.5 * gamma) * t));
  }
  return std::exp(-0.5 * gamma * t) * cosh_like(a, t);
}

double damped_sinhc_like(double a, double gamma, double t) {
  const double x = a * t * t;
  if (a > 0 && std::abs(x) >= kSeriesCut) {
    const double w = std::sqrt(a);
    return (std::exp((w - 0.5 * gamma) * t) - std::exp(-(w + 0.5 * gamma) * t)) / (2.0 * w);
  }
  return std::exp(-0.5 * gamma * t) * sinhc_like(a, t);
}

double expm1_ratio(double gamma, double t) {
  const double x = gamma * t;
  if (std::abs(x) < 1e-3) {
    return t * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0 + x * x * x * x / 120.0);
  }
  return -std::expm1(-x) / gamma;
}

double drift_kernel(double gamma, double t) {
  const double x = gamma * t;
  if (std::abs(x) < 1e-3) {
    return t * t * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0 + x * x * x * x / 720.0);
  }
  return (x + std::expm1(-x)) / (gamma * gamma);
}

}  // namespace slb
