#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scaled_funcs.hpp"

using namespace slb;

TEST_CASE("hyperbolic and trigonometric branches match the direct forms") {
  for (double t : {0.3, 1.7, 6.0}) {
    CHECK(cosh_like(4.0, t) == doctest::Approx(std::cosh(2.0 * t)).epsilon(1e-14));
    CHECK(sinhc_like(4.0, t) == doctest::Approx(std::sinh(2.0 * t) / 2.0).epsilon(1e-14));
    CHECK(cosh_like(-9.0, t) == doctest::Approx(std::cos(3.0 * t)).epsilon(1e-13));
    CHECK(sinhc_like(-9.0, t) == doctest::Approx(std::sin(3.0 * t) / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("series region joins the branch forms smoothly") {
  const double t = 1.0;
  for (double a : {9.9e-7, 1.01e-6, -9.9e-7, -1.01e-6}) {
    const double w = std::sqrt(std::abs(a));
    const double c_ref = a > 0 ? std::cosh(w * t) : std::cos(w * t);
    const double s_ref = a > 0 ? std::sinh(w * t) / w : std::sin(w * t) / w;
    CHECK(cosh_like(a, t) == doctest::Approx(c_ref).epsilon(1e-13));
    CHECK(sinhc_like(a, t) == doctest::Approx(s_ref).epsilon(1e-13));
  }
  CHECK(sinhc_like(0.0, 2.5) == doctest::Approx(2.5));
  CHECK(cosh_like(0.0, 2.5) == doctest::Approx(1.0));
}

TEST_CASE("damped kernels stay finite where the bare cosh overflows") {
  const double a = 1.0, gamma = 1.9, t = 800.0;
  CHECK(!std::isfinite(std::cosh(t)));
  const double c = damped_cosh_like(a, gamma, t);
  const double s = damped_sinhc_like(a, gamma, t);
  CHECK(std::isfinite(c));
  CHECK(c == doctest::Approx(0.5 * std::exp((1.0 - 0.95) * t)).epsilon(1e-12));
  CHECK(s == doctest::Approx(0.5 * std::exp((1.0 - 0.95) * t)).epsilon(1e-12));
}

TEST_CASE("damped kernels equal the plain product at moderate arguments") {
  for (double a : {2.0, -2.0}) {
    for (double t : {0.5, 3.0}) {
      const double e = std::exp(-0.25 * t);
      CHECK(damped_cosh_like(a, 0.5, t) ==
            doctest::Approx(e * cosh_like(a, t)).epsilon(1e-13));
      CHECK(damped_sinhc_like(a, 0.5, t) ==
            doctest::Approx(e * sinhc_like(a, t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("expm1_ratio limits and values") {
  CHECK(expm1_ratio(0.0, 3.0) == doctest::Approx(3.0));
  CHECK(expm1_ratio(0.2, 5.0) == doctest::Approx((1.0 - std::exp(-1.0)) / 0.2).epsilon(1e-15));
  // series region agrees with a long-double direct evaluation
  for (double g : {1e-5, 5e-4, 0.999e-3, 1.001e-3}) {
    const long double ref = -std::expm1l(-(long double)g * 1.0L) / (long double)g;
    CHECK(expm1_ratio(g, 1.0) == doctest::Approx((double)ref).epsilon(1e-13));
  }
}

TEST_CASE("drift_kernel limits and derivative identity") {
  CHECK(drift_kernel(0.0, 3.0) == doctest::Approx(4.5));
  const double g = 0.37, t = 2.1;
  CHECK(drift_kernel(g, t) ==
        doctest::Approx((g * t - 1.0 + std::exp(-g * t)) / (g * g)).epsilon(1e-14));
  // d/dt drift_kernel = expm1_ratio
  const double h = 1e-6;
  const double num = (drift_kernel(g, t + h) - drift_kernel(g, t - h)) / (2.0 * h);
  CHECK(num == doctest::Approx(expm1_ratio(g, t)).epsilon(1e-8));
}
