#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace slb {

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  GaussHermite gh;
  gh.node.resize(n);
  gh.weight.resize(n);

  // Roots of H_n found by Newton iteration on the orthonormal recurrence;
  // weights from the Christoffel sum 1/sum_k htilde_k(x)^2.
  const long double pi14 = 0.7511255444649424828587030047762276930510L;  // pi^{-1/4}
  long double z = 0.0L;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0) {
      z = std::sqrt((long double)(2 * n + 1)) -
          1.85575L * std::pow((long double)(2 * n + 1), -0.16667L);
    } else if (i == 1) {
      z -= 1.14L * std::pow((long double)n, 0.426L) / z;
    } else if (i == 2) {
      z = 1.86L * z - 0.86L * gh.node[0];
    } else if (i == 3) {
      z = 1.91L * z - 0.91L * gh.node[1];
    } else {
      z = 2.0L * z - gh.node[i - 2];
    }
    for (int it = 0; it < 64; ++it) {
      long double p0 = pi14, p1 = 0.0L;
      for (int k = 0; k < n; ++k) {
        const long double p2 = p1;
        p1 = p0;
        p0 = z * std::sqrt(2.0L / (k + 1)) * p1 - std::sqrt((long double)k / (k + 1)) * p2;
      }
      // p0 = htilde_n(z), derivative = sqrt(2n) htilde_{n-1}(z)
      const long double dp = std::sqrt(2.0L * n) * p1;
      const long double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-18L * (1.0L + std::abs(z))) break;
    }
    long double p0 = pi14, p1 = 0.0L, sum = p0 * p0;
    for (int k = 0; k < n - 1; ++k) {
      const long double p2 = p1;
      p1 = p0;
      p0 = z * std::sqrt(2.0L / (k + 1)) * p1 - std::sqrt((long double)k / (k + 1)) * p2;
      sum += p0 * p0;
    }
    const double w = (double)(1.0L / sum);
    gh.node[i] = (double)z;
    gh.weight[i] = w;
    gh.node[n - 1 - i] = -(double)z;
    gh.weight[n - 1 - i] = w;
  }
  if (n % 2 == 1) gh.node[n / 2] = 0.0;
  return gh;
}

const GaussHermite& gauss_hermite_64() {
  static const GaussHermite gh = gauss_hermite(64);
  return gh;
}

double maxwell_boltzmann_average(double kb_temp, double mass,
                                 const std::function<double(double)>& f) {
  if (kb_temp == 0.0) return f(0.0);
  const GaussHermite& gh = gauss_hermite_64();
  const double scale = std::sqrt(2.0 * kb_temp / mass);
  const double inv_sqrt_pi = 0.5641895835477562869480794515607726;
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.node.size(); ++i) {
    acc += gh.weight[i] * f(scale * gh.node[i]);
  }
  return acc * inv_sqrt_pi;
}

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                       double fa, double fm, double fb, double whole, double rel_tol,
                       double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * (abs_tol + rel_tol * std::abs(left + right))) {
    return left + right + err / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, rel_tol, 0.5 * abs_tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, rel_tol, abs_tol, max_depth);
}

}  // namespace slb
