#pragma once

#include <functional>
#include <vector>

namespace slb {

struct GaussHermite {
  std::vector<double> node;
  std::vector<double> weight;  // for integral of e^{-x^2} f(x)
};

// Nodes and weights of the n-point Gauss-Hermite rule, Newton-refined from
// asymptotic initial guesses.
GaussHermite gauss_hermite(int n);

// Shared 64-point rule used for Maxwell-Boltzmann velocity averages.
const GaussHermite& gauss_hermite_64();

// Average of f(v) over the Maxwell-Boltzmann velocity density with
// variance kb_temp/mass.  kb_temp = 0 collapses to f(0).
double maxwell_boltzmann_average(double kb_temp, double mass,
                                 const std::function<double(double)>& f);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth = 40);

}  // namespace slb
