#pragma once

#include <cstddef>
#include <vector>

#include "core.hpp"
#include "noise.hpp"

namespace slb {

// Center trajectory on a uniform grid t_i = i dt.
struct CenterPath {
  double dt = 0.0;
  std::vector<double> q;
  std::vector<double> v;
  std::size_t steps() const { return q.empty() ? 0 : q.size() - 1; }
};

// Width trajectory on a uniform grid; sigma[i] > 0 throughout.
struct WidthPath {
  double dt = 0.0;
  std::vector<double> sigma;
  std::vector<double> sigma_dot;
  std::size_t steps() const { return sigma.empty() ? 0 : sigma.size() - 1; }
  double t_end() const { return dt * (double)steps(); }
};

struct PathPair {
  CenterPath center;
  WidthPath width;
};

enum class LangevinScheme {
  vanden_eijnden_ciccotti,  // weak order 2, velocity-Verlet limit at zero noise
  euler_maruyama,           // order 1 cross-check
};

// One-step driver for the stochastic center equation
//   qddot + gamma qdot + V'(q)/m = F_r/m.
// Used directly by ensemble builders so long runs never materialize the full
// fine-grained path.
class LangevinStepper {
 public:
  LangevinStepper(const PhysicalParams& params, const Potential& pot, double q0,
                  double v0, NoiseStream& stream, double dt,
                  LangevinScheme scheme = LangevinScheme::vanden_eijnden_ciccotti);

  void step();
  double q() const { return q_; }
  double v() const { return v_; }
  std::size_t index() const { return index_; }

 private:
  const Potential pot_;
  NoiseStream& stream_;
  double dt_;
  double gamma_;
  double sigma_v_;  // velocity noise amplitude sqrt(2 gamma kT / m)
  LangevinScheme scheme_;
  double q_, v_, f_;
  std::size_t index_ = 0;
};

CenterPath integrate_langevin(const PhysicalParams& params, const Potential& pot,
                              double q0, double v0, NoiseStream& stream, double dt,
                              double t_end,
                              LangevinScheme scheme = LangevinScheme::vanden_eijnden_ciccotti);

// Width equation  sigmaddot + gamma sigmadot - hbar^2/(4 m^2 sigma^3)
//                 + sigma V''/m = 0,  sigmadot(0) = 0,
// integrated with classic RK4.  Steps that would push sigma through zero are
// rejected and halved so the quantum-term singularity fails loudly instead of
// being clamped.  `classical` drops the hbar^2 term.
WidthPath integrate_pinney(const PhysicalParams& params, const Potential& pot,
                           double sigma0, double dt, double t_end,
                           bool classical = false);

struct CenterState {
  double q;
  double v;
};

// Closed-form noise-free center for the quadratic family, with series-stable
// gamma -> 0 and omega -> 0 limits.
CenterState analytic_center(const PhysicalParams& params, const Potential& pot,
                            double q0, double v0, double t);

// Cubic-Hermite view of a WidthPath for off-grid evaluation.
class WidthFunction {
 public:
  explicit WidthFunction(WidthPath path);
  double sigma(double t) const;
  double sigma_dot(double t) const;
  double t_end() const { return path_.t_end(); }
  const WidthPath& path() const { return path_; }

 private:
  WidthPath path_;
};

}  // namespace slb
